#pragma once

#include "fbasis/expr.hpp"
#include "fbasis/natset.hpp"
#include "fbasis/scalar.hpp"

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace fbasis {

/// c * n^beta * ln(n+1)^gamma.
struct PowerLogSeq {
  Scalar c;
  Rational beta;
  Rational gamma;
  // Cached for fast numeric evaluation.
  double beta_d = 0;
  double gamma_d = 0;
};
struct ConstantSeq {
  Scalar c;
};
/// values[0..k) at n = 1..k, then tail(n) with the tail indexed absolutely.
struct PrefixSeq {
  std::vector<Scalar> values;
  ScalarSeq tail;
};
/// Each n is owned by exactly one piece.
struct PiecewiseSeq {
  std::vector<std::pair<SetExpr, ScalarSeq>> pieces;
};

struct SeqNode {
  std::variant<PowerLogSeq, ConstantSeq, PrefixSeq, PiecewiseSeq> v;
};

namespace seqs {
ScalarSeq powlog(Scalar c, Rational beta, Rational gamma);
ScalarSeq power(Scalar c, Rational beta);
ScalarSeq constant(Scalar c);
ScalarSeq prefix(std::vector<Scalar> values, ScalarSeq tail);
/// Throws DomainError unless the pieces are provably disjoint and covering.
ScalarSeq piecewise(std::vector<std::pair<SetExpr, ScalarSeq>> pieces);
}  // namespace seqs

/// One symbolic term c * n^beta * ln(n+1)^gamma restricted to `domain`.
struct SeqTerm {
  SetExpr domain;
  Scalar c;
  Rational beta;
  Rational gamma;
};

/// A sequence as explicit values at finitely many indices plus symbolic terms
/// on disjoint domains. Together they cover every n exactly once.
struct FlatSeq {
  std::vector<std::pair<std::uint64_t, Scalar>> values;
  std::vector<SeqTerm> terms;
};

FlatSeq flatten(const ScalarSeq& a);

Scalar eval_at(const ScalarSeq& a, std::uint64_t n);
double eval_double(const ScalarSeq& a, std::uint64_t n);
double eval_term(const SeqTerm& t, std::uint64_t n);

/// Pointwise a^e. Requires a > 0 wherever e is not an integer.
ScalarSeq seq_pow(const ScalarSeq& a, const Rational& e);
ScalarSeq seq_mul(const ScalarSeq& a, const ScalarSeq& b);
ScalarSeq seq_scale(const ScalarSeq& a, const Scalar& k);

/// Structural identity (same printed canonical form).
bool same_seq(const ScalarSeq& a, const ScalarSeq& b);

/// All values > 0.
Tri is_positive(const ScalarSeq& a);
/// sup |a_n| < infinity.
Tri is_bounded(const ScalarSeq& a);
/// inf a_n > 0, for positive a.
Tri is_bounded_below(const ScalarSeq& a);
/// a_{n+1} >= a_n for all large n.
Tri eventually_nondecreasing(const ScalarSeq& a);
/// a_n -> 0.
Tri tends_to_zero(const ScalarSeq& a);

/// sum_{n in I} a_n^{-p}.
SumVerdict sum_inverse_p_verdict(const ScalarSeq& a, const Rational& p, const SetExpr& I,
                                 const Settings& settings = {});

}  // namespace fbasis
