#pragma once

#include "fbasis/basis_builder.hpp"
#include "fbasis/lp_operators.hpp"
#include "fbasis/sequences.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fbasis {

/// l_inf-diagonal: functionals a_n e*_n tested against x in l_1 (p = 1).
/// l_2-diagonal: a_n e_n in l_2 tested against h in l_2 (p = 2).
enum class DualKind { LinfDiagonal, L2Diagonal };
std::string to_string(DualKind k);
DualKind parse_dual_kind(std::string_view text);

/// x_n = (1 + eps) / a_n with |a_n x_n| = 1 + eps for every n.
struct PlankSeparator {
  DualKind dual;
  Rational eps;
  ScalarSeq x;
  /// Convergent sum of a_n^{-p} backing the norm bound.
  SumVerdict sum;
  /// ||x||_1 <= norm_bound (l_inf) or ||h||_2^2 <= norm_bound (l_2).
  double norm_bound = 0.0;
  /// The product a_n x_n reduced symbolically.
  ScalarSeq product;
  bool identity_holds = false;
};

/// Throws NotSeparable when the sum diverges and Undecided when it is not
/// decided within the horizon.
PlankSeparator plank_separator(const ScalarSeq& a, DualKind dual, const Rational& eps,
                               const Settings& settings = {});

struct ClusterWitness {
  bool found = false;
  std::uint64_t m = 0;
  /// |a_m (x_k)_m| per test vector at m (found) or at the running minimum.
  std::vector<double> maxima;
  double running_min = 0.0;
  std::uint64_t running_min_at = 0;
  std::uint64_t horizon = 0;
  /// Verdict on sum a_n^{-p} for the p paired with the dual exponent.
  SumVerdict regime;
};

/// Smallest m <= horizon with max_k |a_m (x_k)_m| < 1. `dual_p` is the
/// exponent of the space holding the x_k (1, p' or 2).
ClusterWitness cluster_witness(const ScalarSeq& a, const Rational& dual_p,
                               const std::vector<TestVector>& xs, std::uint64_t horizon,
                               const Settings& settings = {});

struct ProfileRow {
  std::uint64_t n;
  double A;
  double B;
};

struct Lemma1Profile {
  std::vector<ProfileRow> rows;
  bool bound_holds = true;
  bool b_decreasing = true;
};

/// A(n) = sum_m p_{n,m} sum_k |a_m (x_k)_m| with p_{n,m} = a_m^{-1} / sum_{j<=n} a_j^{-1},
/// against B(n) = sum_k ||x_k||_1 / sum_{j<=n} a_j^{-1}. Throws DomainError
/// unless sum a_n^{-1} diverges.
Lemma1Profile lemma1_profile(const ScalarSeq& a, const std::vector<TestVector>& xs,
                             std::vector<std::uint64_t> grid, const Settings& settings = {});

/// Rank-one T_n = (a_n e*_n) (x) e_anchor.
struct LiftedOperator {
  std::size_t n;
  /// Functional coordinates (only coordinate n is nonzero).
  std::vector<Scalar> functional;
  std::size_t anchor;
  Scalar norm;
};

/// Throws DimensionMismatch unless anchor and n_max fit the dimension.
std::vector<LiftedOperator> lift_functionals_to_operators(const ScalarSeq& a, std::size_t anchor,
                                                          std::size_t n_max, const SpaceKind& space);

struct ExtractedFunctional {
  std::size_t n;
  std::vector<Scalar> functional;
  /// ||x*_n|| in the dual norm; equals op_norm.
  Scalar norm;
  Scalar op_norm;
  /// max |x*_n(x)| / ||T_n x|| over the samples; the proof guarantees <= 2.
  double worst_ratio = 0.0;
  bool ok = true;
};

/// Functionals y* o T_n rescaled to norm ||T_n||, with y* norming T_n x0 at a
/// maximizing x0, checked against `samples` seeded random vectors.
std::vector<ExtractedFunctional> extract_functionals(const std::vector<TailOp>& stages,
                                                     std::size_t samples, std::uint64_t seed);

/// Dual-exponent norm of a functional on l_p (max for p = 1).
Scalar dual_norm(const std::vector<Scalar>& f, const Rational& p);

}  // namespace fbasis
