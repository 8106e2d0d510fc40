#pragma once

#include "fbasis/scalar.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fbasis {

/// l_p truncated to the first `dimension` coordinates. A dimension of 0
/// means "as small as the operator at hand allows".
struct SpaceKind {
  Rational p = 1;
  std::size_t dimension = 0;

  static SpaceKind l1(std::size_t dimension = 0) { return {Rational(1), dimension}; }
  static SpaceKind l2(std::size_t dimension = 0) { return {Rational(2), dimension}; }
  static SpaceKind lp(const Rational& p, std::size_t dimension = 0);

  bool is_l1() const { return p == 1; }
  bool is_l2() const { return p == 2; }
  double p_value() const { return to_double(p); }
  /// "l1", "l2" or "lp(3/2)".
  std::string name() const;
};

/// The stage-n operator x -> (x_1, ..., x_n, 0, ...) - (x_{n+1} / b_{n+1}) v_n
/// with v_n = sum_{i<=n} b_i e_i, stored through its coefficients only.
class TailOp {
 public:
  /// `b` must hold at least n+1 positive coefficients; extra ones are ignored.
  TailOp(std::size_t n, std::vector<Scalar> b, SpaceKind space);

  std::size_t n() const noexcept { return n_; }
  const std::vector<Scalar>& b() const noexcept { return b_; }
  const SpaceKind& space() const noexcept { return space_; }

  /// u_i = b_i / b_{n+1}, i = 1..n.
  std::vector<Scalar> u() const;
  std::vector<double> u_double() const;

 private:
  std::size_t n_;
  std::vector<Scalar> b_;
  SpaceKind space_;
};

enum class NormMethod { ColumnMax, ClosedFormL2, NumericOpt, BruteForce, RankOne };
std::string to_string(NormMethod m);

struct NormReport {
  Scalar value;
  NormMethod method = NormMethod::NumericOpt;
  double lower = 0.0;
  double upper = 0.0;
  /// A vector at which the norm is attained (empty for RankOne).
  std::vector<double> argmax;
};

std::vector<Scalar> apply_op(const TailOp& T, const std::vector<Scalar>& x);
std::vector<double> apply_op(const TailOp& T, const std::vector<double>& x);

double lp_norm(const std::vector<double>& x, double p);
/// Exact for p = 1; for p = 2 exact through the square.
Scalar lp_norm_exact(const std::vector<Scalar>& x, const Rational& p);

/// Operator norm on the space of T: column maximum for p = 1, closed form for
/// p = 2, constrained maximization otherwise. Throws ConvergenceFailure.
NormReport op_norm(const TailOp& T);

/// The maximization path regardless of p.
NormReport op_norm_numeric(const TailOp& T);

/// Riesz-Thorin bound from the l_1 and l_inf operator norms.
double riesz_thorin_bound(const TailOp& T);

/// Lower bound from signed basis directions, `budget` seeded random unit
/// vectors and coordinate ascent from the best of them. Deterministic per seed.
NormReport op_norm_bruteforce(const TailOp& T, std::size_t budget, std::uint64_t seed);

/// b_{n+1} making the stage-n norm equal a_target. Throws DomainError for
/// a_target <= 1 and ConvergenceFailure if bisection stalls.
Scalar solve_b_next(const std::vector<Scalar>& b, const Scalar& a_target, const SpaceKind& space);

/// Norm of Id - T on the truncation (needs dimension > n+1).
NormReport remainder_norm(const TailOp& T);

/// Dense matrix of T on the first `dimension` coordinates, row-major.
std::vector<std::vector<double>> dense_matrix(const TailOp& T, std::size_t dimension);

}  // namespace fbasis
