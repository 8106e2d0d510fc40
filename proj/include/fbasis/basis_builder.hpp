#pragma once

#include "fbasis/admissibility.hpp"
#include "fbasis/filters.hpp"
#include "fbasis/lp_operators.hpp"
#include "fbasis/sequences.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fbasis {

/// A vector of the sequence space in one of three shapes:
///   unit(k) / coords[x1, x2, ...]  finitely supported
///   SEQ                            x_n = seq(n) for every n
///   spike(SET; SEQ)                x_{n+1} = seq(n) for n in SET, 0 elsewhere
struct TestVector {
  enum class Kind { Finite, Sequence, Spike };
  Kind kind = Kind::Finite;
  std::vector<Scalar> coords;
  std::optional<ScalarSeq> seq;
  std::optional<SetExpr> spikes;

  /// Coordinate x_n, n >= 1.
  Scalar at(std::uint64_t n) const;
  double at_double(std::uint64_t n) const;
  std::string text() const;
};

TestVector parse_test_vector(std::string_view text);

/// The biorthogonal system v_n = sum_{i<=n} b_i e_i, v*_n = e*_n/b_n - e*_{n+1}/b_{n+1}
/// with b chosen so that the stage-n partial sum operator has norm a_n.
struct BasisSystem {
  SpaceKind space;
  ScalarSeq target;
  FilterSpec filter;
  /// b_1..b_{n_max}.
  std::vector<Scalar> coefficients;
  /// Stages n = 1..n_max-1.
  std::vector<TailOp> stages;
  std::vector<NormReport> norms;
  /// c_n = ||v_n|| / b_{n+1}.
  std::vector<Scalar> defect_coeffs;
  Rational gate_p;
  AdmissVerdict gate;
  std::vector<std::string> caveats;
  /// Violated invariants; empty when every check passed.
  std::vector<std::string> failures;
};

/// Throws DomainError when some a_n <= 1 (n <= n_max), NotAdmissible when the
/// gate refutes the target, ConvergenceFailure from the solver.
BasisSystem build_basis(const ScalarSeq& a, const SpaceKind& space, const FilterSpec& F,
                        std::size_t n_max, const Settings& settings = {});

struct BiorthogonalityReport {
  /// gram[m-1][n-1] = v*_m(v_n) for m < n_max, n <= n_max.
  std::vector<std::vector<Scalar>> gram;
  bool exact = true;
  double max_error = 0.0;
  bool ok = true;
};
BiorthogonalityReport verify_biorthogonality(const BasisSystem& sys);

struct DefectReport {
  std::vector<Scalar> c;
  /// |c_n - a_n|.
  std::vector<double> gap;
  bool bound_ok = true;
  /// c_n = a_n exactly at every stage (expected in l1).
  bool equals_target = false;
  /// Symbolic majorant of c_n used for the limit verdict.
  ScalarSeq majorant;
  /// lim_F c_n x_{n+1} = 0 for x_n = n^{-2}.
  LimitVerdict::Kind family_verdict = LimitVerdict::Kind::Inconclusive;
};
DefectReport defect_report(const BasisSystem& sys, const Settings& settings = {});

struct FilterConvergence {
  std::string filter;
  LimitVerdict::Kind verdict = LimitVerdict::Kind::Inconclusive;
  /// Per eps: the exceptional set {n : d_n > eps} (or a superset) and its class.
  std::vector<LimitVerdict::Step> steps;
  Rational failing_eps = 0;
};

struct ConvergenceReport {
  std::string vector;
  /// d_n = |x_{n+1}| c_n on the built stages.
  std::vector<Scalar> defects;
  /// True when the exceptional sets are exact rather than enclosing supersets.
  bool exact_sets = false;
  std::vector<FilterConvergence> verdicts;  // system filter first, then Frechet
  std::vector<std::string> caveats;
};

/// Throws DimensionMismatch when a finitely supported x does not fit the
/// built stages and DomainError when x is not in the space.
ConvergenceReport convergence_demo(const BasisSystem& sys, const TestVector& x,
                                   const std::vector<Rational>& schedule = default_eps_schedule(),
                                   const Settings& settings = {});

}  // namespace fbasis
