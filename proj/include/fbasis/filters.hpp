#pragma once

#include "fbasis/natset.hpp"
#include "fbasis/sequences.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace fbasis {

struct FilterSpec;

struct FrechetFilter {};
struct StatisticalFilter {};
/// {A : sum over the complement of A of the weights is finite}.
struct SummableFilter {
  ScalarSeq weights;
};
/// Sets containing B cap I for some member B of the base filter.
struct TraceFilter {
  std::shared_ptr<const FilterSpec> base;
  SetExpr subset;
};

struct FilterSpec {
  std::variant<FrechetFilter, StatisticalFilter, SummableFilter, TraceFilter> v;
};

namespace filters {
FilterSpec frechet();
FilterSpec statistical();
/// Throws DomainError unless the weights are nonnegative with divergent sum.
FilterSpec summable(ScalarSeq weights, const Settings& settings = {});
}  // namespace filters

enum class SetClass { Member, Negligible, Stationary, Inconclusive };
std::string to_string(SetClass c);

/// True when A belongs to the dual ideal.
Tri is_negligible(const SetExpr& A, const FilterSpec& F, const Settings& settings = {});
/// True when A meets every member, i.e. A is not negligible.
Tri stationarity(const SetExpr& A, const FilterSpec& F, const Settings& settings = {});
SetClass classify_set(const SetExpr& A, const FilterSpec& F, const Settings& settings = {});

/// Restriction of F to I. Throws NotStationary unless I is provably not negligible.
FilterSpec trace_filter(const FilterSpec& F, const SetExpr& I, const Settings& settings = {});

/// {n : |x_n - target| > eps}, symbolic where the terms of x are eventually
/// monotone within reach, otherwise sampled up to the horizon.
SetExpr exceedance_set(const ScalarSeq& x, const Scalar& target, const Rational& eps,
                       const Settings& settings = {});

struct LimitVerdict {
  enum class Kind { ConvergesTo, DoesNotConverge, Inconclusive };
  struct Step {
    Rational eps;
    SetExpr exceptional;
    SetClass verdict;
  };
  Kind kind = Kind::Inconclusive;
  Scalar target;
  /// Meaningful for DoesNotConverge.
  Rational eps = 0;
  std::vector<Step> steps;
};
std::string to_string(LimitVerdict::Kind k);

/// {1, 1/2, ..., 2^-20}.
std::vector<Rational> default_eps_schedule();

LimitVerdict f_limit_scalar(const ScalarSeq& x, const FilterSpec& F, const Scalar& target,
                            const std::vector<Rational>& schedule = default_eps_schedule(),
                            const Settings& settings = {});

struct DomVerdict {
  enum class Kind { Proved, Refuted, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::string rule;
  std::optional<SetExpr> witness;
};
std::string to_string(DomVerdict::Kind k);

/// Whether F1 contains F2.
DomVerdict dominates(const FilterSpec& F1, const FilterSpec& F2, const Settings& settings = {});

/// Residue classes, geometric sets and their complements, in search order.
std::vector<SetExpr> witness_library();

bool same_filter(const FilterSpec& a, const FilterSpec& b);

}  // namespace fbasis
