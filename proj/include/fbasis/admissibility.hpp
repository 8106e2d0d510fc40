#pragma once

#include "fbasis/filters.hpp"
#include "fbasis/natset.hpp"
#include "fbasis/sequences.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fbasis {

/// Verdict on whether sum_{n in I} a_n^{-p} diverges for every stationary I.
struct AdmissVerdict {
  enum class Kind { Proved, Refuted, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Criterion that produced a Proved/Refuted verdict, or why none applied.
  std::string criterion;
  std::optional<SetExpr> witness;
  /// For Refuted: how the witness classifies under the filter (never Negligible).
  std::string witness_class;
  /// For Refuted: the convergent sum of a_n^{-p} over the witness.
  std::optional<SumVerdict> inverse_sum_certificate;
  std::vector<std::string> caveats;
};
std::string to_string(AdmissVerdict::Kind k);

AdmissVerdict check_admissible(const ScalarSeq& a, const FilterSpec& F, const Rational& p,
                               const Settings& settings = {});

/// a^p s is bounded outside a set of finite s-sum.
Tri summable_bounded(const ScalarSeq& a, const ScalarSeq& s, const Rational& p,
                     const Settings& settings = {});

/// Runs the greedy block selection on [1, horizon]. The result is marked
/// infinite only when summable_bounded is False. Throws DomainError if an
/// eligible weight exceeds 1.
std::shared_ptr<const GreedyBlocks> greedy_blocks(const ScalarSeq& a, const ScalarSeq& s,
                                                  const Rational& p, std::uint64_t horizon);

/// Union of disjoint finite blocks D_m inside {n : a_n^p s_n > 2^m}, each of
/// s-mass in [1, 2]. Throws CriterionHolds when a^p s is bounded outside an
/// s-summable set, HorizonExceeded when no block completes within the horizon.
SetExpr nonadmissibility_witness(const ScalarSeq& a, const ScalarSeq& s, const Rational& p,
                                 const Settings& settings = {});

struct BandReport {
  Rational p;
  AdmissVerdict sufficient;
  std::vector<std::pair<Rational, AdmissVerdict>> necessary;
};

/// Verdicts at p and at the interior points 1 + k(p-1)/(steps+1).
BandReport admissibility_band(const ScalarSeq& a, const FilterSpec& F, const Rational& p,
                              int steps = 3, const Settings& settings = {});

/// Summable filter with weights 1/a_n. Throws NotDivergent unless sum 1/a_n diverges.
FilterSpec associated_summable_filter(const ScalarSeq& a, const Settings& settings = {});

struct SlowVerdict {
  enum class Kind { SlowByRule, NotSlow, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::string rule;
  std::optional<ScalarSeq> witness;
};
std::string to_string(SlowVerdict::Kind k);

SlowVerdict slow_certificate(const FilterSpec& F, const Settings& settings = {});

}  // namespace fbasis
