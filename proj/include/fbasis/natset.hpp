#pragma once

#include "fbasis/expr.hpp"
#include "fbasis/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fbasis {

struct FiniteAtom {
  std::vector<std::uint64_t> elements;  // strictly increasing
};
struct CoFiniteAtom {
  std::vector<std::uint64_t> excluded;  // strictly increasing
};
struct ResidueAtom {
  std::uint64_t modulus;
  std::uint64_t residue;
};
struct RangeAtom {
  std::uint64_t lo;
  std::optional<std::uint64_t> hi;
};
/// {b^m : m >= 1}.
struct GeometricAtom {
  std::uint64_t base;
};
/// Membership known exactly for n <= horizon and unknown past it.
struct SampledAtom {
  std::uint64_t horizon;
  std::vector<std::uint64_t> members;
};

/// Disjoint finite blocks D_1, D_2, ... selected greedily: block m takes the
/// smallest unused indices n with a_n^p * s_n > 2^m until the s-mass of the
/// block reaches 1. The rule is the set's definition; blocks are materialized
/// up to `horizon`, and membership past the last scanned index is unknown.
struct GreedyBlocks {
  struct Block {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;  // inclusive
    double weight_sum = 0.0;   // sum of s over the block, in [1, 2]
    double inverse_sum = 0.0;  // sum of a^{-p} over the block, < 2^{1-m}
  };

  ScalarSeq sequence;  // a
  ScalarSeq weights;   // s
  Rational exponent;   // p
  std::uint64_t horizon = 0;
  std::uint64_t scanned_to = 0;  // last index whose membership is decided
  bool certified_infinite = false;  // every block provably completes
  std::vector<Block> blocks;
  /// All runs sorted by start; filled by index_runs().
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted_runs;

  void index_runs();
  Tri contains(std::uint64_t n) const;
  double total_inverse_sum() const;
};

struct BlocksAtom {
  std::shared_ptr<const GreedyBlocks> data;
};
struct UnionNode {
  std::vector<SetExpr> terms;
};
struct IntersectionNode {
  std::vector<SetExpr> terms;
};
struct ComplementNode {
  SetExpr inner;
};

struct SetNode {
  std::variant<FiniteAtom, CoFiniteAtom, ResidueAtom, RangeAtom, GeometricAtom, SampledAtom,
               BlocksAtom, UnionNode, IntersectionNode, ComplementNode>
      v;
};

namespace sets {
// Constructors validate their invariants and throw DomainError.
SetExpr finite(std::vector<std::uint64_t> elements);
SetExpr cofinite(std::vector<std::uint64_t> excluded);
SetExpr residue(std::uint64_t modulus, std::uint64_t residue);
SetExpr range(std::uint64_t lo, std::optional<std::uint64_t> hi);
SetExpr geometric(std::uint64_t base);
SetExpr sampled(std::uint64_t horizon, std::vector<std::uint64_t> members);
SetExpr blocks(std::shared_ptr<const GreedyBlocks> data);
SetExpr all();
SetExpr none();
SetExpr unite(std::vector<SetExpr> terms);
SetExpr intersect(std::vector<SetExpr> terms);
SetExpr complement(SetExpr inner);
}  // namespace sets

inline SetExpr operator|(SetExpr a, SetExpr b) { return sets::unite({std::move(a), std::move(b)}); }
inline SetExpr operator&(SetExpr a, SetExpr b) { return sets::intersect({std::move(a), std::move(b)}); }
inline SetExpr operator!(SetExpr a) { return sets::complement(std::move(a)); }

/// Density of a set. Exact covers Zero (value 0); Bounds holds when only the
/// definitely-in and possibly-in parts have known densities.
struct DensityVerdict {
  enum class Kind { Exact, Zero, Bounds, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Rational lower = 0;
  Rational upper = 1;
  std::uint64_t horizon = 0;
  /// |S cap [1, horizon]| / horizon for Inconclusive verdicts.
  double observed = 0.0;
};

/// Verdict on sum_{n in S} w_n.
struct SumVerdict {
  enum class Kind { Diverges, Converges, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Certified upper bound (Converges).
  double bound = 0.0;
  /// Partial sum over S cap [1, horizon] (Inconclusive, and Diverges spot checks).
  double partial = 0.0;
  std::uint64_t horizon = 0;
  std::string rule;
};

std::string to_string(DensityVerdict::Kind k);
std::string to_string(SumVerdict::Kind k);

/// Flattened, deduplicated form with merged finite parts and residue
/// classes, children in deterministic order. Membership-preserving.
SetExpr canonicalize(const SetExpr& s);

Tri member(std::uint64_t n, const SetExpr& s);

/// Sorted elements of s in [1, N]. Throws HorizonExceeded when a sampled or
/// block atom is queried past its horizon.
std::vector<std::uint64_t> enumerate_prefix(const SetExpr& s, std::uint64_t N);

DensityVerdict natural_density(const SetExpr& s);

/// Decides finiteness of sum_{n in s} w_n for w in the power/log family
/// (and its prefix/piecewise extensions).
SumVerdict weight_sum(const SetExpr& s, const ScalarSeq& w, const Settings& settings = {});

Tri is_empty(const SetExpr& s);
Tri is_infinite(const SetExpr& s);

/// Smallest integer c with b = c^i, and that i.
std::pair<std::uint64_t, std::uint64_t> perfect_power_root(std::uint64_t b);

}  // namespace fbasis
