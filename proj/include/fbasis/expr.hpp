#pragma once

#include <cstdint>
#include <memory>

namespace fbasis {

struct SetNode;
struct SeqNode;

/// Immutable handle to a finitely described subset of the positive integers.
/// Copies share the underlying tree.
class SetExpr {
 public:
  explicit SetExpr(std::shared_ptr<const SetNode> node) : node_(std::move(node)) {}
  const SetNode& node() const noexcept { return *node_; }

 private:
  std::shared_ptr<const SetNode> node_;
};

/// Immutable handle to a symbolic real sequence indexed by n >= 1.
class ScalarSeq {
 public:
  explicit ScalarSeq(std::shared_ptr<const SeqNode> node) : node_(std::move(node)) {}
  const SeqNode& node() const noexcept { return *node_; }

 private:
  std::shared_ptr<const SeqNode> node_;
};

enum class Tri { False, True, Unknown };

inline Tri tri_not(Tri t) {
  return t == Tri::True ? Tri::False : (t == Tri::False ? Tri::True : Tri::Unknown);
}

/// Knobs shared by every decision procedure.
struct Settings {
  /// Largest index examined by numeric fallbacks (partial sums, scans).
  std::uint64_t horizon = 1'000'000;
  /// Indices up to this cutoff are summed term by term before a tail bound
  /// takes over in certified convergent sums.
  std::uint64_t enumeration_cutoff = 4096;
  /// Relative tolerance for norms that are only computed numerically.
  double numeric_tolerance = 1e-6;
};

}  // namespace fbasis
