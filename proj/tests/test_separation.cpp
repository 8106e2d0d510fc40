#include "fbasis/basis_builder.hpp"
#include "fbasis/errors.hpp"
#include "fbasis/separation.hpp"
#include "fbasis/syntax.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fbasis;

namespace {

ScalarSeq Q(const char* text) { return parse_seq(text); }
std::vector<TestVector> V(std::initializer_list<const char*> texts) {
  std::vector<TestVector> out;
  for (const char* t : texts) out.push_back(parse_test_vector(t));
  return out;
}

}  // namespace

TEST(Separation, PlankExamples) {
  PlankSeparator s = plank_separator(Q("pow(1,2)"), DualKind::LinfDiagonal, Rational(1, 10));
  EXPECT_TRUE(s.identity_holds);
  EXPECT_EQ(to_text(s.product), to_text(Q("const(11/10)")));
  EXPECT_LE(s.norm_bound, 1.1 * 2);
  EXPECT_GE(s.norm_bound, 1.1 * M_PI * M_PI / 6);
  for (std::uint64_t n : {1, 2, 10, 999}) EXPECT_EQ(eval_at(s.x, n).to_string(), to_string(Rational(11, 10 * n * n)));

  s = plank_separator(Q("pow(1,1)"), DualKind::L2Diagonal, Rational(1, 10));
  EXPECT_TRUE(s.identity_holds);
  EXPECT_EQ(s.sum.kind, SumVerdict::Kind::Converges);
  EXPECT_THROW(plank_separator(Q("const(2)"), DualKind::LinfDiagonal, Rational(1, 10)), NotSeparable);
}

TEST(Separation, ClusterExamples) {
  ClusterWitness w = cluster_witness(Q("const(2)"), 1, V({"unit(1)"}), 10);
  ASSERT_TRUE(w.found);
  EXPECT_EQ(w.m, 2u);
  w = cluster_witness(Q("pow(1,1/2)"), 2, V({"pow(1,-1)"}), 100);
  ASSERT_TRUE(w.found);
  EXPECT_EQ(w.m, 2u);
  w = cluster_witness(Q("pow(1,2)"), 1, V({"pow(11/10,-2)"}), 1'000'000);
  EXPECT_FALSE(w.found);
  EXPECT_NEAR(w.running_min, 1.1, 1e-12);
  EXPECT_EQ(w.regime.kind, SumVerdict::Kind::Converges);
}

TEST(Separation, Lemma1Examples) {
  Lemma1Profile p = lemma1_profile(Q("const(1)"), V({"unit(1)"}), {1, 10, 100});
  for (const auto& r : p.rows) {
    EXPECT_NEAR(r.A, 1.0 / r.n, 1e-15);
    EXPECT_NEAR(r.B, 1.0 / r.n, 1e-15);
  }
  p = lemma1_profile(Q("pow(1,1/2)"), V({"pow(1,-2)"}), {10, 100, 1000});
  EXPECT_TRUE(p.bound_holds);
  EXPECT_TRUE(p.b_decreasing);
  EXPECT_LT(p.rows[1].B, p.rows[0].B);
  EXPECT_THROW(lemma1_profile(Q("pow(1,2)"), V({"unit(1)"}), {10}), DomainError);
}

TEST(Separation, LiftAndExtract) {
  const auto ops = lift_functionals_to_operators(Q("pow(1,1)"), 1, 5, SpaceKind::l2(8));
  ASSERT_EQ(ops.size(), 5u);
  for (const auto& op : ops) EXPECT_EQ(op.norm.to_string(), std::to_string(op.n));
  EXPECT_THROW(lift_functionals_to_operators(Q("pow(1,1)"), 9, 5, SpaceKind::l2(8)), DimensionMismatch);

  const BasisSystem sys = build_basis(Q("const(2)"), SpaceKind::l1(), filters::frechet(), 6);
  for (const auto& f : extract_functionals(sys.stages, 100, 3)) {
    EXPECT_EQ(f.norm.to_string(), f.op_norm.to_string());
    EXPECT_LE(f.worst_ratio, 2.0 + 1e-12);
    EXPECT_TRUE(f.ok);
  }
  const BasisSystem l2 = build_basis(Q("const(3/2)"), SpaceKind::l2(), filters::frechet(), 5);
  for (const auto& f : extract_functionals(l2.stages, 100, 3)) {
    EXPECT_NEAR(f.norm.value(), f.op_norm.value(), 1e-9);
    EXPECT_TRUE(f.ok);
  }
}

// Separator fires exactly when sum a^{-p} converges; otherwise the cluster
// regime diverges.
TEST(SeparationProperty, Dichotomy) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const DualKind dual = i % 2 ? DualKind::L2Diagonal : DualKind::LinfDiagonal;
    const Rational p = dual == DualKind::LinfDiagonal ? 1 : 2;
    const ScalarSeq a = seqs::powlog(Scalar::exact(1 + rng() % 3), Rational(static_cast<int>(rng() % 9), 4),
                                     Rational(static_cast<int>(rng() % 5) - 2));
    const SumVerdict regime = sum_inverse_p_verdict(a, p, sets::all());
    ASSERT_NE(regime.kind, SumVerdict::Kind::Inconclusive) << to_text(a);
    bool separated = false;
    try {
      separated = plank_separator(a, dual, Rational(1, 10)).identity_holds;
    } catch (const NotSeparable&) {
    }
    EXPECT_EQ(separated, regime.kind == SumVerdict::Kind::Converges) << to_text(a);
  }
}
