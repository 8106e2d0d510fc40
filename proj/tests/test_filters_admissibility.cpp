#include "fbasis/admissibility.hpp"
#include "fbasis/errors.hpp"
#include "fbasis/filters.hpp"
#include "fbasis/syntax.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fbasis;

namespace {

SetExpr S(const char* text) { return parse_set_expr(text); }
ScalarSeq Q(const char* text) { return parse_seq(text); }
FilterSpec F(const char* text) { return parse_filter(text); }

}  // namespace

TEST(Filters, ClassifyExamples) {
  EXPECT_EQ(classify_set(S("residue(2,0)"), filters::statistical()), SetClass::Stationary);
  EXPECT_EQ(classify_set(S("!geom(2)"), F("summable(pow(1,-1))")), SetClass::Member);
  EXPECT_EQ(classify_set(S("finite{1,2,3}"), filters::frechet()), SetClass::Negligible);
  EXPECT_EQ(classify_set(S("geom(2)"), F("summable(pow(1,-1))")), SetClass::Negligible);
  EXPECT_EQ(classify_set(S("geom(2)"), filters::frechet()), SetClass::Stationary);
}

TEST(Filters, LimitExamples) {
  auto v = f_limit_scalar(Q("pow(1,-1)"), filters::frechet(), Scalar::exact(0));
  EXPECT_EQ(v.kind, LimitVerdict::Kind::ConvergesTo);

  const ScalarSeq ind_geom = seqs::piecewise({{S("geom(2)"), Q("const(1)")}, {S("!geom(2)"), Q("const(0)")}});
  v = f_limit_scalar(ind_geom, F("summable(pow(1,-1))"), Scalar::exact(0));
  EXPECT_EQ(v.kind, LimitVerdict::Kind::ConvergesTo);

  const ScalarSeq ind_even =
      seqs::piecewise({{S("residue(2,0)"), Q("const(1)")}, {S("residue(2,1)"), Q("const(0)")}});
  v = f_limit_scalar(ind_even, filters::statistical(), Scalar::exact(0));
  ASSERT_EQ(v.kind, LimitVerdict::Kind::DoesNotConverge);
  EXPECT_EQ(v.eps, Rational(1, 2));
  EXPECT_EQ(to_text(v.steps.back().exceptional), "residue(2,0)");
}

TEST(Filters, Dominates) {
  EXPECT_EQ(dominates(F("summable(pow(1,-1))"), filters::frechet()).kind, DomVerdict::Kind::Proved);
  EXPECT_EQ(dominates(F("summable(pow(1,-1))"), F("summable(pow(1,-1/2))")).kind, DomVerdict::Kind::Proved);
  const DomVerdict v = dominates(filters::frechet(), filters::statistical());
  ASSERT_EQ(v.kind, DomVerdict::Kind::Refuted);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(classify_set(*v.witness, filters::statistical()), SetClass::Member);
  EXPECT_NE(classify_set(*v.witness, filters::frechet()), SetClass::Member);
}

TEST(Filters, Trace) {
  const FilterSpec T = trace_filter(filters::statistical(), S("residue(2,0)"));
  EXPECT_EQ(classify_set(S("residue(2,0)"), T), SetClass::Member);
  EXPECT_THROW(trace_filter(filters::frechet(), S("finite{1,2}")), NotStationary);
  EXPECT_THROW(trace_filter(F("summable(pow(1,-1))"), S("geom(2)")), NotStationary);
}

// A limit under F persists under the trace on any stationary library set.
TEST(FiltersProperty, TraceKeepsLimits) {
  const std::vector<FilterSpec> fs{filters::frechet(), filters::statistical(), F("summable(pow(1,-1))")};
  const std::vector<ScalarSeq> xs{Q("pow(1,-1)"), Q("powlog(2,-1/2,1)"), Q("powlog(1,0,-1)")};
  for (const auto& f : fs) {
    for (const auto& x : xs) {
      if (f_limit_scalar(x, f, Scalar::exact(0)).kind != LimitVerdict::Kind::ConvergesTo) continue;
      for (const auto& I : witness_library()) {
        if (classify_set(I, f) != SetClass::Stationary) continue;
        EXPECT_EQ(f_limit_scalar(x, trace_filter(f, I), Scalar::exact(0)).kind, LimitVerdict::Kind::ConvergesTo)
            << to_text(f) << " " << to_text(x) << " " << to_text(I);
      }
    }
  }
}

// Members are never negligible, and complements of members are negligible.
TEST(FiltersProperty, ClassesAreConsistent) {
  const std::vector<FilterSpec> fs{filters::frechet(), filters::statistical(), F("summable(pow(1,-1))"),
                                   F("summable(pow(1,-1/2))")};
  for (const auto& f : fs) {
    for (const auto& A : witness_library()) {
      const SetClass c = classify_set(A, f);
      const SetClass cc = classify_set(!A, f);
      if (c == SetClass::Member) EXPECT_EQ(cc, SetClass::Negligible) << to_text(A);
      if (c == SetClass::Negligible) EXPECT_EQ(cc, SetClass::Member) << to_text(A);
      if (c == SetClass::Stationary) EXPECT_NE(cc, SetClass::Negligible) << to_text(A);
    }
  }
}

TEST(Admissibility, Examples) {
  EXPECT_EQ(check_admissible(Q("pow(1,1/2)"), filters::statistical(), 2).kind, AdmissVerdict::Kind::Proved);
  for (const auto& f : {filters::frechet(), filters::statistical(), F("summable(pow(1,-1))")}) {
    const AdmissVerdict v = check_admissible(Q("pow(1,1)"), f, 2);
    ASSERT_EQ(v.kind, AdmissVerdict::Kind::Refuted);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(classify_set(*v.witness, f), SetClass::Member);
    ASSERT_TRUE(v.inverse_sum_certificate);
    EXPECT_EQ(v.inverse_sum_certificate->kind, SumVerdict::Kind::Converges);
  }
  EXPECT_EQ(check_admissible(Q("pow(1,1/2)"), F("summable(pow(1,-1/2))"), 1).kind, AdmissVerdict::Kind::Proved);
  EXPECT_EQ(check_admissible(Q("const(7)"), filters::frechet(), 1).kind, AdmissVerdict::Kind::Proved);
}

TEST(Admissibility, GreedyWitness) {
  const SetExpr W = nonadmissibility_witness(Q("pow(1,2)"), Q("pow(1,-1)"), 1);
  const auto* b = std::get_if<BlocksAtom>(&W.node().v);
  ASSERT_NE(b, nullptr);
  const GreedyBlocks& g = *b->data;
  ASSERT_FALSE(g.blocks.empty());
  EXPECT_EQ(g.blocks[0].runs.front().first, 3u);
  EXPECT_EQ(g.blocks[0].runs, (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 7}}));
  for (const auto& blk : g.blocks) {
    EXPECT_GE(blk.weight_sum, 1.0);
    EXPECT_LE(blk.weight_sum, 2.0);
  }
  EXPECT_LE(g.total_inverse_sum(), 2.0);
  EXPECT_THROW(nonadmissibility_witness(Q("const(2)"), Q("pow(1,-1)"), 1), CriterionHolds);
  EXPECT_THROW(nonadmissibility_witness(Q("pow(1,1)"), Q("pow(1,-1)"), 1), CriterionHolds);
}

TEST(Admissibility, Band) {
  BandReport r = admissibility_band(Q("pow(1,2/3)"), filters::frechet(), Rational(3, 2));
  EXPECT_EQ(r.sufficient.kind, AdmissVerdict::Kind::Refuted);
  for (const auto& [p, v] : r.necessary) EXPECT_EQ(v.kind, AdmissVerdict::Kind::Refuted);
  r = admissibility_band(Q("const(5)"), filters::statistical(), Rational(3, 2));
  EXPECT_EQ(r.sufficient.kind, AdmissVerdict::Kind::Proved);
  for (const auto& [p, v] : r.necessary) EXPECT_EQ(v.kind, AdmissVerdict::Kind::Proved);
}

TEST(Admissibility, AssociatedFilterAndSlow) {
  EXPECT_EQ(to_text(associated_summable_filter(Q("pow(1,1/2)"))), to_text(F("summable(pow(1,-1/2))")));
  EXPECT_THROW(associated_summable_filter(Q("pow(1,2)")), NotDivergent);
  EXPECT_EQ(slow_certificate(F("summable(pow(1,-1/4))")).kind, SlowVerdict::Kind::SlowByRule);
  EXPECT_EQ(slow_certificate(F("summable(pow(1,-1))")).kind, SlowVerdict::Kind::NotSlow);
  EXPECT_EQ(slow_certificate(filters::statistical()).kind, SlowVerdict::Kind::NotSlow);
}

// Refutations come with a non-negligible witness carrying a convergent inverse sum.
TEST(AdmissibilityProperty, RefutationsAreSound) {
  std::mt19937_64 rng(17);
  const std::vector<FilterSpec> fs{filters::frechet(), filters::statistical(), F("summable(pow(1,-1))"),
                                   F("summable(pow(1,-1/2))")};
  int refuted = 0;
  for (int i = 0; i < 60; ++i) {
    const ScalarSeq a = seqs::powlog(Scalar::exact(Rational(1 + rng() % 4)), Rational(static_cast<int>(rng() % 9) - 2, 4),
                                     Rational(static_cast<int>(rng() % 3) - 1));
    const Rational p = rng() % 2 ? Rational(1) : Rational(2);
    const FilterSpec& f = fs[rng() % fs.size()];
    const AdmissVerdict v = check_admissible(a, f, p);
    if (v.kind != AdmissVerdict::Kind::Refuted) continue;
    ++refuted;
    ASSERT_TRUE(v.witness) << to_text(a);
    EXPECT_NE(classify_set(*v.witness, f), SetClass::Negligible) << to_text(a) << " " << to_text(f);
    if (!std::holds_alternative<BlocksAtom>(v.witness->node().v)) {
      EXPECT_EQ(sum_inverse_p_verdict(a, p, *v.witness).kind, SumVerdict::Kind::Converges) << to_text(a);
    }
  }
  EXPECT_GT(refuted, 10);
}
