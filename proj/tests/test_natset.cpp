#include "fbasis/errors.hpp"
#include "fbasis/natset.hpp"
#include "fbasis/sequences.hpp"
#include "fbasis/syntax.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fbasis;

namespace {

SetExpr S(const char* text) { return parse_set_expr(text); }

// Random expression over atoms with known membership everywhere.
SetExpr random_set(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 4);
  switch (pick(rng)) {
    case 0: {
      std::vector<std::uint64_t> el;
      for (std::uint64_t n = 1; n <= 30; ++n) {
        if (rng() % 4 == 0) el.push_back(n);
      }
      return sets::finite(el);
    }
    case 1: {
      const std::uint64_t q = 2 + rng() % 6;
      return sets::residue(q, rng() % q);
    }
    case 2: return sets::geometric(2 + rng() % 3);
    case 3: {
      const std::uint64_t lo = 1 + rng() % 40;
      if (rng() % 2) return sets::range(lo, std::nullopt);
      return sets::range(lo, lo + rng() % 100);
    }
    case 4: return sets::cofinite({1 + rng() % 5, 10 + rng() % 5});
    case 5:
    case 6: return random_set(rng, depth - 1) | random_set(rng, depth - 1);
    case 7: return random_set(rng, depth - 1) & random_set(rng, depth - 1);
    default: return !random_set(rng, depth - 1);
  }
}

}  // namespace

TEST(NatSet, MembershipOfAtoms) {
  EXPECT_EQ(member(7, S("residue(3,1)")), Tri::True);
  EXPECT_EQ(member(8, S("geom(2)")), Tri::True);
  EXPECT_EQ(member(12, S("geom(2)")), Tri::False);
  EXPECT_EQ(member(1, S("geom(2)")), Tri::False);
  EXPECT_EQ(member(1'000'000'000, sets::sampled(1'000'000, {2, 3})), Tri::Unknown);
  EXPECT_EQ(member(3, sets::sampled(1'000'000, {2, 3})), Tri::True);
}

TEST(NatSet, EnumeratePrefix) {
  EXPECT_EQ(enumerate_prefix(S("residue(2,0)"), 7), (std::vector<std::uint64_t>{2, 4, 6}));
  EXPECT_EQ(enumerate_prefix(S("!finite{1}"), 3), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(enumerate_prefix(S("geom(2)"), 20), (std::vector<std::uint64_t>{2, 4, 8, 16}));
  EXPECT_THROW(enumerate_prefix(sets::sampled(10, {2}), 11), HorizonExceeded);
}

TEST(NatSet, ConstructorsValidate) {
  EXPECT_THROW(sets::residue(2, 2), DomainError);
  EXPECT_THROW(sets::residue(0, 0), DomainError);
  EXPECT_THROW(sets::finite({3, 1}), DomainError);
  EXPECT_THROW(sets::finite({0}), DomainError);
  EXPECT_THROW(sets::geometric(1), DomainError);
  EXPECT_THROW(sets::range(5, 4), DomainError);
}

TEST(NatSet, DensityExamples) {
  auto d = natural_density(S("residue(4,1)"));
  EXPECT_EQ(d.kind, DensityVerdict::Kind::Exact);
  EXPECT_EQ(d.lower, Rational(1, 4));
  EXPECT_EQ(natural_density(S("geom(2)")).kind, DensityVerdict::Kind::Zero);
  d = natural_density(S("residue(2,0) | residue(4,1)"));
  EXPECT_EQ(d.kind, DensityVerdict::Kind::Exact);
  EXPECT_EQ(d.lower, Rational(3, 4));
  d = natural_density(S("!geom(3)"));
  EXPECT_EQ(d.lower, Rational(1));
}

// Exact densities agree with counting on [1, N] to O(1/N) (geometric and
// finite parts contribute O(log N)).
TEST(NatSetProperty, DensityMatchesCounting) {
  std::mt19937_64 rng(11);
  const std::uint64_t N = 200'000;
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const SetExpr s = random_set(rng, 2);
    const DensityVerdict d = natural_density(s);
    if (d.kind != DensityVerdict::Kind::Exact && d.kind != DensityVerdict::Kind::Zero) continue;
    const double counted = static_cast<double>(enumerate_prefix(s, N).size()) / N;
    EXPECT_NEAR(counted, to_double(d.lower), 2e-3) << to_text(s);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(NatSetProperty, CanonicalizePreservesMembership) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const SetExpr s = random_set(rng, 3);
    const SetExpr c = canonicalize(s);
    for (std::uint64_t n = 1; n <= 400; ++n) {
      ASSERT_EQ(member(n, s), member(n, c)) << to_text(s) << " vs " << to_text(c) << " at " << n;
    }
    EXPECT_EQ(to_text(canonicalize(c)), to_text(c));
  }
}

TEST(NatSetProperty, ComplementAndIntersectionLaws) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const SetExpr a = random_set(rng, 2);
    const SetExpr b = random_set(rng, 2);
    const SetExpr de_morgan = !(a | b);
    const SetExpr split = !a & !b;
    for (std::uint64_t n = 1; n <= 200; ++n) {
      ASSERT_EQ(member(n, de_morgan), member(n, split));
      ASSERT_EQ(member(n, a & !a), Tri::False);
    }
  }
}

TEST(NatSet, CanonicalFormsMerge) {
  EXPECT_EQ(to_text(canonicalize(S("range(1,)"))), to_text(sets::all()));
  EXPECT_EQ(to_text(canonicalize(S("residue(2,0) & residue(2,1)"))), to_text(sets::none()));
  EXPECT_EQ(to_text(canonicalize(S("geom(2) & cofinite{}"))), "geom(2)");
  EXPECT_EQ(to_text(canonicalize(S("finite{1,2,3} | range(4,)"))), to_text(sets::all()));
}

TEST(NatSet, WeightSumExamples) {
  const ScalarSeq harmonic = seqs::power(Scalar::exact(1), -1);
  EXPECT_EQ(weight_sum(S("residue(2,0)"), harmonic).kind, SumVerdict::Kind::Diverges);
  auto v = weight_sum(S("geom(2)"), harmonic);
  ASSERT_EQ(v.kind, SumVerdict::Kind::Converges);
  EXPECT_GE(v.bound, 1.0 - 1e-12);
  EXPECT_LE(v.bound, 1.0 + 1e-6);
  v = weight_sum(sets::all(), seqs::power(Scalar::exact(1), -2));
  ASSERT_EQ(v.kind, SumVerdict::Kind::Converges);
  EXPECT_GE(v.bound, M_PI * M_PI / 6);
  EXPECT_LE(v.bound, 2.0);
}

// Certified bounds dominate long partial sums.
TEST(NatSetProperty, ConvergentBoundsDominatePartialSums) {
  std::mt19937_64 rng(21);
  const std::vector<Rational> betas{Rational(-2), Rational(-3, 2), Rational(-5, 4), Rational(-1)};
  for (int i = 0; i < 40; ++i) {
    const SetExpr s = random_set(rng, 1);
    const Rational beta = betas[rng() % betas.size()];
    const ScalarSeq w = seqs::powlog(Scalar::exact(1), beta, Rational(static_cast<int>(rng() % 3)) - 1);
    const SumVerdict v = weight_sum(s, w);
    if (v.kind != SumVerdict::Kind::Converges) continue;
    double partial = 0.0;
    for (std::uint64_t n : enumerate_prefix(s, 100'000)) partial += eval_double(w, n);
    EXPECT_LE(partial, v.bound * (1 + 1e-12)) << to_text(s) << " " << to_text(w);
  }
}
