#include "fbasis/basis_builder.hpp"
#include "fbasis/errors.hpp"
#include "fbasis/lp_operators.hpp"
#include "fbasis/syntax.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fbasis;

namespace {

Scalar R(int p, int q = 1) { return Scalar::exact(Rational(p, q)); }

double svd_norm(const TailOp& T, std::size_t dim) {
  const auto rows = dense_matrix(T, dim);
  Eigen::MatrixXd M(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) M(i, j) = rows[i][j];
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

std::vector<Scalar> random_b(std::mt19937_64& rng, std::size_t k) {
  std::vector<Scalar> b;
  for (std::size_t i = 0; i < k; ++i) b.push_back(R(1 + rng() % 9, 1 + rng() % 4));
  return b;
}

}  // namespace

TEST(LpOperators, ApplyExamples) {
  const TailOp T1(1, {R(1), R(1)}, SpaceKind::l1());
  EXPECT_EQ(apply_op(T1, std::vector<Scalar>{R(1), R(0)})[0].to_string(), "1");
  const auto y = apply_op(T1, std::vector<Scalar>{R(0), R(1)});
  EXPECT_EQ(y[0].to_string(), "-1");
  EXPECT_EQ(y[1].to_string(), "0");
  const TailOp T2(2, {R(1), R(1, 2), R(3, 4)}, SpaceKind::l1());
  const auto z = apply_op(T2, std::vector<Scalar>{R(0), R(0), R(1)});
  EXPECT_EQ(z[0].to_string(), "-4/3");
  EXPECT_EQ(z[1].to_string(), "-2/3");
  EXPECT_EQ(z[2].to_string(), "0");
}

TEST(LpOperators, NormExamples) {
  NormReport r = op_norm(TailOp(2, {R(1), R(1, 2), R(3, 4)}, SpaceKind::l1()));
  EXPECT_EQ(r.method, NormMethod::ColumnMax);
  EXPECT_EQ(r.value.to_string(), "2");
  r = op_norm(TailOp(2, {R(1), R(1), Scalar::from_square(2)}, SpaceKind::l2()));
  EXPECT_EQ(r.method, NormMethod::ClosedFormL2);
  ASSERT_TRUE(r.value.square());
  EXPECT_EQ(*r.value.square(), Rational(2));
  EXPECT_NEAR(svd_norm(TailOp(2, {R(1), R(1), Scalar::from_square(2)}, SpaceKind::l2()), 3), std::sqrt(2.0), 1e-9);

  const TailOp T(1, {R(1), R(1)}, SpaceKind::lp(Rational(3, 2)));
  r = op_norm(T);
  EXPECT_LE(r.lower, r.value.value() + 1e-12);
  EXPECT_GE(r.upper, r.value.value() - 1e-12);
  EXPECT_NEAR(op_norm_bruteforce(T, 256, 1).value.value(), r.value.value(), 1e-6);
}

TEST(LpOperators, BruteForceExamples) {
  const TailOp T(2, {R(1), R(1), Scalar::from_square(2)}, SpaceKind::l2());
  EXPECT_GE(op_norm_bruteforce(T, 64, 0).value.value(), std::sqrt(2.0) - 1e-9);
  const TailOp P(2, {R(1), R(2), R(3)}, SpaceKind::lp(Rational(3, 2)));
  // basis directions alone give max(1, ||v||_p / b_{n+1})
  const double extreme = std::max(1.0, std::pow(1.0 + std::pow(2.0, 1.5), 1 / 1.5) / 3);
  const NormReport r = op_norm_bruteforce(P, 0, 0);
  EXPECT_GE(r.value.value(), extreme - 1e-12);
  EXPECT_LE(r.value.value(), op_norm(P).value.value() + 1e-9);
}

TEST(LpOperators, SolveExamples) {
  EXPECT_EQ(solve_b_next({R(1), R(1, 2)}, R(2), SpaceKind::l1()).to_string(), "3/4");
  EXPECT_EQ(solve_b_next({R(1)}, R(2), SpaceKind::l1()).to_string(), "1/2");
  const Scalar b3 = solve_b_next({R(1), R(1)}, Scalar::from_square(2), SpaceKind::l2());
  ASSERT_TRUE(b3.square());
  EXPECT_EQ(*b3.square(), Rational(2));
  EXPECT_THROW(solve_b_next({R(1)}, R(1), SpaceKind::l1()), DomainError);
}

TEST(LpOperators, RemainderExamples) {
  NormReport r = remainder_norm(TailOp(2, {R(1), R(1, 2), R(3, 4)}, SpaceKind::l1()));
  EXPECT_EQ(r.value.to_string(), "3");
  const TailOp T(1, {R(1), R(1)}, SpaceKind::l2());
  r = remainder_norm(T);
  // Id - T on three coordinates; the SVD is the ground truth.
  const auto rows = dense_matrix(T, 3);
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) M(i, j) -= rows[i][j];
  }
  EXPECT_NEAR(r.value.value(), Eigen::JacobiSVD<Eigen::Matrix3d>(M).singularValues()(0), 1e-9);
  EXPECT_NEAR(r.value.value(), std::sqrt(2.0), 1e-12);
}

TEST(LpOperators, Validation) {
  EXPECT_THROW(SpaceKind::lp(Rational(1, 2)), DomainError);
  EXPECT_THROW(TailOp(0, {R(1)}, SpaceKind::l1()), DomainError);
  EXPECT_THROW(TailOp(2, {R(1), R(1)}, SpaceKind::l1()), DimensionMismatch);
  EXPECT_THROW(TailOp(1, {R(1), R(-1)}, SpaceKind::l1()), DomainError);
}

TEST(LpOperatorsProperty, L2ClosedFormMatchesSvd) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + rng() % 6;
    const TailOp T(n, random_b(rng, n + 1), SpaceKind::l2());
    EXPECT_NEAR(op_norm(T).value.value(), svd_norm(T, n + 1), 1e-9);
  }
}

TEST(LpOperatorsProperty, L1ColumnMaxIsExactMaximum) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + rng() % 6;
    const TailOp T(n, random_b(rng, n + 1), SpaceKind::l1());
    const NormReport r = op_norm(T);
    Scalar best = R(0);
    for (std::size_t j = 0; j < n + 1; ++j) {
      std::vector<Scalar> e(n + 1, R(0));
      e[j] = R(1);
      const Scalar c = lp_norm_exact(apply_op(T, e), 1);
      if (compare(c, best) > 0) best = c;
    }
    EXPECT_EQ(compare(best, r.value), 0);
    EXPECT_EQ(op_norm_bruteforce(T, 8, i).value.to_string(), r.value.to_string());
  }
}

// Numeric norms sit between the brute-force lower bound and Riesz-Thorin,
// and the norm decreases as b_{n+1} grows.
TEST(LpOperatorsProperty, NumericNormBracketsAndMonotone) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 12; ++i) {
    const Rational p = i % 2 ? Rational(3, 2) : Rational(3);
    const std::size_t n = 1 + rng() % 3;
    auto b = random_b(rng, n + 1);
    const TailOp T(n, b, SpaceKind::lp(p));
    const NormReport r = op_norm(T);
    const double brute = op_norm_bruteforce(T, 64, i).value.value();
    EXPECT_LE(brute, r.value.value() + 1e-9);
    EXPECT_NEAR(brute, r.value.value(), 1e-6);
    EXPECT_LE(r.value.value(), riesz_thorin_bound(T) + 1e-12);
    b[n] = b[n] * R(2);
    EXPECT_LT(op_norm(TailOp(n, b, SpaceKind::lp(p))).value.value(), r.value.value());
  }
}

TEST(BasisBuilder, L1Example) {
  const BasisSystem sys = build_basis(parse_seq("const(2)"), SpaceKind::l1(), parse_filter("summable(const(1/2))"), 4);
  std::vector<std::string> b;
  for (const auto& s : sys.coefficients) b.push_back(s.to_string());
  EXPECT_EQ(b, (std::vector<std::string>{"1", "1/2", "3/4", "9/8"}));
  EXPECT_TRUE(sys.failures.empty());
  const DefectReport d = defect_report(sys);
  EXPECT_TRUE(d.equals_target);
  for (const auto& c : d.c) EXPECT_EQ(c.to_string(), "2");
}

TEST(BasisBuilder, L2Example) {
  const BasisSystem sys = build_basis(parse_seq("const(sqrt(2))"), SpaceKind::l2(), filters::frechet(), 4);
  std::vector<Rational> squares;
  for (const auto& s : sys.coefficients) squares.push_back(*s.square());
  EXPECT_EQ(squares, (std::vector<Rational>{1, 1, 2, 4}));
  for (const auto& c : defect_report(sys).c) EXPECT_EQ(c.to_string(), "1");
}

TEST(BasisBuilder, Gate) {
  EXPECT_THROW(build_basis(parse_seq("pow(1,1)"), SpaceKind::l2(), filters::statistical(), 4), NotAdmissible);
  EXPECT_THROW(build_basis(parse_seq("const(1)"), SpaceKind::l1(), filters::frechet(), 4), DomainError);
}

TEST(BasisBuilder, Biorthogonality) {
  const BasisSystem sys = build_basis(parse_seq("const(2)"), SpaceKind::l1(), filters::frechet(), 6);
  const BiorthogonalityReport r = verify_biorthogonality(sys);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.gram[2][1].to_string(), "0");
  for (std::size_t m = 0; m < r.gram.size(); ++m) EXPECT_EQ(r.gram[m][m].to_string(), "1");
}

TEST(BasisBuilder, ConvergenceExamples) {
  const BasisSystem l1n = build_basis(parse_seq("prefix[2]:pow(1,1)"), SpaceKind::l1(),
                                      parse_filter("summable(pow(1,-1))"), 12);
  ConvergenceReport r = convergence_demo(l1n, parse_test_vector("unit(1)"));
  for (const auto& v : r.verdicts) EXPECT_EQ(v.verdict, LimitVerdict::Kind::ConvergesTo);
  r = convergence_demo(l1n, parse_test_vector("pow(1,-2)"));
  for (const auto& v : r.verdicts) EXPECT_EQ(v.verdict, LimitVerdict::Kind::ConvergesTo) << v.filter;
  r = convergence_demo(l1n, parse_test_vector("spike(geom(2); powlog(1,0,-2))"));
  ASSERT_EQ(r.verdicts.size(), 2u);
  EXPECT_EQ(r.verdicts[0].verdict, LimitVerdict::Kind::ConvergesTo);
  EXPECT_EQ(r.verdicts[1].verdict, LimitVerdict::Kind::DoesNotConverge);
  EXPECT_THROW(convergence_demo(l1n, parse_test_vector("pow(1,-1)")), DomainError);
}

TEST(BasisBuilder, TestVectorGrammar) {
  EXPECT_EQ(parse_test_vector("unit(3)").at(3).to_string(), "1");
  EXPECT_EQ(parse_test_vector("coords[1/2, 3]").at(2).to_string(), "3");
  const TestVector s = parse_test_vector("spike(geom(2); const(5))");
  EXPECT_EQ(s.at(5).to_string(), "5");
  EXPECT_EQ(s.at(4).to_string(), "0");
  EXPECT_THROW(parse_test_vector("unit(0)"), Error);
}
