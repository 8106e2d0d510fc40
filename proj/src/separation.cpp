#include "fbasis/separation.hpp"

#include "fbasis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fbasis {

namespace {

// ||x||_1 for a test vector, exact or as a certified upper bound.
double l1_norm_bound(const TestVector& x, const Settings& settings) {
  if (x.kind == TestVector::Kind::Finite) {
    double s = 0;
    for (const auto& v : x.coords) s += std::fabs(v.value());
    return s;
  }
  if (is_positive(*x.seq) != Tri::True) throw DomainError("test vector sequences must be positive");
  const SetExpr support = x.kind == TestVector::Kind::Spike ? *x.spikes : sets::all();
  const SumVerdict v = weight_sum(support, *x.seq, settings);
  if (v.kind == SumVerdict::Kind::Diverges) throw DomainError("test vector is not in l1");
  if (v.kind == SumVerdict::Kind::Inconclusive) throw Undecided("l1 norm of the test vector is undecided");
  return v.bound;
}

// Transpose of T applied to a functional on the range: (f_1..f_n, -sum f_r u_r).
std::vector<Scalar> transpose_apply(const std::vector<Scalar>& u, const std::vector<Scalar>& y) {
  std::vector<Scalar> f(y.begin(), y.begin() + u.size());
  Scalar last = Scalar::exact(0);
  for (std::size_t r = 0; r < u.size(); ++r) last = last - y[r] * u[r];
  f.push_back(last);
  return f;
}

}  // namespace

std::string to_string(DualKind k) { return k == DualKind::LinfDiagonal ? "linf" : "l2"; }

DualKind parse_dual_kind(std::string_view text) {
  if (text == "linf" || text == "l1") return DualKind::LinfDiagonal;
  if (text == "l2") return DualKind::L2Diagonal;
  throw ParseError("unknown dual kind '" + std::string(text) + "'", 0, {"linf", "l2"});
}

PlankSeparator plank_separator(const ScalarSeq& a, DualKind dual, const Rational& eps, const Settings& settings) {
  if (eps <= 0) throw DomainError("margin must be positive");
  const Rational p = dual == DualKind::LinfDiagonal ? 1 : 2;
  const SumVerdict sum = sum_inverse_p_verdict(a, p, sets::all(), settings);
  if (sum.kind == SumVerdict::Kind::Diverges) {
    throw NotSeparable("sum of a_n^-" + to_string(p) + " diverges; no plank separator exists");
  }
  if (sum.kind == SumVerdict::Kind::Inconclusive) {
    throw Undecided("sum of a_n^-" + to_string(p) + " is undecided within the horizon");
  }
  const Scalar k = Scalar::exact(1 + eps);
  const ScalarSeq x = seq_scale(seq_pow(a, Rational(-1)), k);
  const ScalarSeq product = seq_mul(a, x);

  // Every piece of a_n x_n must reduce to the constant 1 + eps.
  bool holds = true;
  const FlatSeq flat = flatten(product);
  for (const auto& [n, v] : flat.values) holds = holds && compare(v, k) == 0;
  for (const auto& t : flat.terms) holds = holds && t.beta == 0 && t.gamma == 0 && compare(t.c, k) == 0;

  const double kd = to_double(1 + eps);
  return PlankSeparator{.dual = dual, .eps = eps, .x = x, .sum = sum,
                        .norm_bound = (p == 1 ? kd : kd * kd) * sum.bound, .product = product,
                        .identity_holds = holds};
}

ClusterWitness cluster_witness(const ScalarSeq& a, const Rational& dual_p, const std::vector<TestVector>& xs,
                               std::uint64_t horizon, const Settings& settings) {
  if (dual_p < 1) throw DomainError("exponent must be at least 1");
  if (xs.empty()) throw DomainError("need at least one test vector");
  ClusterWitness w;
  w.horizon = horizon;
  w.regime = sum_inverse_p_verdict(a, dual_p, sets::all(), settings);
  w.running_min = std::numeric_limits<double>::infinity();
  std::vector<double> maxima(xs.size());
  for (std::uint64_t m = 1; m <= horizon; ++m) {
    const double am = eval_double(a, m);
    double worst = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      maxima[k] = std::fabs(am * xs[k].at_double(m));
      worst = std::max(worst, maxima[k]);
    }
    if (worst < w.running_min) {
      w.running_min = worst;
      w.running_min_at = m;
      w.maxima = maxima;
    }
    if (worst < 1) {
      w.found = true;
      w.m = m;
      return w;
    }
  }
  return w;
}

Lemma1Profile lemma1_profile(const ScalarSeq& a, const std::vector<TestVector>& xs, std::vector<std::uint64_t> grid,
                             const Settings& settings) {
  const SumVerdict v = sum_inverse_p_verdict(a, 1, sets::all(), settings);
  if (v.kind == SumVerdict::Kind::Converges) throw DomainError("sum of a_n^-1 converges; the averaging profile needs divergence");
  if (v.kind == SumVerdict::Kind::Inconclusive) throw Undecided("divergence of sum a_n^-1 is undecided");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty() || grid.front() == 0) throw DomainError("grid points must be positive");

  double norms = 0;
  for (const auto& x : xs) norms += l1_norm_bound(x, settings);

  Lemma1Profile out;
  double H = 0;
  double S = 0;
  std::uint64_t m = 0;
  for (std::uint64_t n : grid) {
    for (; m < n; ) {
      ++m;
      H += 1 / eval_double(a, m);
      for (const auto& x : xs) S += std::fabs(x.at_double(m));
    }
    const ProfileRow row{n, S / H, norms / H};
    if (row.A > row.B * (1 + 1e-12)) out.bound_holds = false;
    if (!out.rows.empty() && !(row.B < out.rows.back().B)) out.b_decreasing = false;
    out.rows.push_back(row);
  }
  return out;
}

Scalar dual_norm(const std::vector<Scalar>& f, const Rational& p) {
  if (p == 1) {
    Scalar best = Scalar::exact(0);
    for (const auto& v : f) {
      if (compare(v.abs(), best) > 0) best = v.abs();
    }
    return best;
  }
  std::size_t nonzero = 0;
  Scalar only = Scalar::exact(0);
  for (const auto& v : f) {
    if (v.sign() != 0) {
      ++nonzero;
      only = v.abs();
    }
  }
  if (nonzero <= 1) return only;
  if (p == 2) return lp_norm_exact(f, p);
  std::vector<double> d;
  for (const auto& v : f) d.push_back(v.value());
  const double pd = to_double(p);
  return Scalar::approx(lp_norm(d, pd / (pd - 1)));
}

std::vector<LiftedOperator> lift_functionals_to_operators(const ScalarSeq& a, std::size_t anchor, std::size_t n_max,
                                                          const SpaceKind& space) {
  const std::size_t dim = space.dimension == 0 ? std::max(n_max, anchor) : space.dimension;
  if (anchor == 0 || anchor > dim) throw DimensionMismatch("anchor index outside the truncation");
  if (n_max > dim) throw DimensionMismatch("n_max exceeds the truncation dimension");
  std::vector<LiftedOperator> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<Scalar> f(dim, Scalar::exact(0));
    f[n - 1] = eval_at(a, n);
    if (f[n - 1].sign() <= 0) throw DomainError("a must be positive");
    // ||f (x) e_anchor|| = ||f||_dual * ||e_anchor||_p and ||e_anchor||_p = 1
    const Scalar norm = dual_norm(f, space.p);
    out.push_back({n, std::move(f), anchor, norm});
  }
  return out;
}

std::vector<ExtractedFunctional> extract_functionals(const std::vector<TailOp>& stages, std::size_t samples,
                                                     std::uint64_t seed) {
  std::vector<ExtractedFunctional> out;
  for (const TailOp& T : stages) {
    const std::size_t m = T.n() + 1;
    const Rational& p = T.space().p;
    const double pd = T.space().p_value();
    const NormReport nr = op_norm(T);
    const std::vector<Scalar> u = T.u();

    std::vector<Scalar> ystar;
    if (T.space().is_l1()) {
      // norming column e_j and the sign functional of its image
      const std::size_t j = static_cast<std::size_t>(
          std::max_element(nr.argmax.begin(), nr.argmax.end()) - nr.argmax.begin());
      std::vector<Scalar> e(m, Scalar::exact(0));
      e[j] = Scalar::exact(1);
      for (const Scalar& y : apply_op(T, e)) ystar.push_back(Scalar::exact(y.sign()));
    } else {
      const std::vector<double> y = apply_op(T, nr.argmax);
      const double ny = lp_norm(y, pd);
      for (double v : y) {
        const double s = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
        ystar.push_back(Scalar::approx(s * std::pow(std::fabs(v) / ny, pd - 1)));
      }
    }
    std::vector<Scalar> f = transpose_apply(u, ystar);
    const Scalar scale = nr.value / dual_norm(f, p);
    for (auto& v : f) v = v * scale;

    ExtractedFunctional ef{T.n(), f, dual_norm(f, p), nr.value, 0.0, true};
    if (ef.norm.is_exact() && ef.op_norm.is_exact()) {
      ef.ok = compare(ef.norm, ef.op_norm) == 0;
    } else {
      ef.ok = std::fabs(ef.norm.value() - ef.op_norm.value()) <= 1e-9 * std::max(1.0, ef.op_norm.value());
    }
    std::mt19937_64 rng(seed + T.n());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t s = 0; s < samples; ++s) {
      std::vector<double> x(m);
      for (auto& v : x) v = normal(rng);
      double fx = 0;
      for (std::size_t i = 0; i < m; ++i) fx += f[i].value() * x[i];
      const double tx = lp_norm(apply_op(T, x), pd);
      if (tx > 0) ef.worst_ratio = std::max(ef.worst_ratio, std::fabs(fx) / tx);
    }
    if (ef.worst_ratio > 2 * (1 + 1e-12)) ef.ok = false;
    out.push_back(std::move(ef));
  }
  return out;
}

}  // namespace fbasis
