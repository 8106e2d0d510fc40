#include "fbasis/lp_operators.hpp"

#include "fbasis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fbasis {

namespace {

constexpr int kOuterCap = 200;
constexpr int kInnerCap = 200;

Scalar sum(const std::vector<Scalar>& v) {
  Scalar out = Scalar::exact(0);
  for (const auto& x : v) out = out + x;
  return out;
}

// Largest ||Tx||_p / ||x||_p over x = (t u + ..., -tau) for fixed tau, found
// through the stationarity condition x_i = tau u_i / (mu - 1).
struct InnerResult {
  double value;
  std::vector<double> x;
};

InnerResult inner_max(const std::vector<double>& u, double tau, double p, const TailOp& T) {
  const std::size_t n = u.size();
  std::vector<double> x(n + 1, 0.0);
  if (tau <= 0) {
    x[0] = 1.0;
    return {1.0, x};
  }
  if (tau >= 1) {
    x[n] = -1.0;
    return {lp_norm(apply_op(T, x), p), x};
  }
  double S = 0;
  for (double ui : u) S += std::pow(ui, p);
  const double target = 1 - std::pow(tau, p);
  // h(t) = (tau / t)^p S - target is decreasing in t = mu - 1 > 0; bisect on log t
  auto h = [&](double log_t) { return p * (std::log(tau) - log_t) + std::log(S) - std::log(target); };
  double lo = std::log(tau) - 1;
  double hi = std::log(tau) + 1;
  for (int i = 0; i < kInnerCap && h(lo) < 0; ++i) lo -= 2 * (hi - lo);
  for (int i = 0; i < kInnerCap && h(hi) > 0; ++i) hi += 2 * (hi - lo);
  if (h(lo) < 0 || h(hi) > 0) throw ConvergenceFailure("inner multiplier not bracketed", lo, hi);
  int it = 0;
  for (; it < kInnerCap && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0 ? lo : hi) = mid;
  }
  if (it == kInnerCap) throw ConvergenceFailure("inner root-finding hit its cap", lo, hi);
  const double t = std::exp(0.5 * (lo + hi));
  for (std::size_t i = 0; i < n; ++i) x[i] = tau * u[i] / t;
  x[n] = -tau;
  return {lp_norm(apply_op(T, x), p) / lp_norm(x, p), x};
}

double ratio(const TailOp& T, const std::vector<double>& x, double p) {
  const double d = lp_norm(x, p);
  if (d == 0) return 0;
  return lp_norm(apply_op(T, x), p) / d;
}

}  // namespace

SpaceKind SpaceKind::lp(const Rational& p, std::size_t dimension) {
  if (p < 1) throw DomainError("space exponent must be at least 1");
  if (dimension == 1) throw DomainError("truncation dimension must be at least 2");
  return {p, dimension};
}

std::string SpaceKind::name() const {
  if (is_l1()) return "l1";
  if (is_l2()) return "l2";
  return "lp(" + to_string(p) + ")";
}

TailOp::TailOp(std::size_t n, std::vector<Scalar> b, SpaceKind space)
    : n_(n), b_(std::move(b)), space_(std::move(space)) {
  if (n_ == 0) throw DomainError("stage index starts at 1");
  if (b_.size() < n_ + 1) throw DimensionMismatch("stage n needs coefficients b_1..b_{n+1}");
  b_.resize(n_ + 1);
  for (const auto& x : b_) {
    if (x.sign() <= 0) throw DomainError("coefficients must be positive");
  }
  if (space_.dimension != 0 && space_.dimension < n_ + 1) {
    throw DimensionMismatch("truncation dimension below n+1");
  }
}

std::vector<Scalar> TailOp::u() const {
  std::vector<Scalar> out;
  const Scalar inv = b_[n_].inverse();
  for (std::size_t i = 0; i < n_; ++i) out.push_back(b_[i] * inv);
  return out;
}

std::vector<double> TailOp::u_double() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < n_; ++i) out.push_back(b_[i].value() / b_[n_].value());
  return out;
}

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::ColumnMax: return "ColumnMax";
    case NormMethod::ClosedFormL2: return "ClosedFormL2";
    case NormMethod::NumericOpt: return "NumericOpt";
    case NormMethod::BruteForce: return "BruteForce";
    case NormMethod::RankOne: return "RankOne";
  }
  return "?";
}

std::vector<Scalar> apply_op(const TailOp& T, const std::vector<Scalar>& x) {
  const std::size_t n = T.n();
  if (x.size() < n + 1) throw DimensionMismatch("vector shorter than n+1");
  std::vector<Scalar> out(x.size(), Scalar::exact(0));
  const Scalar k = x[n] / T.b()[n];
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - k * T.b()[i];
  return out;
}

std::vector<double> apply_op(const TailOp& T, const std::vector<double>& x) {
  const std::size_t n = T.n();
  if (x.size() < n + 1) throw DimensionMismatch("vector shorter than n+1");
  std::vector<double> out(x.size(), 0.0);
  const double k = x[n] / T.b()[n].value();
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - k * T.b()[i].value();
  return out;
}

double lp_norm(const std::vector<double>& x, double p) {
  double scale = 0;
  for (double v : x) scale = std::max(scale, std::fabs(v));
  if (scale == 0) return 0;
  double s = 0;
  for (double v : x) s += std::pow(std::fabs(v) / scale, p);
  return scale * std::pow(s, 1 / p);
}

Scalar lp_norm_exact(const std::vector<Scalar>& x, const Rational& p) {
  if (p == 1) {
    Scalar s = Scalar::exact(0);
    for (const auto& v : x) s = s + v.abs();
    return s;
  }
  if (p == 2) {
    Rational sq = 0;
    bool exact = true;
    for (const auto& v : x) {
      if (!v.square()) {
        exact = false;
        break;
      }
      sq += *v.square();
    }
    if (exact) return Scalar::from_square(sq);
  }
  std::vector<double> d;
  for (const auto& v : x) d.push_back(v.value());
  return Scalar::approx(lp_norm(d, to_double(p)));
}

double riesz_thorin_bound(const TailOp& T) {
  const std::vector<double> u = T.u_double();
  double col = 0;
  double row = 1;
  for (double ui : u) {
    col += ui;
    row = std::max(row, 1 + ui);
  }
  col = std::max(col, 1.0);
  const double p = T.space().p_value();
  return std::pow(col, 1 / p) * std::pow(row, 1 - 1 / p);
}

NormReport op_norm_numeric(const TailOp& T) {
  const std::vector<double> u = T.u_double();
  const double p = T.space().p_value();
  auto G = [&](double tau) { return inner_max(u, tau, p, T); };
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = 0;
  double b = 1;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  InnerResult fc = G(c);
  InnerResult fd = G(d);
  InnerResult best = G(0);
  for (const InnerResult& r : {G(1), fc, fd}) {
    if (r.value > best.value) best = r;
  }
  int it = 0;
  for (; it < kOuterCap && b - a > 1e-13; ++it) {
    if (fc.value >= fd.value) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = G(c);
      if (fc.value > best.value) best = fc;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = G(d);
      if (fd.value > best.value) best = fd;
    }
  }
  if (it == kOuterCap) throw ConvergenceFailure("golden-section search hit its cap", a, b);
  NormReport r;
  r.method = NormMethod::NumericOpt;
  r.value = Scalar::approx(best.value);
  r.lower = ratio(T, best.x, p);
  r.upper = riesz_thorin_bound(T);
  r.argmax = best.x;
  return r;
}

NormReport op_norm(const TailOp& T) {
  const SpaceKind& space = T.space();
  NormReport r;
  if (space.is_l1()) {
    const Scalar s = sum(T.u());
    r.value = compare(s, Scalar::exact(1)) > 0 ? s : Scalar::exact(1);
    r.method = NormMethod::ColumnMax;
    r.lower = r.upper = r.value.value();
    r.argmax.assign(T.n() + 1, 0.0);
    r.argmax[compare(s, Scalar::exact(1)) > 0 ? T.n() : 0] = 1.0;
    return r;
  }
  if (space.is_l2()) {
    const std::vector<Scalar> u = T.u();
    Rational sq = 1;
    bool exact = true;
    double approx = 1;
    for (const auto& ui : u) {
      approx += ui.value() * ui.value();
      if (ui.square()) {
        sq += *ui.square();
      } else {
        exact = false;
      }
    }
    r.value = exact ? Scalar::from_square(sq) : Scalar::approx(std::sqrt(approx));
    r.method = NormMethod::ClosedFormL2;
    r.lower = r.upper = r.value.value();
    // top right singular vector of [I | -u]
    double uu = approx - 1;
    r.argmax.assign(T.n() + 1, 0.0);
    if (uu == 0) {
      r.argmax[0] = 1.0;
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) r.argmax[i] = u[i].value();
      r.argmax[T.n()] = -uu;
    }
    return r;
  }
  return op_norm_numeric(T);
}

NormReport op_norm_bruteforce(const TailOp& T, std::size_t budget, std::uint64_t seed) {
  const std::size_t m = T.n() + 1;
  const double p = T.space().p_value();
  NormReport r;
  r.method = NormMethod::BruteForce;
  r.upper = riesz_thorin_bound(T);

  double best = 0;
  std::vector<double> best_x(m, 0.0);
  std::vector<double> best_basis(m, 0.0);
  Scalar best_exact = Scalar::exact(0);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Scalar> e(m, Scalar::exact(0));
    e[k] = Scalar::exact(1);
    const Scalar val = lp_norm_exact(apply_op(T, e), T.space().p);
    if (compare(val, best_exact) > 0) best_exact = val;
    std::vector<double> x(m, 0.0);
    x[k] = 1.0;
    const double rv = ratio(T, x, p);
    if (rv > best) {
      best = rv;
      best_x = x;
    }
  }
  best_basis = best_x;
  if (T.space().is_l1()) {
    // the l1 norm of a matrix is attained at a basis direction
    r.value = best_exact;
    r.lower = best_exact.value();
    r.argmax = best_x;
    return r;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < budget; ++i) {
    std::vector<double> x(m);
    for (auto& v : x) v = normal(rng);
    const double rv = ratio(T, x, p);
    if (rv > best) {
      best = rv;
      best_x = x;
    }
  }

  auto ascend = [&](std::vector<double> x) {
    double cur = ratio(T, x, p);
    double step = 0.25;
    for (int sweep = 0; sweep < 20000 && step > 1e-12; ++sweep) {
      double scale = 0;
      for (double v : x) scale = std::max(scale, std::fabs(v));
      for (auto& v : x) v /= scale;
      bool improved = false;
      for (std::size_t j = 0; j < m; ++j) {
        for (double dir : {1.0, -1.0}) {
          const double keep = x[j];
          x[j] = keep + dir * step;
          const double rv = ratio(T, x, p);
          if (rv > cur) {
            cur = rv;
            improved = true;
            break;
          }
          x[j] = keep;
        }
      }
      if (!improved) step /= 2;
    }
    return std::make_pair(cur, x);
  };
  if (budget > 0) {
    for (const auto& start : {best_x, best_basis}) {
      auto [val, x] = ascend(start);
      if (val > best) {
        best = val;
        best_x = x;
      }
    }
  }
  r.value = Scalar::approx(best);
  r.lower = best;
  r.argmax = best_x;
  return r;
}

Scalar solve_b_next(const std::vector<Scalar>& b, const Scalar& a_target, const SpaceKind& space) {
  if (compare(a_target, Scalar::exact(1)) <= 0) throw DomainError("target norm must exceed 1");
  if (b.empty()) throw DomainError("need at least b_1");
  for (const auto& x : b) {
    if (x.sign() <= 0) throw DomainError("coefficients must be positive");
  }
  if (space.is_l1()) return sum(b) / a_target;
  if (space.is_l2()) {
    Rational sq = 0;
    bool exact = a_target.square().has_value();
    double approx = 0;
    for (const auto& x : b) {
      approx += x.value() * x.value();
      if (x.square()) {
        sq += *x.square();
      } else {
        exact = false;
      }
    }
    if (exact) return Scalar::from_square(sq / (*a_target.square() - 1));
    return Scalar::approx(std::sqrt(approx / (a_target.value() * a_target.value() - 1)));
  }

  const std::size_t n = b.size();
  const double a = a_target.value();
  const double p = space.p_value();
  const double q = p / (p - 1);
  auto norm_at = [&](double t) {
    std::vector<Scalar> bb = b;
    bb.push_back(Scalar::approx(t));
    return op_norm_numeric(TailOp(n, bb, space)).value.value();
  };
  std::vector<double> bd;
  for (const auto& x : b) bd.push_back(x.value());
  const double guess = lp_norm(bd, p) / std::pow(std::pow(a, q) - 1, 1 / q);
  double lo = guess / 2;
  double hi = guess * 2;
  double f_lo = norm_at(lo);
  double f_hi = norm_at(hi);
  for (int i = 0; i < kOuterCap && f_lo <= a; ++i) f_lo = norm_at(lo /= 2);
  for (int i = 0; i < kOuterCap && f_hi >= a; ++i) f_hi = norm_at(hi *= 2);
  if (f_lo <= a || f_hi >= a) throw ConvergenceFailure("could not bracket b_{n+1}", lo, hi);
  int it = 0;
  for (; it < kOuterCap && hi / lo - 1 > 1e-12; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double f_mid = norm_at(mid);
    if (f_mid > f_lo + 1e-12 || f_mid < f_hi - 1e-12) {
      throw ConvergenceFailure("norm is not decreasing in b_{n+1}", lo, hi);
    }
    if (f_mid > a) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  if (it == kOuterCap) throw ConvergenceFailure("bisection on b_{n+1} hit its cap", lo, hi);
  return Scalar::approx(std::sqrt(lo * hi));
}

NormReport remainder_norm(const TailOp& T) {
  const std::size_t dim = T.space().dimension == 0 ? T.n() + 2 : T.space().dimension;
  if (dim <= T.n() + 1) throw DimensionMismatch("remainder needs truncation dimension above n+1");
  // Id - T sends x to x_{n+1} (u, 1) plus the untouched coordinates past n+1
  std::vector<Scalar> w = T.u();
  w.push_back(Scalar::exact(1));
  NormReport r;
  r.method = NormMethod::RankOne;
  r.value = lp_norm_exact(w, T.space().p);
  r.lower = r.upper = r.value.value();
  return r;
}

std::vector<std::vector<double>> dense_matrix(const TailOp& T, std::size_t dimension) {
  const std::size_t n = T.n();
  if (dimension < n + 1) throw DimensionMismatch("dense matrix needs dimension at least n+1");
  std::vector<std::vector<double>> M(dimension, std::vector<double>(dimension, 0.0));
  const std::vector<double> u = T.u_double();
  for (std::size_t i = 0; i < n; ++i) {
    M[i][i] = 1.0;
    M[i][n] = -u[i];
  }
  return M;
}

}  // namespace fbasis
