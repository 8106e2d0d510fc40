#include "fbasis/filters.hpp"

#include "fbasis/errors.hpp"
#include "fbasis/syntax.hpp"

#include <cmath>
#include <functional>

namespace fbasis {

namespace {

using u64 = std::uint64_t;

// Indices are searched up to 2^53 so doubles stay exact.
constexpr u64 kSearchLimit = u64{1} << 53;
constexpr u64 kExplicitLimit = 1'000'000;

Tri negligible_by_density(const SetExpr& A) {
  const DensityVerdict d = natural_density(A);
  switch (d.kind) {
    case DensityVerdict::Kind::Zero: return Tri::True;
    case DensityVerdict::Kind::Exact: return Tri::False;
    case DensityVerdict::Kind::Bounds: return d.lower > 0 ? Tri::False : Tri::Unknown;
    case DensityVerdict::Kind::Inconclusive: return Tri::Unknown;
  }
  return Tri::Unknown;
}

Tri negligible_by_sum(const SumVerdict& v) {
  switch (v.kind) {
    case SumVerdict::Kind::Converges: return Tri::True;
    case SumVerdict::Kind::Diverges: return Tri::False;
    case SumVerdict::Kind::Inconclusive: return Tri::Unknown;
  }
  return Tri::Unknown;
}

// |x - t| > eps, exactly when possible.
bool exceeds(const Scalar& x, const Scalar& t, const Scalar& eps) {
  return compare((x - t).abs(), eps) > 0;
}

Scalar term_value(const SeqTerm& t, u64 n) {
  return eval_at(seqs::powlog(t.c, t.beta, t.gamma), n);
}

// First n in [lo, limit] with pred(n) true, for pred monotone false -> true.
std::optional<u64> first_true(u64 lo, u64 limit, const std::function<bool(u64)>& pred) {
  if (pred(lo)) return lo;
  u64 step = 1;
  u64 bad = lo;
  u64 good = 0;
  while (true) {
    const u64 probe = bad + step > limit ? limit : bad + step;
    if (pred(probe)) {
      good = probe;
      break;
    }
    if (probe == limit) return std::nullopt;
    bad = probe;
    step *= 2;
  }
  while (good - bad > 1) {
    const u64 mid = bad + (good - bad) / 2;
    (pred(mid) ? good : bad) = mid;
  }
  return good;
}

// Exceedance set of one symbolic term, or nullopt when out of reach.
std::optional<SetExpr> term_exceedance(const SeqTerm& t, const Scalar& target, const Scalar& eps) {
  const bool constant = t.c.sign() == 0 || (t.beta == 0 && t.gamma == 0);
  if (constant) return exceeds(t.c, target, eps) ? sets::all() : sets::none();

  // f'/f = beta/x + gamma/((x+1) ln(x+1)); the sign settles once ln(x+1) > |gamma/beta|
  u64 x1 = 1;
  if (t.beta != 0 && t.gamma != 0 && (t.beta > 0) != (t.gamma > 0)) {
    const double ratio = std::fabs(to_double(t.gamma) / to_double(t.beta));
    if (ratio > 13) return std::nullopt;
    x1 = static_cast<u64>(std::ceil(std::exp(ratio))) + 1;
  }
  const bool grows = t.beta > 0 || (t.beta == 0 && t.gamma > 0);
  const bool increasing = (t.c.sign() > 0) == grows;
  // limit of f: 0 when decaying, otherwise +-infinity
  const double lo = target.value() - eps.value();
  const double hi = target.value() + eps.value();
  auto in_band = [&](u64 n) { return !exceeds(term_value(t, n), target, eps); };

  std::vector<u64> before;
  for (u64 n = 1; n < x1; ++n) {
    if (!in_band(n)) before.push_back(n);
  }
  std::vector<SetExpr> parts;
  if (!before.empty()) parts.push_back(sets::finite(before));

  // On [x1, inf) f is monotone, so the band is met on one interval [u, v].
  auto entered = [&](u64 n) {
    const double f = term_value(t, n).value();
    return increasing ? f >= lo : f <= hi;
  };
  auto left = [&](u64 n) {
    const double f = term_value(t, n).value();
    return increasing ? f > hi : f < lo;
  };
  std::optional<u64> u;
  if (grows) {
    u = first_true(x1, kSearchLimit, entered);
    if (!u) return std::nullopt;
    std::optional<u64> w = first_true(*u, kSearchLimit, left);
    if (!w) return std::nullopt;
    if (*u > x1) parts.push_back(sets::range(x1, *u - 1));
    // exact check at the crossing indices guards against rounding in the double search
    std::vector<u64> edge;
    for (u64 n = *u; n < *w; ++n) {
      if (!in_band(n)) edge.push_back(n);
      if (n - *u > 4) break;
    }
    if (!edge.empty()) parts.push_back(sets::finite(edge));
    parts.push_back(sets::range(*w, std::nullopt));
  } else {
    const double limit = 0.0;
    const bool limit_inside = limit >= lo && limit <= hi;
    const bool limit_outside = limit < lo || limit > hi;
    if (limit_inside && !(limit == lo || limit == hi)) {
      u = first_true(x1, kSearchLimit, [&](u64 n) { return entered(n) && in_band(n); });
      if (!u) return std::nullopt;
      if (*u > x1) parts.push_back(sets::range(x1, *u - 1));
    } else if (limit_outside) {
      u = first_true(x1, kSearchLimit, entered);
      if (!u) {
        parts.push_back(sets::range(x1, std::nullopt));
      } else {
        if (*u > x1) parts.push_back(sets::range(x1, *u - 1));
        std::optional<u64> w = first_true(*u, kSearchLimit, left);
        if (!w) return std::nullopt;
        parts.push_back(sets::range(*w, std::nullopt));
      }
    } else {
      // limit on the band edge: inside eventually iff approached from inside
      const double f = term_value(t, x1).value();
      const bool from_inside = (limit == hi && f < limit) || (limit == lo && f > limit);
      if (!from_inside) {
        parts.push_back(sets::range(x1, std::nullopt));
      } else {
        u = first_true(x1, kSearchLimit, [&](u64 n) { return in_band(n); });
        if (!u) return std::nullopt;
        if (*u > x1) parts.push_back(sets::range(x1, *u - 1));
      }
    }
  }
  return canonicalize(sets::unite(parts));
}

}  // namespace

namespace filters {

FilterSpec frechet() { return FilterSpec{FrechetFilter{}}; }

FilterSpec statistical() { return FilterSpec{StatisticalFilter{}}; }

FilterSpec summable(ScalarSeq weights, const Settings& settings) {
  const FlatSeq flat = flatten(weights);
  for (const auto& [n, v] : flat.values) {
    if (v.sign() < 0) throw DomainError("summable filter weights must be nonnegative");
  }
  for (const auto& t : flat.terms) {
    if (t.c.sign() < 0) throw DomainError("summable filter weights must be nonnegative");
  }
  const SumVerdict total = weight_sum(sets::all(), weights, settings);
  if (total.kind != SumVerdict::Kind::Diverges) {
    throw DomainError("summable filter weights must have a provably divergent sum");
  }
  return FilterSpec{SummableFilter{std::move(weights)}};
}

}  // namespace filters

std::string to_string(SetClass c) {
  switch (c) {
    case SetClass::Member: return "Member";
    case SetClass::Negligible: return "Negligible";
    case SetClass::Stationary: return "Stationary";
    case SetClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(LimitVerdict::Kind k) {
  switch (k) {
    case LimitVerdict::Kind::ConvergesTo: return "ConvergesTo";
    case LimitVerdict::Kind::DoesNotConverge: return "DoesNotConverge";
    case LimitVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(DomVerdict::Kind k) {
  switch (k) {
    case DomVerdict::Kind::Proved: return "Proved";
    case DomVerdict::Kind::Refuted: return "Refuted";
    case DomVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Tri is_negligible(const SetExpr& A, const FilterSpec& F, const Settings& settings) {
  return std::visit(
      [&](const auto& f) -> Tri {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FrechetFilter>) {
          return tri_not(is_infinite(A));
        } else if constexpr (std::is_same_v<T, StatisticalFilter>) {
          return negligible_by_density(A);
        } else if constexpr (std::is_same_v<T, SummableFilter>) {
          return negligible_by_sum(weight_sum(A, f.weights, settings));
        } else {
          return is_negligible(sets::intersect({A, f.subset}), *f.base, settings);
        }
      },
      F.v);
}

Tri stationarity(const SetExpr& A, const FilterSpec& F, const Settings& settings) {
  return tri_not(is_negligible(A, F, settings));
}

SetClass classify_set(const SetExpr& A, const FilterSpec& F, const Settings& settings) {
  const Tri negligible = is_negligible(A, F, settings);
  if (negligible == Tri::True) return SetClass::Negligible;
  const Tri member = is_negligible(sets::complement(A), F, settings);
  if (member == Tri::True) return SetClass::Member;
  if (negligible == Tri::False && member == Tri::False) return SetClass::Stationary;
  return SetClass::Inconclusive;
}

FilterSpec trace_filter(const FilterSpec& F, const SetExpr& I, const Settings& settings) {
  const Tri st = stationarity(I, F, settings);
  if (st == Tri::False) throw NotStationary(to_text(I) + " is negligible for " + to_text(F));
  if (st == Tri::Unknown) {
    throw NotStationary("could not certify that " + to_text(I) + " is stationary for " + to_text(F));
  }
  return FilterSpec{TraceFilter{std::make_shared<const FilterSpec>(F), I}};
}

SetExpr exceedance_set(const ScalarSeq& x, const Scalar& target, const Rational& eps_r,
                       const Settings& settings) {
  const Scalar eps = Scalar::exact(eps_r);
  const FlatSeq flat = flatten(x);
  std::vector<SetExpr> parts;
  std::vector<u64> explicit_hits;
  for (const auto& [n, v] : flat.values) {
    if (exceeds(v, target, eps)) explicit_hits.push_back(n);
  }
  if (!explicit_hits.empty()) parts.push_back(sets::finite(explicit_hits));
  for (const auto& t : flat.terms) {
    auto e = term_exceedance(t, target, eps);
    if (!e) {
      // sampled fallback over the horizon
      const u64 horizon = std::min<u64>(settings.horizon, kExplicitLimit);
      const ScalarSeq term = seqs::powlog(t.c, t.beta, t.gamma);
      const double tv = target.value();
      const double ev = eps.value();
      std::vector<u64> members;
      for (u64 n = 1; n <= horizon; ++n) {
        if (member(n, t.domain) != Tri::True) continue;
        // exact comparison only near the band edge
        const double gap = std::fabs(eval_double(term, n) - tv) - ev;
        const bool hit = std::fabs(gap) > 1e-9 * (1 + ev) ? gap > 0 : exceeds(eval_at(term, n), target, eps);
        if (hit) members.push_back(n);
      }
      parts.push_back(sets::sampled(horizon, members));
      continue;
    }
    parts.push_back(sets::intersect({t.domain, *e}));
  }
  return canonicalize(sets::unite(parts));
}

std::vector<Rational> default_eps_schedule() {
  std::vector<Rational> out;
  for (int k = 0; k <= 20; ++k) out.push_back(Rational(1, BigInt(1) << k));
  return out;
}

LimitVerdict f_limit_scalar(const ScalarSeq& x, const FilterSpec& F, const Scalar& target,
                            const std::vector<Rational>& schedule, const Settings& settings) {
  LimitVerdict out;
  out.target = target;
  bool undecided = false;
  for (const Rational& eps : schedule) {
    if (eps <= 0) throw DomainError("epsilon must be positive");
    SetExpr E = exceedance_set(x, target, eps, settings);
    const Tri negligible = is_negligible(E, F, settings);
    SetClass cls = SetClass::Negligible;
    if (negligible != Tri::True) cls = classify_set(E, F, settings);
    if (negligible == Tri::False && cls == SetClass::Inconclusive) cls = SetClass::Stationary;
    out.steps.push_back({eps, E, cls});
    if (negligible == Tri::False) {
      out.kind = LimitVerdict::Kind::DoesNotConverge;
      out.eps = eps;
      return out;
    }
    if (negligible == Tri::Unknown) undecided = true;
  }
  out.kind = undecided ? LimitVerdict::Kind::Inconclusive : LimitVerdict::Kind::ConvergesTo;
  return out;
}

bool same_filter(const FilterSpec& a, const FilterSpec& b) { return to_text(a) == to_text(b); }

std::vector<SetExpr> witness_library() {
  std::vector<SetExpr> base{sets::all()};
  for (u64 q = 2; q <= 4; ++q) {
    for (u64 r = 0; r < q; ++r) base.push_back(sets::residue(q, r));
  }
  base.push_back(sets::geometric(2));
  base.push_back(sets::geometric(3));
  std::vector<SetExpr> out = base;
  for (std::size_t i = 1; i < base.size(); ++i) out.push_back(sets::complement(base[i]));
  return out;
}

DomVerdict dominates(const FilterSpec& F1, const FilterSpec& F2, const Settings& settings) {
  DomVerdict out;
  auto proved = [&](std::string rule) {
    out.kind = DomVerdict::Kind::Proved;
    out.rule = std::move(rule);
    return out;
  };
  if (std::holds_alternative<FrechetFilter>(F2.v)) return proved("every free filter contains the cofinite sets");
  if (same_filter(F1, F2)) return proved("equal filters");
  if (auto t = std::get_if<TraceFilter>(&F1.v)) {
    DomVerdict base = dominates(*t->base, F2, settings);
    if (base.kind == DomVerdict::Kind::Proved) return proved("a trace contains its base filter; " + base.rule);
  }
  if (auto s2 = std::get_if<SummableFilter>(&F2.v)) {
    if (auto s1 = std::get_if<SummableFilter>(&F1.v)) {
      if (is_bounded(seq_mul(s1->weights, seq_pow(s2->weights, -1))) == Tri::True) {
        return proved("weight ratio s/t is bounded");
      }
    }
    if (std::holds_alternative<StatisticalFilter>(F1.v)) {
      const ScalarSeq n = seqs::power(Scalar::exact(1), 1);
      if (is_positive(s2->weights) == Tri::True &&
          is_bounded(seq_pow(seq_mul(n, s2->weights), -1)) == Tri::True) {
        return proved("weights dominate 1/n, so summable sets have density zero");
      }
    }
  }
  for (const SetExpr& A : witness_library()) {
    if (classify_set(A, F2, settings) != SetClass::Member) continue;
    const SetClass c1 = classify_set(A, F1, settings);
    if (c1 == SetClass::Negligible || c1 == SetClass::Stationary) {
      out.kind = DomVerdict::Kind::Refuted;
      out.rule = "library set is a member of the second filter only";
      out.witness = A;
      return out;
    }
  }
  out.kind = DomVerdict::Kind::Inconclusive;
  out.rule = "no rule applied and no library witness found";
  return out;
}

}  // namespace fbasis
