#include "fbasis/admissibility.hpp"

#include "fbasis/errors.hpp"
#include "fbasis/syntax.hpp"

#include <cmath>

namespace fbasis {

namespace {

using u64 = std::uint64_t;

AdmissVerdict proved(std::string criterion) {
  AdmissVerdict v;
  v.kind = AdmissVerdict::Kind::Proved;
  v.criterion = std::move(criterion);
  return v;
}

AdmissVerdict inconclusive(std::string reason) {
  AdmissVerdict v;
  v.kind = AdmissVerdict::Kind::Inconclusive;
  v.criterion = std::move(reason);
  return v;
}

// Refutation by I, kept only if both halves of the certificate check out.
std::optional<AdmissVerdict> refute(const ScalarSeq& a, const FilterSpec& F, const Rational& p,
                                    const SetExpr& I, std::string criterion,
                                    const Settings& settings) {
  SumVerdict sum = sum_inverse_p_verdict(a, p, I, settings);
  if (sum.kind != SumVerdict::Kind::Converges) return std::nullopt;
  if (stationarity(I, F, settings) != Tri::True) return std::nullopt;
  AdmissVerdict v;
  v.kind = AdmissVerdict::Kind::Refuted;
  v.criterion = std::move(criterion);
  v.witness = I;
  const SetClass cls = classify_set(I, F, settings);
  v.witness_class = cls == SetClass::Inconclusive ? "not negligible" : to_string(cls);
  v.inverse_sum_certificate = sum;
  return v;
}

std::vector<SetExpr> candidates(const ScalarSeq& a, const FilterSpec& F) {
  std::vector<SetExpr> out = witness_library();
  const u64 bases[] = {2, 3, 5};
  for (u64 b : bases) {
    if (b > 3) out.push_back(sets::geometric(b));
  }
  for (const auto& t : flatten(a).terms) {
    const bool grows = t.beta > 0 || (t.beta == 0 && t.gamma > 0);
    if (!grows || std::holds_alternative<CoFiniteAtom>(t.domain.node().v)) continue;
    for (u64 b : bases) out.push_back(canonicalize(sets::intersect({t.domain, sets::geometric(b)})));
  }
  if (auto tr = std::get_if<TraceFilter>(&F.v)) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(canonicalize(sets::intersect({out[i], tr->subset})));
  }
  return out;
}

std::optional<AdmissVerdict> library_search(const ScalarSeq& a, const FilterSpec& F,
                                            const Rational& p, const Settings& settings) {
  // only convergent sums matter here, so numeric fallbacks stay short
  Settings quick = settings;
  quick.horizon = std::min<u64>(settings.horizon, 1000);
  for (const SetExpr& I : candidates(a, F)) {
    if (auto v = refute(a, F, p, I, "library set with convergent sum of a_n^-p", quick)) return v;
  }
  return std::nullopt;
}

void add_caveats(AdmissVerdict& v, const Rational& p) {
  if (p == 1) {
    v.caveats.push_back(
        "for p = 1 the link between admissibility and acceptability is certified only for l_1-type duals");
  }
}

AdmissVerdict check_impl(const ScalarSeq& a, const FilterSpec& F, const Rational& p,
                         const Settings& settings) {
  const SumVerdict global = sum_inverse_p_verdict(a, p, sets::all(), settings);
  if (global.kind == SumVerdict::Kind::Converges) {
    if (auto v = refute(a, F, p, sets::all(), "sum of a_n^-p over all indices converges", settings)) return *v;
  }
  if (is_bounded(a) == Tri::True) return proved("bounded sequence");

  return std::visit(
      [&](const auto& f) -> AdmissVerdict {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FrechetFilter>) {
          if (auto v = library_search(a, F, p, settings)) return *v;
          if (is_bounded(a) == Tri::False) {
            // unit weights: block m is the single next index with a_n^p > 2^m
            try {
              SetExpr D = nonadmissibility_witness(a, seqs::constant(Scalar::exact(1)), p, settings);
              if (auto v = refute(a, F, p, D, "sparse subsequence with a_n^p > 2^m", settings)) return *v;
            } catch (const HorizonExceeded&) {
            } catch (const CriterionHolds&) {
            }
          }
          return inconclusive("unbounded, but no sparse set with a convergent sum was certified");
        } else if constexpr (std::is_same_v<T, SummableFilter>) {
          const Tri bounded = summable_bounded(a, f.weights, p, settings);
          if (bounded == Tri::True) return proved("a_n^p s_n bounded outside an s-summable set");
          if (bounded == Tri::False) {
            try {
              SetExpr D = nonadmissibility_witness(a, f.weights, p, settings);
              if (auto v = refute(a, F, p, D, "greedy blocks inside {a_n^p s_n > 2^m}", settings)) return *v;
            } catch (const HorizonExceeded&) {
            } catch (const DomainError&) {
            }
          }
          if (auto v = library_search(a, F, p, settings)) return *v;
          return inconclusive(bounded == Tri::False ? "criterion fails but no witness could be certified"
                                                    : "boundedness of a_n^p s_n undecided");
        } else if constexpr (std::is_same_v<T, StatisticalFilter>) {
          const Tri mono = eventually_nondecreasing(a);
          if (mono == Tri::True) {
            const ScalarSeq ratio = seq_mul(a, seqs::power(Scalar::exact(1), -1 / p));
            const Tri bounded = is_bounded(ratio);
            if (bounded == Tri::True) return proved("non-decreasing with a_n n^(-1/p) bounded");
            if (auto v = library_search(a, F, p, settings)) return *v;
            if (bounded == Tri::False) {
              return inconclusive("non-decreasing with a_n n^(-1/p) unbounded; no symbolic witness available");
            }
            return inconclusive("growth of a_n n^(-1/p) undecided");
          }
          if (auto v = library_search(a, F, p, settings)) return *v;
          return inconclusive("sequence is not provably non-decreasing");
        } else {
          AdmissVerdict base = check_impl(a, *f.base, p, settings);
          if (base.kind == AdmissVerdict::Kind::Proved) {
            return proved("admissible for the base filter: " + base.criterion);
          }
          if (auto v = library_search(a, F, p, settings)) return *v;
          return inconclusive("base filter verdict: " + base.criterion);
        }
      },
      F.v);
}

}  // namespace

std::string to_string(AdmissVerdict::Kind k) {
  switch (k) {
    case AdmissVerdict::Kind::Proved: return "Proved";
    case AdmissVerdict::Kind::Refuted: return "Refuted";
    case AdmissVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(SlowVerdict::Kind k) {
  switch (k) {
    case SlowVerdict::Kind::SlowByRule: return "SlowByRule";
    case SlowVerdict::Kind::NotSlow: return "NotSlow";
    case SlowVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Tri summable_bounded(const ScalarSeq& a, const ScalarSeq& s, const Rational& p,
                     const Settings& settings) {
  const FlatSeq flat = flatten(seq_mul(seq_pow(a, p), s));
  Tri out = Tri::True;
  for (const auto& t : flat.terms) {
    const bool grows = t.beta > 0 || (t.beta == 0 && t.gamma > 0);
    if (t.c.sign() == 0 || !grows) continue;
    // on this domain a^p s tends to infinity, so the domain must be s-summable
    const SumVerdict v = weight_sum(t.domain, s, settings);
    if (v.kind == SumVerdict::Kind::Diverges) return Tri::False;
    if (v.kind == SumVerdict::Kind::Inconclusive) out = Tri::Unknown;
  }
  return out;
}

std::shared_ptr<const GreedyBlocks> greedy_blocks(const ScalarSeq& a, const ScalarSeq& s,
                                                  const Rational& p, u64 horizon) {
  if (p < 1) throw DomainError("exponent p must be at least 1");
  auto g = std::make_shared<GreedyBlocks>(GreedyBlocks{.sequence = a, .weights = s, .exponent = p, .horizon = horizon, .scanned_to = 0, .certified_infinite = false, .blocks = {}, .sorted_runs = {}});
  g->certified_infinite = summable_bounded(a, s, p) == Tri::False;
  const double pd = to_double(p);
  u64 n = 1;
  for (int m = 1; m < 1000 && n <= horizon; ++m) {
    const double threshold = std::ldexp(1.0, m);
    GreedyBlocks::Block block;
    double mass = 0;
    double inverse = 0;
    for (; n <= horizon && mass < 1; ++n) {
      const double an = eval_double(a, n);
      const double sn = eval_double(s, n);
      if (an <= 0) throw DomainError("sequence must be positive");
      if (sn < 0) throw DomainError("weights must be nonnegative");
      if (std::pow(an, pd) * sn <= threshold) continue;
      if (sn > 1) throw DomainError("weights above 1 cannot form blocks of mass in [1, 2]");
      mass += sn;
      inverse += std::pow(an, -pd);
      if (!block.runs.empty() && block.runs.back().second + 1 == n) {
        block.runs.back().second = n;
      } else {
        block.runs.emplace_back(n, n);
      }
    }
    if (mass < 1) break;
    block.weight_sum = mass;
    block.inverse_sum = inverse;
    g->blocks.push_back(std::move(block));
    g->scanned_to = n - 1;
  }
  g->index_runs();
  return g;
}

SetExpr nonadmissibility_witness(const ScalarSeq& a, const ScalarSeq& s, const Rational& p,
                                 const Settings& settings) {
  const Tri bounded = summable_bounded(a, s, p, settings);
  if (bounded == Tri::True) {
    throw CriterionHolds("a_n^p s_n is bounded outside an s-summable set");
  }
  auto g = greedy_blocks(a, s, p, settings.horizon);
  if (g->blocks.empty()) {
    throw HorizonExceeded("no block completed within " + std::to_string(settings.horizon) + " indices");
  }
  return sets::blocks(g);
}

AdmissVerdict check_admissible(const ScalarSeq& a, const FilterSpec& F, const Rational& p,
                               const Settings& settings) {
  if (p < 1) throw DomainError("exponent p must be at least 1");
  if (is_positive(a) == Tri::False) throw DomainError("sequence has nonpositive values");
  AdmissVerdict v = check_impl(a, F, p, settings);
  add_caveats(v, p);
  return v;
}

BandReport admissibility_band(const ScalarSeq& a, const FilterSpec& F, const Rational& p, int steps,
                              const Settings& settings) {
  if (!(p > 1 && p < 2)) throw DomainError("band exponent must lie strictly between 1 and 2");
  if (steps < 1) throw DomainError("band needs at least one interior point");
  BandReport out;
  out.p = p;
  out.sufficient = check_admissible(a, F, p, settings);
  for (int k = 1; k <= steps; ++k) {
    const Rational s = 1 + Rational(k) * (p - 1) / (steps + 1);
    out.necessary.emplace_back(s, check_admissible(a, F, s, settings));
  }
  return out;
}

FilterSpec associated_summable_filter(const ScalarSeq& a, const Settings& settings) {
  const SumVerdict v = sum_inverse_p_verdict(a, 1, sets::all(), settings);
  if (v.kind == SumVerdict::Kind::Converges) throw NotDivergent("sum of 1/a_n converges");
  if (v.kind != SumVerdict::Kind::Diverges) throw NotDivergent("divergence of sum 1/a_n is undecided");
  return filters::summable(seq_pow(a, -1), settings);
}

SlowVerdict slow_certificate(const FilterSpec& F, const Settings& settings) {
  SlowVerdict out;
  if (std::holds_alternative<FrechetFilter>(F.v)) {
    out.kind = SlowVerdict::Kind::SlowByRule;
    out.rule = "admissible sequences are bounded";
    return out;
  }
  if (auto s = std::get_if<SummableFilter>(&F.v)) {
    if (auto pl = std::get_if<PowerLogSeq>(&s->weights.node().v)) {
      if (pl->c.sign() > 0 && pl->gamma == 0 && pl->beta < 0 && pl->beta > Rational(-1, 2)) {
        out.kind = SlowVerdict::Kind::SlowByRule;
        out.rule = "weights c n^-alpha with 0 < alpha < 1/2";
        return out;
      }
    }
  }
  const Rational exponents[] = {Rational(1, 2), Rational(3, 4), Rational(1)};
  for (const Rational& e : exponents) {
    const ScalarSeq a = seqs::power(Scalar::exact(1), e);
    const ScalarSeq ratio = seq_mul(a, seqs::power(Scalar::exact(1), Rational(-1, 2)));
    if (is_bounded_below(ratio) != Tri::True) continue;
    if (check_admissible(a, F, 1, settings).kind == AdmissVerdict::Kind::Proved) {
      out.kind = SlowVerdict::Kind::NotSlow;
      out.rule = "admissible at p = 1 with inf a_n / sqrt(n) > 0";
      out.witness = a;
      return out;
    }
  }
  out.kind = SlowVerdict::Kind::Inconclusive;
  out.rule = "no rule applies and no library sequence is certified";
  return out;
}

}  // namespace fbasis
