#include "fbasis/natset.hpp"

#include "fbasis/errors.hpp"
#include "fbasis/sequences.hpp"
#include "fbasis/syntax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace fbasis {

using u64 = std::uint64_t;

namespace {

constexpr u64 kMaxModulus = u64{1} << 22;
constexpr u64 kMaxPeriod = u64{1} << 22;
constexpr u64 kEnumerationLimit = 20'000'000;
constexpr u64 kSaturated = std::numeric_limits<u64>::max();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class Node>
SetExpr make(Node node) {
  return SetExpr(std::make_shared<const SetNode>(SetNode{std::move(node)}));
}

bool positive_increasing(const std::vector<u64>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

u64 sat_mul(u64 a, u64 b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  return r > kSaturated ? kSaturated : static_cast<u64>(r);
}

u64 sat_pow(u64 base, u64 exp) {
  u64 out = 1;
  for (u64 i = 0; i < exp; ++i) {
    out = sat_mul(out, base);
    if (out == kSaturated) break;
  }
  return out;
}

bool is_power_of(u64 n, u64 b) {
  if (n < b) return false;
  u64 x = b;
  while (x < n) {
    if (x > n / b) return false;
    x *= b;
  }
  return x == n;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::False;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

// Points at which membership is evaluated: a concrete index, a large index
// of the given residue modulo Q that is not a power of any family root, or a
// large power root^k.
struct LargeGeneric {
  u64 residue;
};
struct LargePower {
  u64 root;
  u64 k;
};
using Point = std::variant<u64, LargeGeneric, LargePower>;

Tri eval(const SetExpr& e, const Point& pt) {
  const bool exact = std::holds_alternative<u64>(pt);
  const u64 n = exact ? std::get<u64>(pt) : 0;
  return std::visit(
      overloaded{
          [&](const FiniteAtom& a) {
            return tri_of(exact && std::binary_search(a.elements.begin(), a.elements.end(), n));
          },
          [&](const CoFiniteAtom& a) {
            return tri_of(!exact || !std::binary_search(a.excluded.begin(), a.excluded.end(), n));
          },
          [&](const ResidueAtom& a) {
            if (exact) return tri_of(n % a.modulus == a.residue);
            if (auto g = std::get_if<LargeGeneric>(&pt)) return tri_of(g->residue % a.modulus == a.residue);
            const auto& p = std::get<LargePower>(pt);
            return tri_of(pow_mod(p.root, p.k, a.modulus) == a.residue);
          },
          [&](const RangeAtom& a) {
            if (exact) return tri_of(n >= a.lo && (!a.hi || n <= *a.hi));
            return tri_of(!a.hi.has_value());
          },
          [&](const GeometricAtom& a) {
            if (exact) return tri_of(is_power_of(n, a.base));
            if (std::holds_alternative<LargeGeneric>(pt)) return Tri::False;
            const auto& p = std::get<LargePower>(pt);
            auto [root, i] = perfect_power_root(a.base);
            return tri_of(root == p.root && p.k % i == 0);
          },
          [&](const SampledAtom& a) {
            if (!exact || n > a.horizon) return Tri::Unknown;
            return tri_of(std::binary_search(a.members.begin(), a.members.end(), n));
          },
          [&](const BlocksAtom& a) { return exact ? a.data->contains(n) : Tri::Unknown; },
          [&](const UnionNode& u) {
            Tri t = Tri::False;
            for (const auto& c : u.terms) {
              t = tri_or(t, eval(c, pt));
              if (t == Tri::True) break;
            }
            return t;
          },
          [&](const IntersectionNode& u) {
            Tri t = Tri::True;
            for (const auto& c : u.terms) {
              t = tri_and(t, eval(c, pt));
              if (t == Tri::False) break;
            }
            return t;
          },
          [&](const ComplementNode& c) { return tri_not(eval(c.inner, pt)); },
      },
      e.node().v);
}

struct Atoms {
  u64 modulus = 1;
  u64 threshold = 0;
  bool too_large = false;
  std::map<u64, std::vector<u64>> families;  // root -> exponents
};

void collect(const SetExpr& e, Atoms& out) {
  std::visit(overloaded{
                 [&](const FiniteAtom& a) {
                   if (!a.elements.empty()) out.threshold = std::max(out.threshold, a.elements.back());
                 },
                 [&](const CoFiniteAtom& a) {
                   if (!a.excluded.empty()) out.threshold = std::max(out.threshold, a.excluded.back());
                 },
                 [&](const ResidueAtom& a) {
                   out.modulus = lcm_u64(out.modulus, a.modulus);
                   if (out.modulus > kMaxModulus) out.too_large = true;
                 },
                 [&](const RangeAtom& a) {
                   out.threshold = std::max(out.threshold, a.hi ? *a.hi : a.lo);
                 },
                 [&](const GeometricAtom& a) {
                   auto [root, i] = perfect_power_root(a.base);
                   out.families[root].push_back(i);
                 },
                 [&](const SampledAtom& a) { out.threshold = std::max(out.threshold, a.horizon); },
                 [&](const BlocksAtom& a) { out.threshold = std::max(out.threshold, a.data->scanned_to); },
                 [&](const UnionNode& u) {
                   for (const auto& c : u.terms) collect(c, out);
                 },
                 [&](const IntersectionNode& u) {
                   for (const auto& c : u.terms) collect(c, out);
                 },
                 [&](const ComplementNode& c) { collect(c.inner, out); },
             },
             e.node().v);
}

// Membership of c^k for k >= start is periodic with the stored period.
// Powers above the threshold but before `start` are listed in `pre`,
// beginning at exponent `first_large`.
struct Family {
  u64 root = 0;
  u64 first_large = 0;
  u64 start = 0;
  std::vector<Tri> periodic;
  std::vector<Tri> pre;
};

// Eventual behaviour of a set: which residue classes of large non-power
// indices it contains, and which powers of each geometric root.
struct Structure {
  u64 modulus = 1;
  u64 threshold = 0;
  std::vector<Tri> classes;
  std::vector<Family> families;
};

bool any_of_tri(const std::vector<Tri>& v, bool definite) {
  for (Tri t : v) {
    if (t == Tri::True || (!definite && t == Tri::Unknown)) return true;
  }
  return false;
}

std::optional<Structure> analyze(const SetExpr& s) {
  Atoms atoms;
  collect(s, atoms);
  if (atoms.too_large) return std::nullopt;
  Structure st;
  st.modulus = atoms.modulus;
  st.threshold = atoms.threshold;
  const u64 Q = atoms.modulus;
  st.classes.resize(Q);
  for (u64 r = 0; r < Q; ++r) st.classes[r] = eval(s, LargeGeneric{r});

  for (const auto& [root, exponents] : atoms.families) {
    u64 L = 1;
    u64 max_i = 1;
    for (u64 i : exponents) {
      L = lcm_u64(L, i);
      max_i = std::max(max_i, i);
    }
    // preperiod and period of k -> root^k mod Q
    u64 mu = 1;
    u64 lambda = 1;
    if (Q > 1) {
      std::vector<u64> seen(Q, 0);
      u64 v = root % Q;
      for (u64 k = 1;; ++k) {
        if (seen[v] != 0) {
          mu = seen[v];
          lambda = k - seen[v];
          break;
        }
        seen[v] = k;
        v = static_cast<u64>(static_cast<unsigned __int128>(v) * root % Q);
      }
    }
    u64 k_thr = 1;
    while (sat_pow(root, k_thr) <= st.threshold) ++k_thr;
    const u64 period = lcm_u64(L, lambda);
    if (period > kMaxPeriod) return std::nullopt;
    Family fam;
    fam.root = root;
    fam.first_large = k_thr;
    fam.start = std::max({mu, k_thr, max_i});
    for (u64 k = k_thr; k < fam.start; ++k) fam.pre.push_back(eval(s, LargePower{root, k}));
    fam.periodic.resize(period);
    for (u64 j = 0; j < period; ++j) fam.periodic[j] = eval(s, LargePower{root, fam.start + j});
    st.families.push_back(std::move(fam));
  }
  return st;
}

bool structure_nonempty(const Structure& st, bool definite) {
  if (any_of_tri(st.classes, definite)) return true;
  for (const auto& f : st.families) {
    if (any_of_tri(f.periodic, definite)) return true;
  }
  return false;
}

// ---- weight sums -------------------------------------------------------

bool residue_rule_diverges(const Rational& beta, const Rational& gamma) {
  return beta > -1 || (beta == -1 && gamma >= -1);
}

bool geometric_rule_diverges(const Rational& beta, const Rational& gamma) {
  return beta > 0 || (beta == 0 && gamma >= -1);
}

// Value of the term at x = e^{log_x}.
double term_at_log(const SeqTerm& t, double log_x) {
  const double L = log_x + std::log1p(std::exp(-log_x));
  return std::fabs(t.c.value()) * std::exp(to_double(t.beta) * log_x) *
         std::pow(L, to_double(t.gamma));
}

// Bound on sum over all n > K.
std::optional<double> tail_all(const SeqTerm& t, u64 K) {
  const double c = std::fabs(t.c.value());
  const double beta = to_double(t.beta);
  const double gamma = to_double(t.gamma);
  const double k = static_cast<double>(K);
  const double LK = std::log1p(k);
  if (t.beta < -1 && t.gamma <= 0) {
    return c * std::pow(LK, gamma) * std::pow(k, beta + 1) / (-beta - 1);
  }
  if (t.beta == -1 && t.gamma < -1) {
    return c * (1 + 1 / k) * std::pow(LK, gamma + 1) / (-gamma - 1);
  }
  if (t.beta < -1 && t.gamma > 0) {
    // ln y <= y^d / (d e) with d = eps / gamma
    const double eps = (-beta - 1) / 2;
    const double C = std::pow(1 + 1 / k, eps) * std::pow(gamma / (eps * M_E), gamma);
    const double e = beta + eps;
    return c * C * std::pow(k, e + 1) / (-e - 1);
  }
  return std::nullopt;
}

// Bound on sum over k >= ks of the term at root^k.
std::optional<double> tail_family(const SeqTerm& t, u64 root, u64 ks) {
  const double lr = std::log(static_cast<double>(root));
  const double beta = to_double(t.beta);
  const double gamma = to_double(t.gamma);
  if (t.beta < 0 && t.gamma <= 0) {
    const double c = std::fabs(t.c.value());
    const double log_x = static_cast<double>(ks) * lr;
    const double L = log_x + std::log1p(std::exp(-log_x));
    return c * std::pow(L, gamma) * std::exp(beta * log_x) / (1 - std::exp(beta * lr));
  }
  if (t.beta < 0 && t.gamma > 0) {
    double extra = 0;
    u64 k = ks;
    for (int guard = 0; guard < 100000; ++guard, ++k) {
      const double r = std::exp(beta * lr) * std::pow(1 + 1.0 / static_cast<double>(k), gamma);
      if (r < 1) return extra + term_at_log(t, static_cast<double>(k) * lr) / (1 - r);
      extra += term_at_log(t, static_cast<double>(k) * lr);
    }
    return std::nullopt;
  }
  if (t.beta == 0 && t.gamma < -1) {
    const double c = std::fabs(t.c.value());
    const double kd = static_cast<double>(ks);
    return c * std::pow(lr, gamma) * (std::pow(kd, gamma) + std::pow(kd, gamma + 1) / (-gamma - 1));
  }
  return std::nullopt;
}

std::optional<double> term_bound(const Structure& st, const SetExpr& A, const SeqTerm& t,
                                 const Settings& settings) {
  const u64 K = std::max(st.threshold, settings.enumeration_cutoff);
  if (K > kEnumerationLimit) return std::nullopt;
  const ScalarSeq term = seqs::powlog(t.c, t.beta, t.gamma);
  double sum = 0;
  for (u64 n = 1; n <= K; ++n) {
    if (eval(A, n) != Tri::False) sum += eval_double(term, n);
  }
  if (any_of_tri(st.classes, false)) {
    auto tail = tail_all(t, K);
    if (!tail) return std::nullopt;
    return sum + *tail;
  }
  for (const auto& f : st.families) {
    const double lr = std::log(static_cast<double>(f.root));
    u64 kK = 1;
    while (sat_pow(f.root, kK) <= K) ++kK;
    for (std::size_t j = 0; j < f.pre.size(); ++j) {
      const u64 k = f.first_large + j;
      if (k >= kK && f.pre[j] != Tri::False) sum += term_at_log(t, static_cast<double>(k) * lr);
    }
    if (any_of_tri(f.periodic, false)) {
      auto tail = tail_family(t, f.root, std::max(f.start, kK));
      if (!tail) return std::nullopt;
      sum += *tail;
    }
  }
  return sum;
}

double partial_sum(const SetExpr& s, const ScalarSeq& w, u64 horizon) {
  double sum = 0;
  for (u64 n = 1; n <= horizon; ++n) {
    if (eval(s, n) == Tri::True) sum += eval_double(w, n);
  }
  return sum;
}

SumVerdict inconclusive_sum(const SetExpr& s, const ScalarSeq& w, const Settings& settings,
                            std::string rule) {
  SumVerdict v;
  v.kind = SumVerdict::Kind::Inconclusive;
  v.horizon = settings.horizon;
  v.partial = partial_sum(s, w, settings.horizon);
  v.rule = std::move(rule);
  return v;
}

// ---- canonical form ----------------------------------------------------

std::vector<u64> divisors(u64 q) {
  std::vector<u64> small;
  std::vector<u64> large;
  for (u64 d = 1; d * d <= q; ++d) {
    if (q % d == 0) {
      small.push_back(d);
      if (d * d != q) large.push_back(q / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Union of residue classes, merged into the coarsest moduli.
std::vector<SetExpr> merge_residues(std::map<u64, std::set<u64>> groups, bool& everything) {
  std::vector<SetExpr> out;
  everything = false;
  while (!groups.empty()) {
    auto it = std::prev(groups.end());
    const u64 q = it->first;
    std::set<u64> R = std::move(it->second);
    groups.erase(it);
    u64 chosen = q;
    std::set<u64> reduced = R;
    for (u64 d : divisors(q)) {
      std::set<u64> Rd;
      for (u64 r : R) Rd.insert(r % d);
      if (Rd.size() * (q / d) == R.size()) {
        chosen = d;
        reduced = std::move(Rd);
        break;
      }
    }
    if (chosen == 1) {
      everything = true;
      return {};
    }
    if (chosen != q) {
      groups[chosen].insert(reduced.begin(), reduced.end());
      continue;
    }
    for (u64 r : R) out.push_back(sets::residue(q, r));
  }
  return out;
}

std::vector<SetExpr> sorted_unique(std::vector<SetExpr> terms) {
  std::vector<std::pair<std::string, SetExpr>> keyed;
  keyed.reserve(terms.size());
  for (auto& t : terms) keyed.emplace_back(to_text(t), t);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SetExpr> out;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].first == keyed[i - 1].first) continue;
    out.push_back(keyed[i].second);
  }
  return out;
}

SetExpr canon(const SetExpr& e);

SetExpr canon_union(const UnionNode& u) {
  std::vector<SetExpr> flat;
  for (const auto& t : u.terms) {
    SetExpr c = canon(t);
    if (auto inner = std::get_if<UnionNode>(&c.node().v)) {
      flat.insert(flat.end(), inner->terms.begin(), inner->terms.end());
    } else {
      flat.push_back(c);
    }
  }
  std::set<u64> finite;
  std::optional<std::set<u64>> cofinite;
  std::map<u64, std::set<u64>> residues;
  std::vector<SetExpr> others;
  for (const auto& c : flat) {
    const auto& v = c.node().v;
    if (auto f = std::get_if<FiniteAtom>(&v)) {
      finite.insert(f->elements.begin(), f->elements.end());
    } else if (auto cf = std::get_if<CoFiniteAtom>(&v)) {
      std::set<u64> ex(cf->excluded.begin(), cf->excluded.end());
      if (!cofinite) {
        cofinite = ex;
      } else {
        std::set<u64> both;
        std::set_intersection(cofinite->begin(), cofinite->end(), ex.begin(), ex.end(),
                              std::inserter(both, both.begin()));
        cofinite = both;
      }
    } else if (auto r = std::get_if<ResidueAtom>(&v)) {
      residues[r->modulus].insert(r->residue);
    } else {
      others.push_back(c);
    }
  }
  bool everything = false;
  std::vector<SetExpr> merged = merge_residues(std::move(residues), everything);
  if (everything) return sets::all();
  if (!cofinite) {
    // merge ranges and finite elements into maximal intervals
    constexpr u64 kOpen = std::numeric_limits<u64>::max();
    std::vector<std::pair<u64, u64>> iv;
    std::vector<SetExpr> rest;
    for (const auto& o : others) {
      if (auto r = std::get_if<RangeAtom>(&o.node().v)) {
        iv.emplace_back(r->lo, r->hi.value_or(kOpen));
      } else {
        rest.push_back(o);
      }
    }
    if (!iv.empty()) {
      for (u64 n : finite) iv.emplace_back(n, n);
      finite.clear();
      std::sort(iv.begin(), iv.end());
      std::vector<std::pair<u64, u64>> joined;
      for (const auto& [lo, hi] : iv) {
        if (!joined.empty() && (joined.back().second == kOpen || joined.back().second + 1 >= lo)) {
          joined.back().second = std::max(joined.back().second, hi);
        } else {
          joined.emplace_back(lo, hi);
        }
      }
      for (const auto& [lo, hi] : joined) {
        if (lo == 1 && hi == kOpen) return sets::all();
        if (hi != kOpen && hi - lo < 64) {
          for (u64 n = lo; n <= hi; ++n) finite.insert(n);
        } else {
          rest.push_back(sets::range(lo, hi == kOpen ? std::nullopt : std::optional<u64>(hi)));
        }
      }
      others = std::move(rest);
    }
  }
  others.insert(others.end(), merged.begin(), merged.end());
  if (cofinite) {
    // drop exclusions covered by some other term
    std::vector<u64> excluded;
    for (u64 n : *cofinite) {
      if (finite.count(n)) continue;
      bool covered = false;
      for (const auto& o : others) {
        if (eval(o, n) == Tri::True) {
          covered = true;
          break;
        }
      }
      if (!covered) excluded.push_back(n);
    }
    if (excluded.empty()) return sets::all();
    others.push_back(sets::cofinite(excluded));
  } else if (!finite.empty()) {
    std::vector<u64> kept;
    for (u64 n : finite) {
      bool covered = false;
      for (const auto& o : others) {
        if (eval(o, n) == Tri::True) {
          covered = true;
          break;
        }
      }
      if (!covered) kept.push_back(n);
    }
    if (!kept.empty()) others.push_back(sets::finite(kept));
  }
  others = sorted_unique(std::move(others));
  if (others.empty()) return sets::none();
  if (others.size() == 1) return others.front();
  return make(UnionNode{std::move(others)});
}

SetExpr canon_intersection(const IntersectionNode& u) {
  std::vector<SetExpr> flat;
  for (const auto& t : u.terms) {
    SetExpr c = canon(t);
    if (auto inner = std::get_if<IntersectionNode>(&c.node().v)) {
      flat.insert(flat.end(), inner->terms.begin(), inner->terms.end());
    } else {
      flat.push_back(c);
    }
  }
  std::optional<std::set<u64>> finite;
  std::set<u64> excluded;
  std::map<u64, u64> residues;
  u64 lo = 1;
  std::optional<u64> hi;
  std::vector<SetExpr> others;
  for (const auto& c : flat) {
    const auto& v = c.node().v;
    if (auto f = std::get_if<FiniteAtom>(&v)) {
      std::set<u64> el(f->elements.begin(), f->elements.end());
      if (!finite) {
        finite = el;
      } else {
        std::set<u64> both;
        std::set_intersection(finite->begin(), finite->end(), el.begin(), el.end(),
                              std::inserter(both, both.begin()));
        finite = both;
      }
    } else if (auto cf = std::get_if<CoFiniteAtom>(&v)) {
      excluded.insert(cf->excluded.begin(), cf->excluded.end());
    } else if (auto r = std::get_if<ResidueAtom>(&v)) {
      auto [it, inserted] = residues.emplace(r->modulus, r->residue);
      if (!inserted && it->second != r->residue) return sets::none();
    } else if (auto rg = std::get_if<RangeAtom>(&v)) {
      lo = std::max(lo, rg->lo);
      if (rg->hi) hi = hi ? std::min(*hi, *rg->hi) : *rg->hi;
    } else {
      others.push_back(c);
    }
  }
  if (hi && *hi < lo) return sets::none();
  if (lo > 1 || hi) {
    const SetExpr r = canon(sets::range(lo, hi));
    if (auto f = std::get_if<FiniteAtom>(&r.node().v)) {
      std::set<u64> el(f->elements.begin(), f->elements.end());
      if (!finite) {
        finite = el;
      } else {
        std::set<u64> both;
        std::set_intersection(finite->begin(), finite->end(), el.begin(), el.end(),
                              std::inserter(both, both.begin()));
        finite = both;
      }
    } else {
      others.push_back(r);
    }
  }
  for (const auto& [q, r] : residues) {
    if (q > 1) others.push_back(sets::residue(q, r));
  }
  if (finite) {
    // a finite factor absorbs everything it can decide
    std::vector<u64> kept;
    std::vector<SetExpr> undecided;
    bool decided = true;
    for (u64 n : *finite) {
      if (excluded.count(n)) continue;
      Tri t = Tri::True;
      for (const auto& o : others) t = tri_and(t, eval(o, n));
      if (t == Tri::True) kept.push_back(n);
      if (t == Tri::Unknown) decided = false;
    }
    if (decided) return sets::finite(kept);
    std::vector<u64> cand;
    for (u64 n : *finite) {
      if (!excluded.count(n)) cand.push_back(n);
    }
    others.push_back(sets::finite(cand));
  } else if (!excluded.empty()) {
    others.push_back(sets::cofinite({excluded.begin(), excluded.end()}));
  }
  others = sorted_unique(std::move(others));
  if (others.empty()) return sets::all();
  if (others.size() == 1) return others.front();
  return make(IntersectionNode{std::move(others)});
}

SetExpr canon(const SetExpr& e) {
  return std::visit(
      overloaded{
          [&](const UnionNode& u) { return canon_union(u); },
          [&](const IntersectionNode& u) { return canon_intersection(u); },
          [&](const ComplementNode& c) {
            SetExpr inner = canon(c.inner);
            const auto& v = inner.node().v;
            if (auto cc = std::get_if<ComplementNode>(&v)) return cc->inner;
            if (auto f = std::get_if<FiniteAtom>(&v)) return sets::cofinite(f->elements);
            if (auto cf = std::get_if<CoFiniteAtom>(&v)) return sets::finite(cf->excluded);
            if (auto r = std::get_if<ResidueAtom>(&v); r && r->modulus == 2) {
              return sets::residue(2, 1 - r->residue);
            }
            return sets::complement(inner);
          },
          [&](const ResidueAtom& r) { return r.modulus == 1 ? sets::all() : e; },
          [&](const RangeAtom& r) {
            if (r.hi && *r.hi - r.lo < 64) {
              std::vector<u64> el;
              for (u64 n = r.lo; n <= *r.hi; ++n) el.push_back(n);
              return sets::finite(el);
            }
            if (!r.hi && r.lo == 1) return sets::all();
            return e;
          },
          [&](const auto&) { return e; },
      },
      e.node().v);
}

}  // namespace

// ---- constructors ------------------------------------------------------

namespace sets {

SetExpr finite(std::vector<u64> elements) {
  if (!positive_increasing(elements)) {
    throw DomainError("finite set elements must be positive and strictly increasing");
  }
  return make(FiniteAtom{std::move(elements)});
}

SetExpr cofinite(std::vector<u64> excluded) {
  if (!positive_increasing(excluded)) {
    throw DomainError("cofinite exclusions must be positive and strictly increasing");
  }
  return make(CoFiniteAtom{std::move(excluded)});
}

SetExpr residue(u64 modulus, u64 r) {
  if (modulus == 0) throw DomainError("residue modulus must be at least 1");
  if (r >= modulus) throw DomainError("residue must lie in [0, modulus)");
  return make(ResidueAtom{modulus, r});
}

SetExpr range(u64 lo, std::optional<u64> hi) {
  if (lo == 0) throw DomainError("range lower end must be at least 1");
  if (hi && *hi < lo) throw DomainError("range upper end below lower end");
  return make(RangeAtom{lo, hi});
}

SetExpr geometric(u64 base) {
  if (base < 2) throw DomainError("geometric base must be at least 2");
  return make(GeometricAtom{base});
}

SetExpr sampled(u64 horizon, std::vector<u64> members) {
  if (horizon == 0) throw DomainError("sampled horizon must be positive");
  if (!positive_increasing(members) || (!members.empty() && members.back() > horizon)) {
    throw DomainError("sampled members must be increasing and within the horizon");
  }
  return make(SampledAtom{horizon, std::move(members)});
}

SetExpr blocks(std::shared_ptr<const GreedyBlocks> data) {
  if (!data) throw DomainError("missing block data");
  return make(BlocksAtom{std::move(data)});
}

SetExpr all() { return make(CoFiniteAtom{}); }
SetExpr none() { return make(FiniteAtom{}); }

SetExpr unite(std::vector<SetExpr> terms) {
  if (terms.empty()) return none();
  if (terms.size() == 1) return terms.front();
  return make(UnionNode{std::move(terms)});
}

SetExpr intersect(std::vector<SetExpr> terms) {
  if (terms.empty()) return all();
  if (terms.size() == 1) return terms.front();
  return make(IntersectionNode{std::move(terms)});
}

SetExpr complement(SetExpr inner) { return make(ComplementNode{std::move(inner)}); }

}  // namespace sets

// ---- GreedyBlocks ------------------------------------------------------

void GreedyBlocks::index_runs() {
  sorted_runs.clear();
  for (const auto& b : blocks) sorted_runs.insert(sorted_runs.end(), b.runs.begin(), b.runs.end());
  std::sort(sorted_runs.begin(), sorted_runs.end());
}

Tri GreedyBlocks::contains(u64 n) const {
  if (n > scanned_to) return Tri::Unknown;
  auto it = std::upper_bound(sorted_runs.begin(), sorted_runs.end(),
                             std::make_pair(n, kSaturated));
  if (it == sorted_runs.begin()) return Tri::False;
  --it;
  return tri_of(n >= it->first && n <= it->second);
}

double GreedyBlocks::total_inverse_sum() const {
  double total = 0;
  for (const auto& b : blocks) total += b.inverse_sum;
  return total;
}

// ---- queries -----------------------------------------------------------

std::pair<u64, u64> perfect_power_root(u64 b) {
  for (u64 e = 63; e >= 2; --e) {
    const double guess = std::pow(static_cast<double>(b), 1.0 / static_cast<double>(e));
    const u64 g = static_cast<u64>(std::llround(guess));
    for (u64 r = (g > 2 ? g - 1 : 2); r <= g + 1; ++r) {
      if (sat_pow(r, e) == b) return {r, e};
    }
  }
  return {b, 1};
}

std::string to_string(DensityVerdict::Kind k) {
  switch (k) {
    case DensityVerdict::Kind::Exact: return "Exact";
    case DensityVerdict::Kind::Zero: return "Zero";
    case DensityVerdict::Kind::Bounds: return "Bounds";
    case DensityVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(SumVerdict::Kind k) {
  switch (k) {
    case SumVerdict::Kind::Diverges: return "Diverges";
    case SumVerdict::Kind::Converges: return "Converges";
    case SumVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

SetExpr canonicalize(const SetExpr& s) { return canon(s); }

Tri member(u64 n, const SetExpr& s) {
  if (n == 0) throw DomainError("indices start at 1");
  return eval(s, n);
}

std::vector<u64> enumerate_prefix(const SetExpr& s, u64 N) {
  std::vector<u64> out;
  for (u64 n = 1; n <= N; ++n) {
    Tri t = eval(s, n);
    if (t == Tri::Unknown) {
      throw HorizonExceeded("membership of " + std::to_string(n) + " is beyond a sampled horizon");
    }
    if (t == Tri::True) out.push_back(n);
  }
  return out;
}

DensityVerdict natural_density(const SetExpr& s) {
  DensityVerdict v;
  auto st = analyze(s);
  if (!st) {
    v.kind = DensityVerdict::Kind::Inconclusive;
    return v;
  }
  u64 definite = 0;
  u64 possible = 0;
  for (Tri t : st->classes) {
    if (t == Tri::True) ++definite;
    if (t != Tri::False) ++possible;
  }
  v.lower = Rational(definite, st->modulus);
  v.upper = Rational(possible, st->modulus);
  if (definite == possible) {
    v.kind = definite == 0 ? DensityVerdict::Kind::Zero : DensityVerdict::Kind::Exact;
    return v;
  }
  if (definite == 0 && possible == st->modulus) {
    v.kind = DensityVerdict::Kind::Inconclusive;
    v.horizon = st->threshold;
    if (v.horizon > 0 && v.horizon <= kEnumerationLimit) {
      u64 count = 0;
      for (u64 n = 1; n <= v.horizon; ++n) {
        if (eval(s, n) == Tri::True) ++count;
      }
      v.observed = static_cast<double>(count) / static_cast<double>(v.horizon);
    }
    return v;
  }
  v.kind = DensityVerdict::Kind::Bounds;
  return v;
}

SumVerdict weight_sum(const SetExpr& s, const ScalarSeq& w, const Settings& settings) {
  if (auto b = std::get_if<BlocksAtom>(&s.node().v)) {
    const GreedyBlocks& g = *b->data;
    if (g.certified_infinite && same_seq(w, g.weights)) {
      SumVerdict v;
      v.kind = SumVerdict::Kind::Diverges;
      v.rule = "greedy blocks: each block has weight at least 1";
      return v;
    }
    if (same_seq(w, seq_pow(g.sequence, -g.exponent))) {
      SumVerdict v;
      v.kind = SumVerdict::Kind::Converges;
      v.bound = 2.0;
      v.rule = "greedy blocks: block m contributes less than 2^(1-m)";
      return v;
    }
  }
  // zero weights are allowed, negative ones are not
  const FlatSeq flat = flatten(w);
  for (const auto& [n, value] : flat.values) {
    if (value.sign() < 0) return inconclusive_sum(s, w, settings, "negative weights");
  }
  for (const auto& t : flat.terms) {
    if (t.c.sign() < 0) return inconclusive_sum(s, w, settings, "negative weights");
  }
  double bound = 0;
  for (const auto& [n, value] : flat.values) {
    if (eval(s, n) != Tri::False) bound += std::max(0.0, value.value());
  }
  bool all_converge = true;
  std::string rules;
  for (const auto& t : flat.terms) {
    if (t.c.sign() == 0) continue;
    const SetExpr A = sets::intersect({s, t.domain});
    auto st = analyze(A);
    if (!st) return inconclusive_sum(s, w, settings, "modulus or period too large");
    const bool classes_definite = any_of_tri(st->classes, true);
    if (classes_definite && residue_rule_diverges(t.beta, t.gamma)) {
      SumVerdict v;
      v.kind = SumVerdict::Kind::Diverges;
      v.rule = "infinite union of residue classes with exponent at least -1";
      return v;
    }
    for (const auto& f : st->families) {
      if (any_of_tri(f.periodic, true) && geometric_rule_diverges(t.beta, t.gamma)) {
        SumVerdict v;
        v.kind = SumVerdict::Kind::Diverges;
        v.rule = "infinitely many powers of " + std::to_string(f.root) + " with non-decaying weight";
        return v;
      }
    }
    bool converges = true;
    if (any_of_tri(st->classes, false) && residue_rule_diverges(t.beta, t.gamma)) converges = false;
    for (const auto& f : st->families) {
      if (any_of_tri(f.periodic, false) && geometric_rule_diverges(t.beta, t.gamma)) converges = false;
    }
    if (!converges) {
      all_converge = false;
      continue;
    }
    auto b = term_bound(*st, A, t, settings);
    if (!b) {
      all_converge = false;
      continue;
    }
    bound += *b;
  }
  if (!all_converge) return inconclusive_sum(s, w, settings, "undecided by the exponent rules");
  SumVerdict v;
  v.kind = SumVerdict::Kind::Converges;
  v.bound = bound * (1 + 1e-9) + 1e-300;
  v.rule = "explicit sum below the cutoff plus integral-test tail";
  return v;
}

Tri is_infinite(const SetExpr& s) {
  if (auto b = std::get_if<BlocksAtom>(&s.node().v); b && b->data->certified_infinite) return Tri::True;
  auto st = analyze(s);
  if (!st) return Tri::Unknown;
  if (structure_nonempty(*st, true)) return Tri::True;
  if (!structure_nonempty(*st, false)) return Tri::False;
  return Tri::Unknown;
}

Tri is_empty(const SetExpr& s) {
  auto st = analyze(s);
  if (!st) return Tri::Unknown;
  if (structure_nonempty(*st, true)) return Tri::False;
  const u64 limit = std::min<u64>(st->threshold, kEnumerationLimit);
  bool unknown = structure_nonempty(*st, false) || st->threshold > kEnumerationLimit;
  for (u64 n = 1; n <= limit; ++n) {
    Tri t = eval(s, n);
    if (t == Tri::True) return Tri::False;
    if (t == Tri::Unknown) unknown = true;
  }
  for (const auto& f : st->families) {
    for (Tri t : f.pre) {
      if (t == Tri::True) return Tri::False;
      if (t == Tri::Unknown) unknown = true;
    }
  }
  return unknown ? Tri::Unknown : Tri::True;
}

}  // namespace fbasis
