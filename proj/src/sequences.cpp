#include "fbasis/sequences.hpp"

#include "fbasis/errors.hpp"
#include "fbasis/syntax.hpp"

#include <cmath>

namespace fbasis {

namespace {

template <class Node>
ScalarSeq make(Node node) {
  return ScalarSeq(std::make_shared<const SeqNode>(SeqNode{std::move(node)}));
}

bool is_all(const SetExpr& s) {
  auto cf = std::get_if<CoFiniteAtom>(&s.node().v);
  return cf && cf->excluded.empty();
}

SetExpr restrict_to(const SetExpr& domain, const SetExpr& s) {
  if (is_all(domain)) return s;
  return sets::intersect({domain, s});
}

void flatten_into(const ScalarSeq& a, const SetExpr& domain, FlatSeq& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerLogSeq>) {
          out.terms.push_back({domain, node.c, node.beta, node.gamma});
        } else if constexpr (std::is_same_v<T, ConstantSeq>) {
          out.terms.push_back({domain, node.c, Rational(0), Rational(0)});
        } else if constexpr (std::is_same_v<T, PrefixSeq>) {
          for (std::size_t i = 0; i < node.values.size(); ++i) {
            const std::uint64_t n = i + 1;
            Tri t = member(n, domain);
            if (t == Tri::Unknown) throw DomainError("sequence piece has undecidable membership");
            if (t == Tri::True) out.values.emplace_back(n, node.values[i]);
          }
          flatten_into(node.tail, restrict_to(domain, sets::range(node.values.size() + 1, std::nullopt)),
                       out);
        } else {
          for (const auto& [set, seq] : node.pieces) flatten_into(seq, restrict_to(domain, set), out);
        }
      },
      a.node().v);
}

bool grows(const SeqTerm& t) { return t.beta > 0 || (t.beta == 0 && t.gamma > 0); }
bool decays(const SeqTerm& t) { return t.beta < 0 || (t.beta == 0 && t.gamma < 0); }

Tri tri_all(std::initializer_list<Tri> ts) {
  Tri out = Tri::True;
  for (Tri t : ts) {
    if (t == Tri::False) return Tri::False;
    if (t == Tri::Unknown) out = Tri::Unknown;
  }
  return out;
}

// Folds per-term checks: a term that matters and fails gives False.
template <class Pred>
Tri over_terms(const FlatSeq& flat, Pred bad_if_infinite) {
  Tri out = Tri::True;
  for (const auto& t : flat.terms) {
    if (!bad_if_infinite(t)) continue;
    Tri inf = is_infinite(t.domain);
    if (inf == Tri::True) return Tri::False;
    if (inf == Tri::Unknown) out = Tri::Unknown;
  }
  return out;
}

}  // namespace

namespace seqs {

ScalarSeq powlog(Scalar c, Rational beta, Rational gamma) {
  const double bd = to_double(beta);
  const double gd = to_double(gamma);
  return make(PowerLogSeq{std::move(c), std::move(beta), std::move(gamma), bd, gd});
}

ScalarSeq power(Scalar c, Rational beta) { return powlog(std::move(c), std::move(beta), Rational(0)); }

ScalarSeq constant(Scalar c) { return make(ConstantSeq{std::move(c)}); }

ScalarSeq prefix(std::vector<Scalar> values, ScalarSeq tail) {
  for (const auto& v : values) {
    if (!std::isfinite(v.value())) throw DomainError("prefix values must be finite");
  }
  return make(PrefixSeq{std::move(values), std::move(tail)});
}

ScalarSeq piecewise(std::vector<std::pair<SetExpr, ScalarSeq>> pieces) {
  if (pieces.empty()) throw DomainError("piecewise sequence needs at least one piece");
  std::vector<SetExpr> sets_only;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (is_empty(sets::intersect({pieces[i].first, pieces[j].first})) != Tri::True) {
        throw DomainError("piecewise pieces " + std::to_string(i + 1) + " and " +
                          std::to_string(j + 1) + " are not provably disjoint");
      }
    }
    sets_only.push_back(pieces[i].first);
  }
  if (is_empty(sets::complement(sets::unite(sets_only))) != Tri::True) {
    throw DomainError("piecewise pieces do not provably cover every index");
  }
  return make(PiecewiseSeq{std::move(pieces)});
}

}  // namespace seqs

FlatSeq flatten(const ScalarSeq& a) {
  FlatSeq out;
  flatten_into(a, sets::all(), out);
  return out;
}

Scalar eval_at(const ScalarSeq& a, std::uint64_t n) {
  if (n == 0) throw DomainError("indices start at 1");
  return std::visit(
      [&](const auto& node) -> Scalar {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerLogSeq>) {
          Scalar out = node.c * Scalar::exact(Rational(n)).pow(node.beta);
          if (node.gamma != 0) {
            out = out * Scalar::approx(std::pow(std::log1p(static_cast<double>(n)), to_double(node.gamma)));
          }
          return out;
        } else if constexpr (std::is_same_v<T, ConstantSeq>) {
          return node.c;
        } else if constexpr (std::is_same_v<T, PrefixSeq>) {
          if (n <= node.values.size()) return node.values[n - 1];
          return eval_at(node.tail, n);
        } else {
          for (const auto& [set, seq] : node.pieces) {
            if (member(n, set) == Tri::True) return eval_at(seq, n);
          }
          throw DomainError("no piece owns index " + std::to_string(n));
        }
      },
      a.node().v);
}

namespace {

double powlog_value(double c, double beta, double gamma, std::uint64_t n) {
  const double x = static_cast<double>(n);
  double v = c;
  if (beta != 0) v *= std::pow(x, beta);
  if (gamma != 0) v *= std::pow(std::log1p(x), gamma);
  return v;
}

}  // namespace

double eval_term(const SeqTerm& t, std::uint64_t n) { return powlog_value(t.c.value(), to_double(t.beta), to_double(t.gamma), n); }

double eval_double(const ScalarSeq& a, std::uint64_t n) {
  return std::visit(
      [&](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerLogSeq>) {
          return powlog_value(node.c.value(), node.beta_d, node.gamma_d, n);
        } else if constexpr (std::is_same_v<T, ConstantSeq>) {
          return node.c.value();
        } else if constexpr (std::is_same_v<T, PrefixSeq>) {
          if (n <= node.values.size()) return node.values[n - 1].value();
          return eval_double(node.tail, n);
        } else {
          for (const auto& [set, seq] : node.pieces) {
            if (member(n, set) == Tri::True) return eval_double(seq, n);
          }
          throw DomainError("no piece owns index " + std::to_string(n));
        }
      },
      a.node().v);
}

ScalarSeq seq_pow(const ScalarSeq& a, const Rational& e) {
  return std::visit(
      [&](const auto& node) -> ScalarSeq {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerLogSeq>) {
          if (e == 0 || (node.beta == 0 && node.gamma == 0)) return seqs::constant(node.c.pow(e));
          return seqs::powlog(node.c.pow(e), node.beta * e, node.gamma * e);
        } else if constexpr (std::is_same_v<T, ConstantSeq>) {
          return seqs::constant(node.c.pow(e));
        } else if constexpr (std::is_same_v<T, PrefixSeq>) {
          std::vector<Scalar> values;
          for (const auto& v : node.values) values.push_back(v.pow(e));
          return seqs::prefix(std::move(values), seq_pow(node.tail, e));
        } else {
          std::vector<std::pair<SetExpr, ScalarSeq>> pieces;
          for (const auto& [set, seq] : node.pieces) pieces.emplace_back(set, seq_pow(seq, e));
          return make(PiecewiseSeq{std::move(pieces)});
        }
      },
      a.node().v);
}

ScalarSeq seq_scale(const ScalarSeq& a, const Scalar& k) {
  return seq_mul(a, seqs::constant(k));
}

ScalarSeq seq_mul(const ScalarSeq& a, const ScalarSeq& b) {
  if (auto p = std::get_if<PrefixSeq>(&a.node().v)) {
    std::vector<Scalar> values;
    for (std::size_t i = 0; i < p->values.size(); ++i) values.push_back(p->values[i] * eval_at(b, i + 1));
    return seqs::prefix(std::move(values), seq_mul(p->tail, b));
  }
  if (std::holds_alternative<PrefixSeq>(b.node().v)) return seq_mul(b, a);
  if (auto pw = std::get_if<PiecewiseSeq>(&a.node().v)) {
    std::vector<std::pair<SetExpr, ScalarSeq>> pieces;
    for (const auto& [set, seq] : pw->pieces) pieces.emplace_back(set, seq_mul(seq, b));
    return make(PiecewiseSeq{std::move(pieces)});
  }
  if (std::holds_alternative<PiecewiseSeq>(b.node().v)) return seq_mul(b, a);
  auto params = [](const ScalarSeq& s) {
    if (auto c = std::get_if<ConstantSeq>(&s.node().v)) return PowerLogSeq{c->c, 0, 0};
    return std::get<PowerLogSeq>(s.node().v);
  };
  const PowerLogSeq x = params(a);
  const PowerLogSeq y = params(b);
  const Rational beta = x.beta + y.beta;
  const Rational gamma = x.gamma + y.gamma;
  if (beta == 0 && gamma == 0) return seqs::constant(x.c * y.c);
  return seqs::powlog(x.c * y.c, beta, gamma);
}

bool same_seq(const ScalarSeq& a, const ScalarSeq& b) { return to_text(a) == to_text(b); }

Tri is_positive(const ScalarSeq& a) {
  const FlatSeq flat = flatten(a);
  for (const auto& [n, v] : flat.values) {
    if (v.sign() <= 0) return Tri::False;
  }
  Tri out = Tri::True;
  for (const auto& t : flat.terms) {
    if (t.c.sign() > 0) continue;
    Tri empty = is_empty(t.domain);
    if (empty == Tri::False) return Tri::False;
    if (empty == Tri::Unknown) out = Tri::Unknown;
  }
  return out;
}

Tri is_bounded(const ScalarSeq& a) {
  return over_terms(flatten(a), [](const SeqTerm& t) { return t.c.sign() != 0 && grows(t); });
}

Tri is_bounded_below(const ScalarSeq& a) {
  const FlatSeq flat = flatten(a);
  for (const auto& [n, v] : flat.values) {
    if (v.sign() <= 0) return Tri::False;
  }
  Tri nonpositive = Tri::True;
  for (const auto& t : flat.terms) {
    if (t.c.sign() > 0) continue;
    Tri empty = is_empty(t.domain);
    if (empty == Tri::False) return Tri::False;
    if (empty == Tri::Unknown) nonpositive = Tri::Unknown;
  }
  return tri_all({nonpositive, over_terms(flat, [](const SeqTerm& t) { return decays(t); })});
}

Tri tends_to_zero(const ScalarSeq& a) {
  return over_terms(flatten(a), [](const SeqTerm& t) { return t.c.sign() != 0 && !decays(t); });
}

Tri eventually_nondecreasing(const ScalarSeq& a) {
  const FlatSeq flat = flatten(a);
  const SeqTerm* owner = nullptr;
  for (const auto& t : flat.terms) {
    Tri inf = is_infinite(t.domain);
    if (inf == Tri::False) continue;
    if (inf == Tri::Unknown || owner != nullptr) return Tri::Unknown;
    owner = &t;
  }
  if (owner == nullptr) return Tri::True;
  if (is_infinite(sets::complement(owner->domain)) != Tri::False) return Tri::Unknown;
  const SeqTerm& t = *owner;
  if (t.c.sign() == 0) return Tri::True;
  const bool up = t.beta > 0 || (t.beta == 0 && t.gamma >= 0);
  const bool down = t.beta < 0 || (t.beta == 0 && t.gamma <= 0);
  return (t.c.sign() > 0 ? up : down) ? Tri::True : Tri::False;
}

SumVerdict sum_inverse_p_verdict(const ScalarSeq& a, const Rational& p, const SetExpr& I,
                                 const Settings& settings) {
  if (p < 1) throw DomainError("exponent p must be at least 1");
  if (is_positive(a) == Tri::False) throw DomainError("sequence has nonpositive values");
  return weight_sum(I, seq_pow(a, -p), settings);
}

}  // namespace fbasis
