#include "fbasis/basis_builder.hpp"

#include "fbasis/errors.hpp"
#include "fbasis/syntax.hpp"

#include <cmath>

namespace fbasis {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on `sep` at bracket depth 0.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '(' || ch == '[' || ch == '{') ++depth;
    if (ch == ')' || ch == ']' || ch == '}') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::string_view strip_call(std::string_view s, std::string_view head, char close) {
  if (s.size() < head.size() + 1 || s.substr(0, head.size()) != head || s.back() != close) {
    throw ParseError("malformed vector", 0, {std::string(head)});
  }
  return s.substr(head.size(), s.size() - head.size() - 1);
}

bool exact_pair(const Scalar& a, const Scalar& b) { return a.is_exact() && b.is_exact(); }

double tolerance(const SpaceKind& space, double scale, const Settings& settings) {
  return (space.is_l1() || space.is_l2() ? 1e-12 : settings.numeric_tolerance) * std::max(1.0, scale);
}

// Relative slack applied to lower bounds that went through binary64.
Scalar shave(const Scalar& s) { return s.is_exact() ? s : Scalar::approx(s.value() * (1 - 1e-12)); }

}  // namespace

Scalar TestVector::at(std::uint64_t n) const {
  if (n == 0) throw DomainError("indices start at 1");
  switch (kind) {
    case Kind::Finite:
      return n <= coords.size() ? coords[n - 1] : Scalar::exact(0);
    case Kind::Sequence:
      return eval_at(*seq, n);
    case Kind::Spike: {
      if (n < 2) return Scalar::exact(0);
      const Tri in = member(n - 1, *spikes);
      if (in == Tri::Unknown) throw HorizonExceeded("spike support undecided at " + std::to_string(n - 1));
      return in == Tri::True ? eval_at(*seq, n - 1) : Scalar::exact(0);
    }
  }
  return Scalar::exact(0);
}

double TestVector::at_double(std::uint64_t n) const {
  if (kind == Kind::Sequence) return eval_double(*seq, n);
  return at(n).value();
}

std::string TestVector::text() const {
  switch (kind) {
    case Kind::Finite: {
      std::string out = "coords[";
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ", ";
        out += coords[i].to_string();
      }
      return out + "]";
    }
    case Kind::Sequence:
      return to_text(*seq);
    case Kind::Spike:
      return "spike(" + to_text(*spikes) + "; " + to_text(*seq) + ")";
  }
  return "";
}

TestVector parse_test_vector(std::string_view text) {
  const std::string_view s = trim(text);
  TestVector x;
  if (s.starts_with("unit(")) {
    const std::string_view inner = trim(strip_call(s, "unit(", ')'));
    const Scalar k = parse_number(inner);
    if (!k.is_rational() || denominator(*k.rational()) != 1 || k.sign() <= 0) {
      throw ParseError("unit index must be a positive integer", 5, {"integer"});
    }
    const auto idx = static_cast<std::size_t>(numerator(*k.rational()));
    x.coords.assign(idx, Scalar::exact(0));
    x.coords.back() = Scalar::exact(1);
    return x;
  }
  if (s.starts_with("coords[")) {
    const std::string_view inner = trim(strip_call(s, "coords[", ']'));
    if (!inner.empty()) {
      for (auto part : split_top(inner, ',')) x.coords.push_back(parse_number(trim(part)));
    }
    return x;
  }
  if (s.starts_with("spike(")) {
    const auto parts = split_top(strip_call(s, "spike(", ')'), ';');
    if (parts.size() != 2) throw ParseError("spike takes a set and a sequence", 6, {"SET; SEQ"});
    x.kind = TestVector::Kind::Spike;
    x.spikes = parse_set_expr(trim(parts[0]));
    x.seq = parse_seq(trim(parts[1]));
    return x;
  }
  x.kind = TestVector::Kind::Sequence;
  x.seq = parse_seq(s);
  return x;
}

BasisSystem build_basis(const ScalarSeq& a, const SpaceKind& space, const FilterSpec& F,
                        std::size_t n_max, const Settings& settings) {
  if (n_max == 0) throw DomainError("n_max must be at least 1");
  BasisSystem sys{.space = space, .target = a, .filter = F, .coefficients = {}, .stages = {},
                  .norms = {}, .defect_coeffs = {}, .gate_p = space.p > 2 ? Rational(2) : space.p,
                  .gate = {}, .caveats = {}, .failures = {}};
  sys.gate = check_admissible(a, F, sys.gate_p, settings);
  if (sys.gate.kind == AdmissVerdict::Kind::Refuted) {
    throw NotAdmissible("target is not admissible (" + sys.gate.criterion + ")",
                        sys.gate.witness ? to_text(*sys.gate.witness) : "");
  }
  if (sys.gate.kind == AdmissVerdict::Kind::Inconclusive) {
    sys.caveats.push_back(
        "admissibility of the target is undecided; the F-basis property of this system is not certified");
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (compare(eval_at(a, n), Scalar::exact(1)) <= 0) {
      throw DomainError("target a_n must exceed 1 (fails at n = " + std::to_string(n) + ")");
    }
  }
  if (space.p > 2) sys.caveats.push_back("admissibility gate evaluated at p = 2");
  sys.caveats.push_back("vector-level checks are certified on the first n_max coordinates only");

  sys.coefficients.push_back(Scalar::exact(1));
  for (std::size_t n = 1; n < n_max; ++n) {
    const Scalar an = eval_at(a, n);
    sys.coefficients.push_back(solve_b_next(sys.coefficients, an, space));
    TailOp T(n, sys.coefficients, space);
    NormReport norm = op_norm(T);
    const std::string at = " at stage " + std::to_string(n);
    if (exact_pair(norm.value, an)) {
      if (compare(norm.value, an) != 0) sys.failures.push_back("norm differs from a_n" + at);
    } else if (std::fabs(norm.value.value() - an.value()) > tolerance(space, an.value(), settings)) {
      sys.failures.push_back("norm differs from a_n" + at);
    }
    const std::vector<Scalar> head(sys.coefficients.begin(), sys.coefficients.begin() + n);
    const Scalar c = lp_norm_exact(head, space.p) / sys.coefficients[n];
    if (std::fabs(c.value() - an.value()) > 1 + 1e-12 * std::max(1.0, an.value())) {
      sys.failures.push_back("|c_n - a_n| exceeds 1" + at);
    }
    if (c.value() <= 0 || sys.coefficients[n].sign() <= 0) sys.failures.push_back("nonpositive coefficient" + at);
    sys.stages.push_back(std::move(T));
    sys.norms.push_back(std::move(norm));
    sys.defect_coeffs.push_back(c);
  }
  return sys;
}

BiorthogonalityReport verify_biorthogonality(const BasisSystem& sys) {
  BiorthogonalityReport r;
  const auto& b = sys.coefficients;
  const std::size_t N = b.size();
  const Scalar zero = Scalar::exact(0);
  for (std::size_t m = 1; m < N; ++m) {
    std::vector<Scalar> row;
    for (std::size_t n = 1; n <= N; ++n) {
      // e*_m(v_n) = b_m when m <= n
      const Scalar first = m <= n ? b[m - 1] / b[m - 1] : zero;
      const Scalar second = m + 1 <= n ? b[m] / b[m] : zero;
      const Scalar val = first - second;
      const double expected = m == n ? 1.0 : 0.0;
      if (val.is_rational()) {
        if (*val.rational() != Rational(m == n ? 1 : 0)) r.ok = false;
      } else {
        r.exact = false;
        const double err = std::fabs(val.value() - expected);
        r.max_error = std::max(r.max_error, err);
        if (err > 1e-12) r.ok = false;
      }
      row.push_back(val);
    }
    r.gram.push_back(std::move(row));
  }
  return r;
}

DefectReport defect_report(const BasisSystem& sys, const Settings& settings) {
  DefectReport r{.c = sys.defect_coeffs, .gap = {}, .bound_ok = true, .equals_target = true,
                 .majorant = sys.target, .family_verdict = LimitVerdict::Kind::Inconclusive};
  for (std::size_t i = 0; i < sys.defect_coeffs.size(); ++i) {
    const Scalar an = eval_at(sys.target, i + 1);
    const Scalar& c = sys.defect_coeffs[i];
    const double gap = std::fabs(c.value() - an.value());
    r.gap.push_back(gap);
    if (exact_pair(c, an)) {
      // |c - a| <= 1 decided exactly through a - 1 <= c <= a + 1 on squares
      if (compare(c, an + Scalar::exact(1)) > 0 || compare(c + Scalar::exact(1), an) < 0) r.bound_ok = false;
      if (compare(c, an) != 0) r.equals_target = false;
    } else {
      if (gap > 1 + 1e-12 * std::max(1.0, an.value())) r.bound_ok = false;
      r.equals_target = false;
    }
  }
  TestVector family;
  family.kind = TestVector::Kind::Sequence;
  family.seq = seqs::power(Scalar::exact(1), Rational(-2));
  r.family_verdict = convergence_demo(sys, family, default_eps_schedule(), settings).verdicts.front().verdict;
  return r;
}

ConvergenceReport convergence_demo(const BasisSystem& sys, const TestVector& x,
                                   const std::vector<Rational>& schedule, const Settings& settings) {
  ConvergenceReport r;
  r.vector = x.text();
  const Rational& p = sys.space.p;
  const bool l1 = sys.space.is_l1();

  if (x.kind == TestVector::Kind::Finite) {
    if (x.coords.size() > sys.coefficients.size()) {
      throw DimensionMismatch("finitely supported vector is longer than the built system");
    }
  } else {
    if (is_positive(*x.seq) != Tri::True) throw DomainError("test vector sequences must be positive");
    const SetExpr support = x.kind == TestVector::Kind::Spike ? *x.spikes : sets::all();
    const SumVerdict in_space = weight_sum(support, seq_pow(*x.seq, p), settings);
    if (in_space.kind == SumVerdict::Kind::Diverges) throw DomainError("test vector is not in " + sys.space.name());
    if (in_space.kind == SumVerdict::Kind::Inconclusive) {
      r.caveats.push_back("membership of the test vector in " + sys.space.name() + " is undecided");
    }
  }

  for (std::size_t i = 0; i < sys.defect_coeffs.size(); ++i) {
    r.defects.push_back(x.at(i + 2).abs() * sys.defect_coeffs[i]);
  }

  // Symbolic majorant U >= d_n and, in l1, minorant L <= d_n, both as the
  // exceptional-set generators; c_n <= a_n holds in every space and c_n = a_n in l1.
  std::optional<ScalarSeq> upper;
  std::optional<ScalarSeq> lower;
  std::optional<SetExpr> restrict_to;
  if (x.kind == TestVector::Kind::Sequence) {
    const FlatSeq flat = flatten(*x.seq);
    const bool single = flat.values.empty() && flat.terms.size() == 1 &&
                        is_empty(!flat.terms[0].domain) == Tri::True;
    if (single && flat.terms[0].beta <= 0 && flat.terms[0].gamma <= 0) {
      // x_{n+1} <= x_n, and x_{n+1} >= 2^{beta+gamma} x_n since n+1 <= 2n, ln(n+2) <= 2 ln(n+1)
      upper = seq_mul(*x.seq, sys.target);
      if (l1) lower = seq_scale(*upper, shave(Scalar::exact(2).pow(flat.terms[0].beta + flat.terms[0].gamma)));
    } else {
      r.caveats.push_back("no symbolic shift bound for this test vector");
    }
  } else if (x.kind == TestVector::Kind::Spike) {
    upper = seq_mul(*x.seq, sys.target);
    restrict_to = *x.spikes;
    if (l1) {
      lower = upper;
      r.exact_sets = true;
    }
  } else {
    r.exact_sets = true;
  }
  if (!l1 && x.kind != TestVector::Kind::Finite) {
    r.caveats.push_back("outside l1 only the majorant c_n <= a_n is used; non-convergence is not certified");
  }

  std::vector<FilterSpec> filters{sys.filter};
  if (!same_filter(sys.filter, filters::frechet())) filters.push_back(filters::frechet());
  for (const auto& G : filters) {
    FilterConvergence fc;
    fc.filter = to_text(G);
    bool all_negligible = true;
    for (const Rational& eps : schedule) {
      if (x.kind == TestVector::Kind::Finite) {
        std::vector<std::uint64_t> members;
        for (std::size_t i = 0; i < r.defects.size(); ++i) {
          if (compare(r.defects[i], Scalar::exact(eps)) > 0) members.push_back(i + 1);
        }
        const SetExpr E = sets::finite(members);
        fc.steps.push_back({eps, E, classify_set(E, G, settings)});
        continue;
      }
      if (!upper) {
        all_negligible = false;
        break;
      }
      SetExpr E = exceedance_set(*upper, Scalar::exact(0), eps, settings);
      if (restrict_to) E = canonicalize(*restrict_to & E);
      const SetClass cls = classify_set(E, G, settings);
      if (cls == SetClass::Negligible) {
        fc.steps.push_back({eps, E, cls});
        continue;
      }
      all_negligible = false;
      if (lower) {
        SetExpr L = exceedance_set(*lower, Scalar::exact(0), eps, settings);
        if (restrict_to) L = canonicalize(*restrict_to & L);
        const SetClass low = classify_set(L, G, settings);
        if (low == SetClass::Stationary || low == SetClass::Member) {
          fc.steps.push_back({eps, L, low});
          fc.verdict = LimitVerdict::Kind::DoesNotConverge;
          fc.failing_eps = eps;
          break;
        }
      }
      fc.steps.push_back({eps, E, cls});
    }
    if (fc.verdict != LimitVerdict::Kind::DoesNotConverge) {
      const bool finite_ok = x.kind != TestVector::Kind::Finite ||
                             std::all_of(fc.steps.begin(), fc.steps.end(), [](const auto& s) {
                               return s.verdict == SetClass::Negligible;
                             });
      fc.verdict = all_negligible && finite_ok ? LimitVerdict::Kind::ConvergesTo : LimitVerdict::Kind::Inconclusive;
    }
    r.verdicts.push_back(std::move(fc));
  }
  return r;
}

}  // namespace fbasis
