#include "fbasis/syntax.hpp"

#include "fbasis/admissibility.hpp"
#include "fbasis/errors.hpp"

#include <cctype>
#include <limits>

namespace fbasis {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Settings& settings) : text_(text), settings_(settings) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (static_cast<unsigned char>(text[i]) >= 0x80) fail(i, "non-ASCII character", {});
    }
  }

  SetExpr set() {
    std::vector<SetExpr> terms{intersection()};
    while (accept('|')) terms.push_back(intersection());
    return terms.size() == 1 ? terms.front() : sets::unite(std::move(terms));
  }

  ScalarSeq seq() {
    skip_ws();
    const std::size_t at = pos_;
    if (peek_is('[')) fail(pos_, "unexpected '['", {"pow", "powlog", "const", "prefix", "piece"});
    const std::string word = ident();
    try {
      if (word == "pow") {
        expect('(');
        Scalar c = number();
        expect(',');
        Rational beta = rational();
        expect(')');
        return seqs::power(c, beta);
      }
      if (word == "powlog") {
        expect('(');
        Scalar c = number();
        expect(',');
        Rational beta = rational();
        expect(',');
        Rational gamma = rational();
        expect(')');
        return seqs::powlog(c, beta, gamma);
      }
      if (word == "const") {
        expect('(');
        Scalar c = number();
        expect(')');
        return seqs::constant(c);
      }
      if (word == "prefix") {
        expect('[');
        std::vector<Scalar> values;
        if (!accept(']')) {
          values.push_back(number());
          while (accept(',')) values.push_back(number());
          expect(']');
        }
        expect(':');
        ScalarSeq tail = seq();
        return seqs::prefix(std::move(values), tail);
      }
      if (word == "piece") {
        expect('{');
        std::vector<std::pair<SetExpr, ScalarSeq>> pieces;
        do {
          SetExpr s = set();
          expect("=>");
          pieces.emplace_back(s, seq());
        } while (accept(';'));
        expect('}');
        return seqs::piecewise(std::move(pieces));
      }
    } catch (const DomainError& e) {
      fail(at, e.what(), {});
    }
    fail(at, word.empty() ? "expected a sequence" : "unknown sequence '" + word + "'",
         {"pow", "powlog", "const", "prefix", "piece"});
  }

  FilterSpec filter() {
    skip_ws();
    const std::size_t at = pos_;
    const std::string word = ident();
    if (word == "frechet") return filters::frechet();
    if (word == "statistical") return filters::statistical();
    try {
      if (word == "summable") {
        expect('(');
        ScalarSeq s = seq();
        expect(')');
        return filters::summable(s, settings_);
      }
      if (word == "trace") {
        expect('(');
        FilterSpec base = filter();
        expect(';');
        SetExpr I = set();
        expect(')');
        return trace_filter(base, I, settings_);
      }
    } catch (const DomainError& e) {
      fail(at, e.what(), {});
    } catch (const NotStationary& e) {
      fail(at, e.what(), {});
    }
    fail(at, word.empty() ? "expected a filter" : "unknown filter '" + word + "'",
         {"frechet", "statistical", "summable", "trace"});
  }

  Scalar number() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) return -number();
    if (starts_with("sqrt")) {
      pos_ += 4;
      expect('(');
      Scalar inner = number();
      expect(')');
      if (!inner.rational() || *inner.rational() < 0) fail(at, "sqrt needs a nonnegative rational", {});
      return Scalar::from_square(*inner.rational());
    }
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
    };
    auto exponent = [&] {
      if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
        if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
          end = e;
          while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        }
      }
    };
    digits();
    if (end == pos_) fail(pos_, "expected a number", {"number", "sqrt(", "-"});
    exponent();
    if (end < text_.size() && text_[end] == '/') {
      const std::size_t den = end + 1;
      end = den;
      digits();
      if (end == den) fail(end, "expected a denominator", {"number"});
      exponent();
    }
    const std::string_view lit = text_.substr(pos_, end - pos_);
    try {
      Rational r = parse_rational(lit);
      pos_ = end;
      return Scalar::exact(r);
    } catch (const DomainError& e) {
      fail(at, e.what(), {"number"});
    }
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail(pos_, "unexpected trailing input", {"end of input"});
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& message, std::vector<std::string> expected) {
    throw ParseError(message, at, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool starts_with(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(char c) {
    if (!peek_is(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(pos_, "unexpected input", {std::string("'") + c + "'"});
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail(pos_, "unexpected input", {"'" + std::string(s) + "'"});
    pos_ += s.size();
  }

  std::string ident() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() && std::islower(static_cast<unsigned char>(text_[end]))) ++end;
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end;
    return out;
  }

  std::uint64_t integer() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end == pos_) fail(pos_, "expected an integer", {"integer"});
    std::uint64_t v = 0;
    for (std::size_t i = pos_; i < end; ++i) {
      const std::uint64_t d = static_cast<std::uint64_t>(text_[i] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) fail(pos_, "integer too large", {});
      v = v * 10 + d;
    }
    pos_ = end;
    return v;
  }

  Rational rational() {
    const std::size_t at = pos_;
    Scalar s = number();
    if (!s.rational()) fail(at, "exponent must be rational", {"number"});
    return *s.rational();
  }

  std::vector<std::uint64_t> int_list(char close) {
    std::vector<std::uint64_t> out;
    if (accept(close)) return out;
    out.push_back(integer());
    while (accept(',')) out.push_back(integer());
    expect(close);
    return out;
  }

  SetExpr intersection() {
    std::vector<SetExpr> terms{factor()};
    while (accept('&')) terms.push_back(factor());
    return terms.size() == 1 ? terms.front() : sets::intersect(std::move(terms));
  }

  SetExpr factor() {
    if (accept('!')) return sets::complement(factor());
    if (accept('(')) {
      SetExpr inner = set();
      expect(')');
      return inner;
    }
    return atom();
  }

  SetExpr atom() {
    skip_ws();
    const std::size_t at = pos_;
    const std::string word = ident();
    try {
      if (word == "finite" || word == "cofinite") {
        expect('{');
        auto list = int_list('}');
        return word == "finite" ? sets::finite(std::move(list)) : sets::cofinite(std::move(list));
      }
      if (word == "residue") {
        expect('(');
        const std::uint64_t q = integer();
        expect(',');
        const std::uint64_t r = integer();
        expect(')');
        return sets::residue(q, r);
      }
      if (word == "range") {
        expect('(');
        const std::uint64_t lo = integer();
        expect(',');
        std::optional<std::uint64_t> hi;
        if (!accept(')')) {
          hi = integer();
          expect(')');
        }
        return sets::range(lo, hi);
      }
      if (word == "geom") {
        expect('(');
        const std::uint64_t b = integer();
        expect(')');
        return sets::geometric(b);
      }
      if (word == "sampled") {
        expect('(');
        const std::uint64_t horizon = integer();
        expect(')');
        expect('{');
        return sets::sampled(horizon, int_list('}'));
      }
      if (word == "blocks") {
        expect('(');
        ScalarSeq a = seq();
        expect(';');
        ScalarSeq s = seq();
        expect(';');
        Rational p = rational();
        expect(';');
        const std::uint64_t horizon = integer();
        expect(')');
        return sets::blocks(greedy_blocks(a, s, p, horizon));
      }
    } catch (const DomainError& e) {
      fail(at, e.what(), {});
    }
    fail(at, word.empty() ? "expected a set" : "unknown set atom '" + word + "'",
         {"finite", "cofinite", "residue", "range", "geom", "sampled", "blocks", "(", "!"});
  }

  std::string_view text_;
  const Settings& settings_;
  std::size_t pos_ = 0;
};

std::string join(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

// 0: union context, 1: intersection operand, 2: complement operand
std::string print_set(const SetExpr& e, int ctx) {
  return std::visit(
      [&](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FiniteAtom>) {
          return "finite{" + join(node.elements) + "}";
        } else if constexpr (std::is_same_v<T, CoFiniteAtom>) {
          return "cofinite{" + join(node.excluded) + "}";
        } else if constexpr (std::is_same_v<T, ResidueAtom>) {
          return "residue(" + std::to_string(node.modulus) + "," + std::to_string(node.residue) + ")";
        } else if constexpr (std::is_same_v<T, RangeAtom>) {
          return "range(" + std::to_string(node.lo) + "," + (node.hi ? std::to_string(*node.hi) : "") + ")";
        } else if constexpr (std::is_same_v<T, GeometricAtom>) {
          return "geom(" + std::to_string(node.base) + ")";
        } else if constexpr (std::is_same_v<T, SampledAtom>) {
          return "sampled(" + std::to_string(node.horizon) + "){" + join(node.members) + "}";
        } else if constexpr (std::is_same_v<T, BlocksAtom>) {
          const GreedyBlocks& g = *node.data;
          return "blocks(" + to_text(g.sequence) + "; " + to_text(g.weights) + "; " +
                 to_string(g.exponent) + "; " + std::to_string(g.horizon) + ")";
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          std::string out;
          for (std::size_t i = 0; i < node.terms.size(); ++i) {
            if (i > 0) out += " | ";
            out += print_set(node.terms[i], 1);
          }
          return ctx >= 1 ? "(" + out + ")" : out;
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          std::string out;
          for (std::size_t i = 0; i < node.terms.size(); ++i) {
            if (i > 0) out += " & ";
            // a nested intersection keeps its parentheses so the tree shape survives
            const bool nested = std::holds_alternative<IntersectionNode>(node.terms[i].node().v);
            out += nested ? "(" + print_set(node.terms[i], 0) + ")" : print_set(node.terms[i], 1);
          }
          return ctx >= 2 ? "(" + out + ")" : out;
        } else {
          return "!" + print_set(node.inner, 2);
        }
      },
      e.node().v);
}

}  // namespace

SetExpr parse_set_expr(std::string_view text) {
  Settings settings;
  Parser p(text, settings);
  SetExpr out = p.set();
  p.finish();
  return out;
}

ScalarSeq parse_seq(std::string_view text) {
  Settings settings;
  Parser p(text, settings);
  ScalarSeq out = p.seq();
  p.finish();
  return out;
}

FilterSpec parse_filter(std::string_view text, const Settings& settings) {
  Parser p(text, settings);
  FilterSpec out = p.filter();
  p.finish();
  return out;
}

Scalar parse_number(std::string_view text) {
  Settings settings;
  Parser p(text, settings);
  Scalar out = p.number();
  p.finish();
  return out;
}

std::string to_text(const SetExpr& s) { return print_set(s, 0); }

std::string to_text(const ScalarSeq& a) {
  return std::visit(
      [&](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PowerLogSeq>) {
          if (node.gamma == 0) return "pow(" + node.c.to_string() + "," + to_string(node.beta) + ")";
          return "powlog(" + node.c.to_string() + "," + to_string(node.beta) + "," + to_string(node.gamma) + ")";
        } else if constexpr (std::is_same_v<T, ConstantSeq>) {
          return "const(" + node.c.to_string() + ")";
        } else if constexpr (std::is_same_v<T, PrefixSeq>) {
          std::string out = "prefix[";
          for (std::size_t i = 0; i < node.values.size(); ++i) {
            if (i > 0) out += ",";
            out += node.values[i].to_string();
          }
          return out + "]:" + to_text(node.tail);
        } else {
          std::string out = "piece{";
          for (std::size_t i = 0; i < node.pieces.size(); ++i) {
            if (i > 0) out += "; ";
            out += to_text(node.pieces[i].first) + " => " + to_text(node.pieces[i].second);
          }
          return out + "}";
        }
      },
      a.node().v);
}

std::string to_text(const FilterSpec& f) {
  return std::visit(
      [&](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FrechetFilter>) {
          return "frechet";
        } else if constexpr (std::is_same_v<T, StatisticalFilter>) {
          return "statistical";
        } else if constexpr (std::is_same_v<T, SummableFilter>) {
          return "summable(" + to_text(node.weights) + ")";
        } else {
          return "trace(" + to_text(*node.base) + "; " + to_text(node.subset) + ")";
        }
      },
      f.v);
}

}  // namespace fbasis
