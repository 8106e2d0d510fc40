#include "fbasis/scalar.hpp"

#include "fbasis/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace fbasis {

namespace mp = boost::multiprecision;

std::string to_string(const Rational& r) {
  const BigInt num = mp::numerator(r);
  const BigInt den = mp::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt pow10(unsigned k) {
  BigInt out = 1;
  for (unsigned i = 0; i < k; ++i) out *= 10;
  return out;
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw DomainError("malformed exponent in number literal");
    }
    exponent = std::stoll(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  long long scale = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw DomainError("malformed number literal");
    }
    digits = std::string(int_part) + std::string(frac_part);
    scale = static_cast<long long>(frac_part.size());
  } else {
    if (!all_digits(text)) throw DomainError("malformed number literal");
    digits = std::string(text);
  }
  long long shift = exponent - scale;
  if (shift > 4000 || shift < -4000) throw DomainError("number literal exponent out of range");
  // a leading zero would select octal in the BigInt constructor
  const auto first = digits.find_first_not_of('0');
  Rational value{BigInt(first == std::string::npos ? std::string("0") : digits.substr(first))};
  if (shift >= 0) {
    value *= Rational(pow10(static_cast<unsigned>(shift)));
  } else {
    value /= Rational(pow10(static_cast<unsigned>(-shift)));
  }
  return negative ? Rational(-value) : value;
}

// floor(x^(1/k)) for x >= 0.
BigInt integer_root(const BigInt& x, unsigned k) {
  if (x < 2 || k == 1) return x;
  const unsigned bits = static_cast<unsigned>(mp::msb(x)) + 1;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bits / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (mp::pow(mid, k) <= x) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

std::optional<BigInt> exact_root(const BigInt& x, unsigned k) {
  BigInt r = integer_root(x, k);
  if (mp::pow(r, k) == x) return r;
  return std::nullopt;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in number literal");
    return num / den;
  }
  return parse_decimal(text);
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  auto n = exact_root(mp::numerator(r), 2);
  if (!n) return std::nullopt;
  auto d = exact_root(mp::denominator(r), 2);
  if (!d) return std::nullopt;
  return Rational(*n, *d);
}

std::optional<Rational> pow_exact(const Rational& base, const Rational& exponent) {
  if (base <= 0) return std::nullopt;
  if (base == 1) return Rational(1);
  const BigInt p = mp::numerator(exponent);
  const BigInt q = mp::denominator(exponent);
  if (q > 64 || mp::abs(p) > 256) return std::nullopt;
  const unsigned qk = q.convert_to<unsigned>();
  const unsigned pk = static_cast<unsigned>(mp::abs(p).convert_to<unsigned long>());
  const BigInt num = mp::numerator(base);
  const BigInt den = mp::denominator(base);
  const std::size_t bits = mp::msb(num) + mp::msb(den) + 2;
  if (bits * pk / qk > 8192) return std::nullopt;
  auto rn = exact_root(num, qk);
  if (!rn) return std::nullopt;
  auto rd = exact_root(den, qk);
  if (!rd) return std::nullopt;
  Rational out(mp::pow(*rn, pk), mp::pow(*rd, pk));
  if (p < 0) out = 1 / out;
  return out;
}

Scalar Scalar::exact(const Rational& r) {
  Scalar s;
  s.approx_ = to_double(r);
  s.exact_ = r;
  s.square_ = r * r;
  s.sign_ = r > 0 ? 1 : (r < 0 ? -1 : 0);
  return s;
}

Scalar Scalar::from_square(const Rational& square, int sign) {
  if (square < 0) throw DomainError("negative square");
  if (square == 0) return Scalar::exact(0);
  const int sg = sign < 0 ? -1 : 1;
  if (auto root = exact_sqrt(square)) return Scalar::exact(sg * *root);
  Scalar s;
  s.approx_ = sg * std::sqrt(to_double(square));
  s.exact_.reset();
  s.square_ = square;
  s.sign_ = sg;
  return s;
}

Scalar Scalar::approx(double v) {
  Scalar s;
  s.approx_ = v;
  s.exact_.reset();
  s.square_.reset();
  s.sign_ = v > 0 ? 1 : (v < 0 ? -1 : 0);
  return s;
}

Scalar Scalar::abs() const {
  if (exact_) return Scalar::exact(mp::abs(*exact_));
  if (square_) return Scalar::from_square(*square_, 1);
  return Scalar::approx(std::fabs(approx_));
}

Scalar Scalar::inverse() const {
  if (sign_ == 0) throw DomainError("division by zero");
  if (exact_) return Scalar::exact(1 / *exact_);
  if (square_) return Scalar::from_square(1 / *square_, sign_);
  return Scalar::approx(1.0 / approx_);
}

Scalar Scalar::pow(const Rational& exponent) const {
  if (exponent == 0) return Scalar::exact(1);
  if (exponent == 1) return *this;
  const bool integral = mp::denominator(exponent) == 1;
  if (sign_ < 0 && !integral) throw DomainError("fractional power of a negative number");
  if (sign_ == 0) {
    if (exponent < 0) throw DomainError("negative power of zero");
    return Scalar::exact(0);
  }
  int result_sign = 1;
  if (sign_ < 0 && integral && mp::numerator(exponent) % 2 != 0) result_sign = -1;
  const double approx = result_sign * std::pow(std::fabs(approx_), to_double(exponent));
  if (exact_) {
    if (auto r = pow_exact(mp::abs(*exact_), exponent)) return Scalar::exact(result_sign * *r);
  }
  if (square_) {
    if (auto sq = pow_exact(*square_, exponent)) return Scalar::from_square(*sq, result_sign);
  }
  return Scalar::approx(approx);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar::exact(*a.exact_ * *b.exact_);
  if (a.square_ && b.square_) {
    return Scalar::from_square(*a.square_ * *b.square_, a.sign_ * b.sign_);
  }
  return Scalar::approx(a.approx_ * b.approx_);
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) return Scalar::exact(*a.exact_ + *b.exact_);
  if (a.sign_ == 0 && a.exact_) return b;
  if (b.sign_ == 0 && b.exact_) return a;
  return Scalar::approx(a.approx_ + b.approx_);
}

Scalar Scalar::operator-() const {
  if (exact_) return Scalar::exact(-*exact_);
  if (square_) return Scalar::from_square(*square_, -sign_);
  return Scalar::approx(-approx_);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Scalar::to_string() const {
  if (exact_) return fbasis::to_string(*exact_);
  if (square_) {
    return std::string(sign_ < 0 ? "-" : "") + "sqrt(" + fbasis::to_string(*square_) + ")";
  }
  return format_double(approx_);
}

int compare(const Scalar& a, const Scalar& b) {
  if (a.rational() && b.rational()) {
    return *a.rational() < *b.rational() ? -1 : (*a.rational() > *b.rational() ? 1 : 0);
  }
  if (a.square() && b.square()) {
    if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : 1;
    if (a.sign() == 0) return 0;
    const Rational& sa = *a.square();
    const Rational& sb = *b.square();
    int mag = sa < sb ? -1 : (sa > sb ? 1 : 0);
    return a.sign() > 0 ? mag : -mag;
  }
  return a.value() < b.value() ? -1 : (a.value() > b.value() ? 1 : 0);
}

BigInt gcd(const BigInt& a, const BigInt& b) { return mp::gcd(a, b); }

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace fbasis
