#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fbasis {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "3/4", "-2", "0".
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// Exact decimal literal: "0.5" -> 1/2, "1e-12" -> 1/10^12, "3/4" -> 3/4.
/// Throws DomainError on malformed input.
Rational parse_rational(std::string_view text);

/// Exact square root if `r` is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& r);

/// base^exponent when the result is rational. `base` must be positive.
std::optional<Rational> pow_exact(const Rational& base, const Rational& exponent);

/// Real number with exactness tracking. A value is known exactly as a
/// rational, or exactly through its (rational) square and sign, or only as
/// a binary64 approximation.
class Scalar {
 public:
  Scalar() : approx_(0.0), exact_(Rational(0)), square_(Rational(0)), sign_(0) {}

  static Scalar exact(const Rational& r);
  static Scalar from_square(const Rational& square, int sign = 1);
  static Scalar approx(double v);

  double value() const noexcept { return approx_; }
  const std::optional<Rational>& rational() const noexcept { return exact_; }
  const std::optional<Rational>& square() const noexcept { return square_; }
  int sign() const noexcept { return sign_; }
  bool is_rational() const noexcept { return exact_.has_value(); }
  bool is_exact() const noexcept { return square_.has_value(); }

  Scalar abs() const;
  Scalar inverse() const;
  Scalar pow(const Rational& exponent) const;

  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  Scalar operator-() const;

  /// Grammar form: "3/4", "sqrt(2)", "-sqrt(1/3)", or a 17-digit float.
  std::string to_string() const;

 private:
  double approx_;
  std::optional<Rational> exact_;
  std::optional<Rational> square_;
  int sign_;
};

/// Three-way comparison, exact whenever both sides are exact.
int compare(const Scalar& a, const Scalar& b);

/// "%.17g".
std::string format_double(double v);

BigInt gcd(const BigInt& a, const BigInt& b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

}  // namespace fbasis
