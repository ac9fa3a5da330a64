#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <variant>

namespace dotprod {

enum class Mode { Exact, Approx };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// A number in one of two homogeneous modes: a reduced arbitrary-precision
// fraction (Exact) or a double (Approx). Binary operations require both
// operands to share a mode and throw UsageError otherwise.
class Scalar {
 public:
  Scalar() : value_(0.0) {}

  static Scalar exact(const mpq_class& q);
  static Scalar exact(long num, long den = 1);
  static Scalar approx(double v);

  Mode mode() const { return std::holds_alternative<mpq_class>(value_) ? Mode::Exact : Mode::Approx; }
  bool is_exact() const { return mode() == Mode::Exact; }

  // Throws UsageError when the scalar is in the other mode.
  const mpq_class& rational() const;
  double real() const;

  // Nearest double in either mode.
  double to_double() const;
  // Exact -> Approx rounds to nearest; Approx -> Exact is the exact binary value.
  Scalar to_mode(Mode mode) const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  Scalar abs() const;

  std::string to_string() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  explicit Scalar(mpq_class q);
  std::variant<mpq_class, double> value_;
};

// Parses a numeric literal into the requested mode. Accepted forms are
// integers, `num/den`, and decimals with an optional exponent. In Exact mode a
// decimal literal is converted to the rational it denotes (0.9 -> 9/10).
Scalar parse_scalar(std::string_view text, Mode mode);

// Throws UsageError unless both scalars share a mode.
void require_same_mode(const Scalar& a, const Scalar& b, std::string_view what);

}  // namespace dotprod
