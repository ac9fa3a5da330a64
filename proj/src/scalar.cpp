#include "dotprod/scalar.hpp"

#include <charconv>
#include <cmath>

#include "dotprod/errors.hpp"

namespace dotprod {

std::string_view to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "approx"; }

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::Exact;
  if (text == "approx") return Mode::Approx;
  throw UsageError("unknown mode '" + std::string(text) + "' (expected exact|approx)");
}

Scalar::Scalar(mpq_class q) : value_(std::move(q)) {
  std::get<mpq_class>(value_).canonicalize();
}

Scalar Scalar::exact(const mpq_class& q) {
  if (sgn(q.get_den()) == 0) throw UsageError("rational with zero denominator");
  return Scalar(q);
}

Scalar Scalar::exact(long num, long den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  return Scalar(mpq_class(num, den));
}

Scalar Scalar::approx(double v) {
  if (!std::isfinite(v)) throw UsageError("non-finite approximate scalar");
  Scalar s;
  // -0.0 and 0.0 denote the same coordinate.
  s.value_ = v == 0.0 ? 0.0 : v;
  return s;
}

const mpq_class& Scalar::rational() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
  throw UsageError("exact value requested from an approximate scalar");
}

double Scalar::real() const {
  if (const auto* d = std::get_if<double>(&value_)) return *d;
  throw UsageError("approximate value requested from an exact scalar");
}

double Scalar::to_double() const {
  if (const auto* d = std::get_if<double>(&value_)) return *d;
  return std::get<mpq_class>(value_).get_d();
}

Scalar Scalar::to_mode(Mode target) const {
  if (target == mode()) return *this;
  if (target == Mode::Approx) return approx(to_double());
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), real());
  return Scalar(q);
}

int Scalar::sign() const {
  if (const auto* d = std::get_if<double>(&value_)) return (*d > 0) - (*d < 0);
  return sgn(std::get<mpq_class>(value_));
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

std::string Scalar::to_string() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) {
    return q->get_num().get_str() + "/" + q->get_den().get_str();
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
  return std::string(buf, res.ptr);
}

void require_same_mode(const Scalar& a, const Scalar& b, std::string_view what) {
  if (a.mode() != b.mode()) {
    throw UsageError("mixed scalar modes in " + std::string(what));
  }
}

namespace {

template <class ExactOp, class ApproxOp>
Scalar combine(const Scalar& a, const Scalar& b, std::string_view what, ExactOp exact_op,
               ApproxOp approx_op) {
  require_same_mode(a, b, what);
  if (a.is_exact()) return Scalar::exact(mpq_class(exact_op(a.rational(), b.rational())));
  return Scalar::approx(approx_op(a.real(), b.real()));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, "addition", [](const mpq_class& x, const mpq_class& y) { return mpq_class(x + y); },
                 [](double x, double y) { return x + y; });
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, "subtraction", [](const mpq_class& x, const mpq_class& y) { return mpq_class(x - y); },
                 [](double x, double y) { return x - y; });
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, "multiplication",
                 [](const mpq_class& x, const mpq_class& y) { return mpq_class(x * y); },
                 [](double x, double y) { return x * y; });
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw UsageError("division by zero");
  return combine(a, b, "division", [](const mpq_class& x, const mpq_class& y) { return mpq_class(x / y); },
                 [](double x, double y) { return x / y; });
}

Scalar operator-(const Scalar& a) {
  if (a.is_exact()) return Scalar::exact(mpq_class(-a.rational()));
  return Scalar::approx(-a.real());
}

bool operator==(const Scalar& a, const Scalar& b) {
  require_same_mode(a, b, "comparison");
  if (a.is_exact()) return a.rational() == b.rational();
  return a.real() == b.real();
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  require_same_mode(a, b, "comparison");
  int c = 0;
  if (a.is_exact()) {
    c = cmp(a.rational(), b.rational());
  } else {
    c = (a.real() > b.real()) - (a.real() < b.real());
  }
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) throw UsageError("malformed integer '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

// Exact rational value of a decimal literal such as -12.5e-3.
mpq_class parse_decimal_exact(std::string_view s) {
  const std::string text(s);
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text[0] == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
      throw UsageError("malformed number '" + text + "'");
    }
  }
  std::string digits;
  bool negative = false;
  std::size_t i = 0;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    i = 1;
  }
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < mantissa.size(); ++i) {
    const char c = mantissa[i];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw UsageError("malformed number '" + text + "'");
    }
  }
  if (digits.empty()) throw UsageError("malformed number '" + text + "'");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class q = shift >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
  q.canonicalize();
  return q;
}

}  // namespace

Scalar parse_scalar(std::string_view text, Mode mode) {
  if (text.empty()) throw UsageError("empty numeric literal");
  mpq_class q;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    q = mpq_class(num, den);
    q.canonicalize();
  } else if (is_integer_literal(text)) {
    q = mpq_class(parse_integer(text));
  } else {
    if (mode == Mode::Approx) {
      double v = 0;
      const char* first = text.data();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError("malformed number '" + std::string(text) + "'");
      }
      return Scalar::approx(v);
    }
    q = parse_decimal_exact(text);
  }
  if (mode == Mode::Exact) return Scalar::exact(q);
  return Scalar::approx(q.get_d());
}

}  // namespace dotprod
