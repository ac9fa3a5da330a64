#include "dotprod/geometry.hpp"

#include <cmath>
#include <numbers>

#include "dotprod/errors.hpp"

namespace dotprod {

Scalar dot(const Point& p, const Point& q) {
  if (p.mode() != q.mode()) throw UsageError("dot product of points in different modes");
  return p.x * q.x + p.y * q.y;
}

ComplexDot complex_dot(const Point& p, const Point& q) {
  if (p.is_origin() || q.is_origin()) throw DomainError("complex dot product with the origin");
  ComplexDot out;
  out.re = dot(p, q);
  out.im = (p.y * q.x - p.x * q.y).to_double();
  out.modulus = std::sqrt(p.radius2().to_double() * q.radius2().to_double());
  double a = p.angle() - q.angle();
  if (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  if (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  out.angle = a;
  return out;
}

Configuration rotate(const Configuration& config, const Scalar& c, const Scalar& s) {
  require_same_mode(c, s, "rotation");
  if (c.mode() != config.mode()) throw UsageError("rotation and configuration modes differ");
  const Scalar norm = c * c + s * s;
  if (c.is_exact()) {
    if (norm.rational() != 1) throw UsageError("rotation requires c^2 + s^2 = 1, got " + norm.to_string());
  } else if (std::abs(norm.real() - 1.0) > 1e-12) {
    throw UsageError("rotation requires c^2 + s^2 = 1, got " + norm.to_string());
  }
  std::vector<Point> out;
  out.reserve(config.size());
  for (const auto& p : config) out.emplace_back(c * p.x - s * p.y, s * p.x + c * p.y);
  return Configuration(config.mode(), std::move(out));
}

Configuration scale(const Configuration& config, const Scalar& factor) {
  if (factor.mode() != config.mode()) throw UsageError("scale factor and configuration modes differ");
  if (factor.is_zero()) throw UsageError("scale factor must be nonzero");
  std::vector<Point> out;
  out.reserve(config.size());
  for (const auto& p : config) out.emplace_back(factor * p.x, factor * p.y);
  return Configuration(config.mode(), std::move(out));
}

}  // namespace dotprod
