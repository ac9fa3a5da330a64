#include "dotprod/point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dotprod/errors.hpp"

namespace dotprod {

Point::Point(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)) {
  require_same_mode(x, y, "point coordinates");
}

Scalar Point::radius2() const { return x * x + y * y; }

double Point::angle() const {
  if (is_origin()) throw DomainError("the origin has no argument");
  return std::atan2(y.to_double(), x.to_double());
}

std::size_t find_duplicate(std::span<const Point> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const auto cx = points[a].x <=> points[b].x;
    if (cx != 0) return cx < 0;
    const auto cy = points[a].y <=> points[b].y;
    if (cy != 0) return cy < 0;
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t first = points.size();
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points[order[k]] == points[order[k - 1]]) first = std::min(first, order[k]);
  }
  return first;
}

Configuration::Configuration(Mode mode, std::vector<Point> points) : mode_(mode), points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.mode() != mode_) throw UsageError("configuration mixes exact and approximate points");
  }
  if (auto dup = find_duplicate(points_); dup != points_.size()) {
    throw UsageError("repeated point (" + points_[dup].x.to_string() + ", " + points_[dup].y.to_string() +
                     ") at index " + std::to_string(dup));
  }
}

}  // namespace dotprod
