#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dotprod/scalar.hpp"

namespace dotprod {

struct Point {
  Scalar x;
  Scalar y;

  Point() = default;
  Point(Scalar x_, Scalar y_);

  Mode mode() const { return x.mode(); }
  Scalar radius2() const;
  // atan2(y, x) in (-pi, pi]; always approximate. DomainError at the origin.
  double angle() const;
  bool is_origin() const { return x.is_zero() && y.is_zero(); }

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

// Ordered list of pairwise distinct points sharing one scalar mode.
class Configuration {
 public:
  explicit Configuration(Mode mode = Mode::Exact) : mode_(mode) {}
  // Throws UsageError on a mode mismatch or a repeated point.
  Configuration(Mode mode, std::vector<Point> points);

  Mode mode() const { return mode_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  Mode mode_;
  std::vector<Point> points_;
};

// Index of the first repeated point, or size() when all are distinct.
std::size_t find_duplicate(std::span<const Point> points);

}  // namespace dotprod
