#pragma once

#include "dotprod/point.hpp"

namespace dotprod {

Scalar dot(const Point& p, const Point& q);

// p * q := |p||q| exp(i (arg p - arg q)). The real part is the ordinary dot
// product and keeps the points' mode; the rest is approximate.
struct ComplexDot {
  Scalar re;
  double im = 0;
  double modulus = 0;
  double angle = 0;  // arg p - arg q, reduced to (-pi, pi]
};

ComplexDot complex_dot(const Point& p, const Point& q);

// (x, y) -> (cx - sy, sx + cy). Requires c^2 + s^2 = 1, exactly in Exact mode
// (pass a Pythagorean pair such as (3/5, 4/5)) and to 1e-12 in Approx mode.
Configuration rotate(const Configuration& config, const Scalar& c, const Scalar& s);

Configuration scale(const Configuration& config, const Scalar& factor);

}  // namespace dotprod
