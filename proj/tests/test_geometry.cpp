#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dotprod/errors.hpp"
#include "dotprod/geometry.hpp"

using namespace dotprod;

namespace {

Point ep(long x, long y) { return {Scalar::exact(x), Scalar::exact(y)}; }
Point ap(double x, double y) { return {Scalar::approx(x), Scalar::approx(y)}; }

}  // namespace

TEST_CASE("dot product") {
  CHECK(dot(ep(1, 2), ep(3, 4)) == Scalar::exact(11));
  CHECK(dot(ap(0.5, 2), ap(4, 0.25)) == Scalar::approx(2.5));
  CHECK_THROWS_AS(dot(ep(1, 0), ap(1, 0)), UsageError);
}

TEST_CASE("points need one mode") {
  CHECK_THROWS_AS(Point(Scalar::exact(1), Scalar::approx(1.0)), UsageError);
}

TEST_CASE("argument of a point") {
  CHECK(ep(0, 1).angle() == doctest::Approx(std::numbers::pi / 2));
  CHECK(ep(-1, 0).angle() == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(ep(0, 0).angle(), DomainError);
}

TEST_CASE("complex dot product") {
  const ComplexDot z = complex_dot(ep(0, 2), ep(3, 0));
  CHECK(z.re == Scalar::exact(0));
  CHECK(z.modulus == doctest::Approx(6));
  CHECK(z.angle == doctest::Approx(std::numbers::pi / 2));
  CHECK(z.im == doctest::Approx(6));

  const ComplexDot w = complex_dot(ap(1, 1), ap(2, -1));
  CHECK(w.re.real() == doctest::Approx(1));
  CHECK(w.modulus == doctest::Approx(std::sqrt(2.0) * std::sqrt(5.0)));
  CHECK(w.modulus * std::cos(w.angle) == doctest::Approx(1));

  // arg difference reduced to (-pi, pi]
  const ComplexDot u = complex_dot(ep(-1, -1), ep(-1, 1));
  CHECK(u.angle == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(complex_dot(ep(0, 0), ep(1, 0)), DomainError);
}

TEST_CASE("configurations reject repeated points and mixed modes") {
  CHECK_THROWS_AS(Configuration(Mode::Exact, {ep(1, 2), ep(3, 4), ep(1, 2)}), UsageError);
  CHECK_THROWS_AS(Configuration(Mode::Exact, {ep(1, 2), ap(3, 4)}), UsageError);
  CHECK_NOTHROW(Configuration(Mode::Exact, {}));
  CHECK(find_duplicate(std::vector<Point>{ep(1, 2), ep(2, 1)}) == 2);
}

TEST_CASE("exact rotation by a Pythagorean pair preserves every dot product") {
  const Configuration c(Mode::Exact, {ep(1, 2), ep(-3, 5), ep(7, 0), ep(0, -4)});
  const Configuration r = rotate(c, Scalar::exact(3, 5), Scalar::exact(4, 5));
  CHECK(r[0] == Point(Scalar::exact(-1), Scalar::exact(2)));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) CHECK(dot(r[i], r[j]) == dot(c[i], c[j]));
  }
  CHECK_THROWS_AS(rotate(c, Scalar::exact(1, 2), Scalar::exact(1, 2)), UsageError);
  CHECK_THROWS_AS(rotate(c, Scalar::approx(0.6), Scalar::approx(0.8)), UsageError);
}

TEST_CASE("approximate rotation checks the norm to 1e-12") {
  const Configuration c(Mode::Approx, {ap(1, 0), ap(0, 1)});
  const double t = 0.3;
  CHECK_NOTHROW(rotate(c, Scalar::approx(std::cos(t)), Scalar::approx(std::sin(t))));
  CHECK_THROWS_AS(rotate(c, Scalar::approx(0.6), Scalar::approx(0.81)), UsageError);
}

TEST_CASE("scaling multiplies dot products by s^2") {
  const Configuration c(Mode::Exact, {ep(1, 2), ep(-3, 5), ep(2, 2)});
  const Scalar s = Scalar::exact(7, 2);
  const Configuration d = scale(c, s);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) CHECK(dot(d[i], d[j]) == s * s * dot(c[i], c[j]));
  }
  CHECK_THROWS_AS(scale(c, Scalar::exact(0)), UsageError);
}
