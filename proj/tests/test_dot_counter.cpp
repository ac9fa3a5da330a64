#include <doctest.h>

#include "dotprod/dot_counter.hpp"
#include "dotprod/errors.hpp"
#include "dotprod/generators.hpp"
#include "dotprod/geometry.hpp"
#include "dotprod/prng.hpp"
#include "oracles.hpp"

using namespace dotprod;

namespace {

std::vector<oracle::RationalPoint> rational_points(const Configuration& c) {
  std::vector<oracle::RationalPoint> out;
  for (const auto& p : c) out.emplace_back(p.x.rational(), p.y.rational());
  return out;
}

Point ep(long x, long y) { return {Scalar::exact(x), Scalar::exact(y)}; }

// Random exact configuration with coordinates num / den, |num| <= range.
Configuration random_exact(Xoshiro256& rng, std::size_t n, long range, long max_den) {
  std::vector<Point> pts;
  while (pts.size() < n) {
    const Point p(Scalar::exact(rng.uniform_int(-range, range), rng.uniform_int(1, max_den)),
                  Scalar::exact(rng.uniform_int(-range, range), rng.uniform_int(1, max_den)));
    bool dup = false;
    for (const auto& q : pts) dup = dup || q == p;
    if (!dup) pts.push_back(p);
  }
  return Configuration(Mode::Exact, std::move(pts));
}

}  // namespace

TEST_CASE("small configurations") {
  CHECK(distinct_dot_products(Configuration(Mode::Exact, {ep(3, 4)}), Quantization::exact()).cardinality() == 1);
  CHECK(distinct_dot_products(Configuration(Mode::Exact, {ep(1, 0), ep(0, 1)}), Quantization::exact())
            .cardinality() == 2);
  CHECK(distinct_dot_products(Configuration(Mode::Exact), Quantization::exact()).cardinality() == 0);
  const auto set = distinct_dot_products(Configuration(Mode::Exact, {ep(0, 0), ep(2, 1)}), Quantization::exact());
  CHECK(set.cardinality() == 2);
  CHECK(set.ordered_pairs == 4);
  CHECK(set.values.front() == Scalar::exact(0));
  CHECK(set.values.back() == Scalar::exact(5));
  CHECK(*set.min_gap == 5.0);
}

TEST_CASE("geometric line has 2n - 1 distinct products") {
  const Configuration c = gen_geometric_line(Scalar::exact(1), Scalar::exact(2), 4);
  const auto set = distinct_dot_products(c, Quantization::exact());
  CHECK(set.cardinality() == 7);
  CHECK(set.values.back() == Scalar::exact(64));
  for (const char* r : {"2", "3/2", "1/3"}) {
    const auto line = gen_geometric_line(Scalar::exact(7, 3), parse_scalar(r, Mode::Exact), 150);
    CHECK(distinct_dot_products(line, Quantization::exact()).cardinality() == 299);
  }
}

TEST_CASE("kernel agrees with the rational oracles on random configurations") {
  Xoshiro256 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 40));
    const Configuration c = random_exact(rng, n, 6, trial % 3 == 0 ? 1 : 4);
    const auto fast = distinct_dot_products(c, Quantization::exact(), {2});
    const auto slow = brute_force_oracle(c);
    CHECK(fast.cardinality() == oracle::distinct_dots(rational_points(c)));
    CHECK(fast.values == slow.values);
    CHECK(fast.min_gap == slow.min_gap);
  }
}

TEST_CASE("residue path matches the oracle on large coordinates") {
  // 2^70-scale numerators push the integer image past 62 bits.
  Xoshiro256 rng(99);
  const mpz_class big = mpz_class(1) << 70;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> pts;
    for (int k = 0; k < 25; ++k) {
      const mpq_class x(big * rng.uniform_int(-5, 5) + rng.uniform_int(-3, 3), rng.uniform_int(1, 3));
      const mpq_class y(big * rng.uniform_int(-5, 5) + rng.uniform_int(-3, 3), rng.uniform_int(1, 3));
      const Point p(Scalar::exact(x), Scalar::exact(y));
      bool dup = false;
      for (const auto& q : pts) dup = dup || q == p;
      if (!dup) pts.push_back(p);
    }
    const Configuration c(Mode::Exact, pts);
    const auto fast = distinct_dot_products(c, Quantization::exact());
    CHECK(fast.cardinality() == oracle::distinct_dots(rational_points(c)));
    CHECK(fast.values == brute_force_oracle(c).values);
  }
  const auto line = gen_geometric_line(Scalar::exact(1), Scalar::exact(3, 2), 60);
  CHECK(distinct_dot_products(line, Quantization::exact()).cardinality() == oracle::distinct_dots(rational_points(line)));
}

TEST_CASE("thread count does not change the result") {
  const Configuration c = gen_random_disk(120, 5, Scalar::exact(3));
  const auto one = distinct_dot_products(c, Quantization::exact(), {1});
  const auto many = distinct_dot_products(c, Quantization::exact(), {4});
  CHECK(one.values == many.values);
  const Configuration a = gen_random_disk(120, 5, Scalar::approx(3.0));
  CHECK(distinct_dot_products(a, Quantization::grid(), {1}).values ==
        distinct_dot_products(a, Quantization::grid(), {3}).values);
}

TEST_CASE("equally spaced circles") {
  for (std::size_t n : {8, 100, 1000}) {
    CAPTURE(n);
    CHECK(distinct_dot_products(gen_equally_spaced_circle(n, 1.0), Quantization::grid(1e-9)).cardinality() ==
          n / 2 + 1);
  }
  for (std::size_t n : {9, 101, 7, 15}) {
    CAPTURE(n);
    const auto count = distinct_dot_products(gen_equally_spaced_circle(n, 1.0), Quantization::grid(1e-9)).cardinality();
    CHECK(count == n / 2 + 1);
    CHECK(count == oracle::circle_distinct_cosines(n));
  }
}

TEST_CASE("grid counting agrees with exact counting on well separated values") {
  const Configuration e = gen_random_disk(60, 11, Scalar::exact(2));
  std::vector<Point> approx;
  for (const auto& p : e) approx.push_back(Point(p.x.to_mode(Mode::Approx), p.y.to_mode(Mode::Approx)));
  const Configuration a(Mode::Approx, approx);
  const auto exact = distinct_dot_products(e, Quantization::exact());
  const auto grid = distinct_dot_products(a, Quantization::grid(1e-15));
  CHECK(exact.cardinality() == grid.cardinality());
}

TEST_CASE("grid default quantum scales with the largest value") {
  const auto set = distinct_dot_products(gen_equally_spaced_circle(8, 10.0), Quantization::grid());
  CHECK(set.quantization.quantum == doctest::Approx(1e-7));
  CHECK(set.cardinality() == 5);
}

TEST_CASE("exact counting needs exact points") {
  CHECK_THROWS_AS(distinct_dot_products(gen_equally_spaced_circle(8, 1.0), Quantization::exact()), UsageError);
  CHECK_THROWS_AS(brute_force_oracle(gen_equally_spaced_circle(8, 1.0)), UsageError);
}

TEST_CASE("invariance under rotation and scaling") {
  Xoshiro256 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration c = random_exact(rng, 30, 20, 5);
    const auto base = distinct_dot_products(c, Quantization::exact()).cardinality();
    CHECK(distinct_dot_products(rotate(c, Scalar::exact(3, 5), Scalar::exact(4, 5)), Quantization::exact())
              .cardinality() == base);
    CHECK(distinct_dot_products(scale(c, Scalar::exact(7, 2)), Quantization::exact()).cardinality() == base);
  }
}

TEST_CASE("per point fertility") {
  const Configuration line = gen_geometric_line(Scalar::exact(1), Scalar::exact(2), 10);
  const auto f = per_point_fertility(line, Quantization::exact());
  CHECK(f.counts == std::vector<std::size_t>(10, 10));
  const Configuration c(Mode::Exact, {ep(1, 0), ep(0, 1), ep(1, 1), ep(0, 0)});
  const auto g = per_point_fertility(c, Quantization::exact());
  // (0,0) sees only 0; (1,0) sees {1, 0, 1, 0}
  CHECK(g.counts == std::vector<std::size_t>{2, 2, 3, 1});
  CHECK(g.minimum == 1);
  CHECK(g.minimum_index == 3);
  const auto h = per_point_fertility(gen_equally_spaced_circle(12, 1.0), Quantization::grid());
  CHECK(h.minimum == 7);
}

TEST_CASE("projection values") {
  const std::vector<Point> circle{ep(1, 0), ep(0, 1)};
  const std::vector<Point> line{ep(2, 0), ep(4, 0)};
  const auto set = projection_values(circle, line, Quantization::exact());
  CHECK(set.cardinality() == 3);
  CHECK(set.ordered_pairs == 4);
  CHECK_THROWS_AS(projection_values(circle, {}, Quantization::exact()), UsageError);
}
