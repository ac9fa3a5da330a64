#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dotprod/errors.hpp"
#include "dotprod/generators.hpp"
#include "dotprod/prng.hpp"
#include "dotprod/structure.hpp"
#include "oracles.hpp"

using namespace dotprod;

namespace {

Point ep(long x, long y) { return {Scalar::exact(x), Scalar::exact(y)}; }
Point eq(const char* x, const char* y) { return {parse_scalar(x, Mode::Exact), parse_scalar(y, Mode::Exact)}; }
Point ap(double x, double y) { return {Scalar::approx(x), Scalar::approx(y)}; }

RayPoints x_ray(const std::vector<long>& xs) {
  std::vector<Point> pts;
  for (long x : xs) pts.push_back(ep(x, 0));
  return make_ray(pts);
}

std::vector<long> xs_of(const RayPoints& ray) {
  std::vector<long> out;
  for (const auto& p : ray.members) out.push_back(p.x.rational().get_num().get_si());
  return out;
}

}  // namespace

TEST_CASE("supporting lines group by exact direction") {
  const Configuration c(Mode::Exact, {ep(1, 1), ep(2, 2), eq("-1/2", "-1/2"), ep(1, 0), ep(-3, 0), ep(0, 0),
                                      ep(1, 2), eq("1/3", "1/3")});
  const LineGrouping lines = supporting_lines(c);
  REQUIRE(lines.groups.size() == 3);
  CHECK(lines.origin_indices == std::vector<std::size_t>{5});
  const LineGroup& diag = lines.groups[0];
  CHECK(diag.direction.dx == 1);
  CHECK(diag.direction.dy == 1);
  CHECK(diag.size() == 4);
  // sorted by signed coordinate along (1, 1)
  CHECK(diag.indices == std::vector<std::size_t>{2, 7, 0, 1});
  CHECK(diag.sides == std::vector<int>{-1, 1, 1, 1});
  CHECK(lines.groups[1].direction.dx == 1);
  CHECK(lines.groups[1].direction.dy == 0);
  CHECK(lines.groups[2].direction.angle == doctest::Approx(std::atan2(2.0, 1.0)));
}

TEST_CASE("line groups of equal size are ordered by direction angle") {
  const Configuration c(Mode::Exact, {ep(0, 1), ep(1, -1), ep(1, 1), ep(2, 1)});
  const LineGrouping lines = supporting_lines(c);
  REQUIRE(lines.groups.size() == 4);
  CHECK(lines.groups[0].direction.angle == doctest::Approx(std::atan2(1.0, 2.0)));
  CHECK(lines.groups[1].direction.angle == doctest::Approx(std::numbers::pi / 4));
  CHECK(lines.groups[2].direction.angle == doctest::Approx(std::numbers::pi / 2));
  CHECK(lines.groups[3].direction.angle == doctest::Approx(3 * std::numbers::pi / 4));
}

TEST_CASE("approximate direction grouping merges across the angle pi") {
  const Configuration c(Mode::Approx, {ap(1, 0), ap(-2, 1e-13), ap(0, 1), ap(0, -3), ap(1, 1)});
  const LineGrouping lines = supporting_lines(c);
  REQUIRE(lines.groups.size() == 3);
  CHECK(lines.groups[0].size() == 2);
  CHECK(lines.groups[1].size() == 2);
  REQUIRE(lines.min_group_gap.has_value());
  CHECK(*lines.min_group_gap == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("popular line of a configuration with only the origin") {
  CHECK_THROWS_AS(popular_line(Configuration(Mode::Exact, {ep(0, 0)})), DomainError);
}

TEST_CASE("supporting circles") {
  const Configuration c(Mode::Exact, {ep(3, 4), ep(5, 0), ep(0, -5), ep(1, 0), ep(0, 1), ep(0, 0), ep(2, 0)});
  const CircleGrouping circles = supporting_circles(c);
  CHECK(circles.proper_count() == 3);
  REQUIRE(circles.groups.size() == 4);
  CHECK(circles.groups[0].radius2 == Scalar::exact(25));
  CHECK(circles.groups[0].size() == 3);
  CHECK(circles.groups[1].radius2 == Scalar::exact(1));
  CHECK(circles.groups.back().degenerate);
  CHECK(popular_circle(c).radius2 == Scalar::exact(25));
  CHECK_THROWS_AS(popular_circle(Configuration(Mode::Exact, {ep(0, 0)})), DomainError);

  const CircleGrouping approx = supporting_circles(gen_equally_spaced_circle(24, 1.0));
  CHECK(approx.proper_count() == 1);
  CHECK(approx.groups[0].size() == 24);
}

TEST_CASE("rays") {
  const RayPoints ray = make_ray({ep(4, 2), ep(2, 1), ep(6, 3)}, {7, 8, 9});
  CHECK(xs_of(ray) == std::vector<long>{2, 4, 6});
  CHECK(ray.indices == std::vector<std::size_t>{8, 7, 9});
  CHECK(ray.ratio2[0] == Scalar::exact(1, 4));
  CHECK(ray.ratios[1] == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(make_ray({ep(1, 0), ep(-1, 0)}), UsageError);
  CHECK_THROWS_AS(make_ray({ep(1, 0), ep(1, 1)}), UsageError);
  CHECK_THROWS_AS(make_ray({ep(0, 0)}), UsageError);
  CHECK_THROWS_AS(make_ray({}), UsageError);

  const Configuration c(Mode::Exact, {ep(1, 0), ep(-1, 0), ep(-2, 0), ep(3, 0)});
  const LineGroup line = popular_line(c);
  CHECK(xs_of(popular_ray(line)) == std::vector<long>{1, 3});  // tie goes to the positive side
  const Configuration d(Mode::Exact, {ep(-1, 0), ep(-2, 0), ep(3, 0)});
  const RayPoints neg = popular_ray(popular_line(d));
  CHECK(neg.side == -1);
  CHECK(xs_of(neg) == std::vector<long>{-1, -2});
}

TEST_CASE("max wedge on a small example") {
  const Configuration c(Mode::Exact, {ep(1, 0), ep(1, 1), ep(0, 1), ep(-1, 0), ep(0, -1), ep(0, 0)});
  // arccos(1/2) = pi / 3: the first wedge of two points starts at angle 0
  const WedgeResult w = max_wedge(c, Scalar::exact(1, 2));
  CHECK(w.members.size() == 2);
  CHECK(w.origin_excluded == 1);
  CHECK(w.start == doctest::Approx(0));
  CHECK(w.guaranteed == 1);
  CHECK_THROWS_AS(max_wedge(c, Scalar::exact(1)), UsageError);
  CHECK_THROWS_AS(max_wedge(c, Scalar::exact(0)), UsageError);
  CHECK_THROWS_AS(max_wedge(Configuration(Mode::Exact, {ep(0, 0)}), Scalar::exact(1, 2)), DomainError);
}

TEST_CASE("max wedge agrees with the arc oracle") {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 80));
    const Configuration c = gen_random_disk(n, rng.next(), Scalar::approx(1.0));
    for (const char* b : {"0.3", "0.7", "0.9"}) {
      const WedgeResult w = max_wedge(c, parse_scalar(b, Mode::Exact));
      std::vector<double> angles;
      for (const auto& p : c) angles.push_back(p.angle() < 0 ? p.angle() + 2 * std::numbers::pi : p.angle());
      CHECK(w.members.size() == oracle::max_arc_count(angles, std::acos(std::stod(b))));
      CHECK(w.members.size() >= w.guaranteed);
    }
  }
}

TEST_CASE("well spaced pairs") {
  const Scalar half = Scalar::exact(1, 2);
  CHECK(is_well_spaced_pair(ep(1, 0), ep(3, 0), half));
  CHECK(!is_well_spaced_pair(ep(1, 0), ep(2, 0), half));  // ratio exactly b
  CHECK(is_well_spaced_pair(ep(3, 3), ep(1, 1), half));
  CHECK_THROWS_AS(is_well_spaced_pair(ep(1, 0), ep(-3, 0), half), UsageError);
  CHECK_THROWS_AS(is_well_spaced_pair(ep(1, 0), ep(3, 1), half), UsageError);
  CHECK_THROWS_AS(is_well_spaced_pair(ep(1, 0), ep(3, 0), Scalar::approx(0.5)), UsageError);
  CHECK(is_well_spaced_pair(ap(1, 0), ap(3, 0), half));
  CHECK(is_well_spaced(x_ray({1, 3, 7}), half));
  CHECK(!is_well_spaced(x_ray({1, 2, 7}), half));
}

TEST_CASE("greedy extraction on 1..8") {
  const RayPoints ray = x_ray({1, 2, 3, 4, 5, 6, 7, 8});
  const WellSpacedExtraction s = extract_max_well_spaced(ray, Scalar::exact(1, 2));
  CHECK(xs_of(s.kept) == std::vector<long>{1, 3, 7});
  CHECK(s.kept_positions == std::vector<std::size_t>{0, 2, 6});
  CHECK(s.rejected_positions == std::vector<std::size_t>{1, 3, 4, 5, 7});
  REQUIRE(s.t_pairs.size() == 5);
  for (const auto& [l, t] : s.t_pairs) {
    Scalar small = l.radius2(), big = t.radius2();
    if (big < small) std::swap(small, big);
    CHECK(!(small < Scalar::exact(1, 4) * big));
  }
}

TEST_CASE("greedy extraction is maximum on random rays") {
  Xoshiro256 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform_int(1, 12));
    std::vector<long> xs;
    long x = 0;
    for (std::size_t k = 0; k < m; ++k) {
      x += rng.uniform_int(1, 20);
      xs.push_back(x);
    }
    const mpq_class b(rng.uniform_int(1, 9), 10);
    const auto s = extract_max_well_spaced(x_ray(xs), Scalar::exact(b));
    std::vector<mpq_class> radii(xs.begin(), xs.end());
    CHECK(s.kept.size() == oracle::max_well_spaced_subset(radii, b));
    CHECK(is_well_spaced(s.kept, Scalar::exact(b)));
    CHECK(s.kept.size() + s.t_pairs.size() == m);
  }
}

TEST_CASE("density report") {
  std::vector<long> xs;
  for (long x = 10; x <= 109; ++x) xs.push_back(x);
  const DensityReport d = density_report(x_ray(xs), Scalar::exact(9, 10), 0.9, 10000);
  CHECK(d.close_pairs == 99);
  CHECK(d.spaced_pairs == 0);
  CHECK(d.threshold == doctest::Approx(90));
  CHECK(d.is_b_dense);

  const DensityReport e = density_report(x_ray({1, 2, 5, 6}), Scalar::exact(1, 2), 1.0, 4);
  CHECK(e.boundary_pairs == 1);
  CHECK(e.spaced_pairs == 1);
  CHECK(e.close_pairs == 1);
  CHECK(!e.is_b_dense);
}

TEST_CASE("iterating dense lines removes each popular ray") {
  std::vector<Point> pts;
  for (long x = 1; x <= 6; ++x) pts.push_back(ep(x, 0));
  for (long y = 1; y <= 4; ++y) pts.push_back(ep(0, y));
  pts.push_back(ep(-1, 0));
  const Configuration c(Mode::Exact, pts);
  const auto reports = iterate_dense_lines(c, Scalar::exact(1, 2), 1.0, 5);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].members == 6);
  CHECK(reports[1].members == 4);
  CHECK(reports[2].members == 1);
  CHECK(reports[0].ambient_n == 11);
}

TEST_CASE("bucket report on the smallest example") {
  const std::vector<Point> circle{ep(1, 0)};
  const BucketReport r = bucket_projection_report(circle, x_ray({2, 4}));
  CHECK(r.counts == std::vector<std::size_t>{1, 1});
  CHECK(r.boundaries == std::vector<double>{2, 4});
  CHECK(r.total_distinct == 2);
}

TEST_CASE("bucket report for 24 circle points and the line 2, 4, ..., 64") {
  const Configuration c = gen_equally_spaced_circle(24, 1.0);
  std::vector<Point> line;
  for (double x = 2; x <= 64; x *= 2) line.push_back(ap(x, 0));
  const BucketReport r = bucket_projection_report(c.points(), make_ray(line));
  CHECK(r.max_ratio == doctest::Approx(0.5));
  CHECK(r.k == doctest::Approx(1.0 / 6.0));
  CHECK(r.threshold == 4);

  // independent per-bucket count in long double
  std::vector<std::vector<long double>> buckets(6);
  const long double pi = std::numbers::pi_v<long double>;
  for (int j = 0; j < 24; ++j) {
    for (int e = 1; e <= 6; ++e) {
      const long double v = std::ldexp(1.0L, e) * std::cos(2 * pi * j / 24);
      if (v <= 1e-9L) continue;
      for (int i = 0; i < 6; ++i) {
        if (v <= std::ldexp(1.0L, i + 1) + 1e-9L) {
          buckets[static_cast<std::size_t>(i)].push_back(v);
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < 6; ++i) {
    CAPTURE(i);
    CHECK(r.counts[i] == oracle::distinct_with_tolerance(buckets[i], 1e-9L));
  }
  for (std::size_t i = 1; i < 6; ++i) CHECK(r.counts[i] >= r.threshold);
}

TEST_CASE("sector configuration fills every bucket with N projections") {
  std::vector<Scalar> radii;
  for (long x : {1, 3, 7, 15, 31}) radii.push_back(Scalar::exact(x));
  const Configuration c = gen_sector_circle_plus_line(5, radii, Scalar::exact(1, 2));
  const auto pts = c.points();
  const std::vector<Point> line(pts.begin() + 5, pts.end());
  const BucketReport r = bucket_projection_report(pts.subspan(0, 5), make_ray(line));
  CHECK(r.counts == std::vector<std::size_t>(5, 5));
}

TEST_CASE("bucket report preconditions") {
  const std::vector<Point> circle{ep(1, 0), ep(0, 2)};
  CHECK_THROWS_AS(bucket_projection_report(circle, x_ray({2, 4})), UsageError);
  const std::vector<Point> unit{ep(1, 0)};
  CHECK_THROWS_AS(bucket_projection_report(unit, make_ray({ap(2, 0)})), UsageError);
  CHECK_THROWS_AS(bucket_projection_report({}, x_ray({2})), UsageError);
}
