#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dotprod/dot_counter.hpp"
#include "dotprod/point.hpp"

namespace dotprod {

inline constexpr double kDefaultAngleTolerance = 1e-12;

// A line through the origin. Exact directions are primitive integer pairs with
// dx > 0, or dx = 0 and dy > 0. `angle` is the line's angle in [0, pi) in both
// modes (derived from (dx, dy) in Exact mode) and orders groups.
struct Direction {
  Mode mode = Mode::Exact;
  mpz_class dx, dy;
  double angle = 0.0;

  std::string to_string() const;
};

struct LineGroup {
  Direction direction;
  // Indices into the analysed configuration, sorted by signed coordinate
  // along the direction; members[k] is the point at indices[k].
  std::vector<std::size_t> indices;
  std::vector<Point> members;
  std::vector<int> sides;  // +1 along the direction, -1 against it

  std::size_t size() const { return members.size(); }
};

struct LineGrouping {
  std::vector<LineGroup> groups;  // size descending, then by direction angle
  std::vector<std::size_t> origin_indices;
  // Approx mode: smallest angular distance between distinct groups.
  std::optional<double> min_group_gap;
};

LineGrouping supporting_lines(const Configuration& config, double angle_tolerance = kDefaultAngleTolerance);
// Largest group; DomainError when every point is the origin.
LineGroup popular_line(const Configuration& config, double angle_tolerance = kDefaultAngleTolerance);

struct CircleGroup {
  Scalar radius2;  // exact key, or the smallest radius^2 in the grid cell
  bool degenerate = false;  // the origin
  std::vector<std::size_t> indices;
  std::vector<Point> members;

  std::size_t size() const { return members.size(); }
};

struct CircleGrouping {
  // Proper circles by size descending then radius^2 ascending; the flagged
  // origin group, if any, comes last.
  std::vector<CircleGroup> groups;
  double quantum = 0.0;  // Approx grouping quantum on radius^2

  std::size_t proper_count() const;
};

// quantum 0 picks 1e-9 * max(1, max radius^2) in Approx mode.
CircleGrouping supporting_circles(const Configuration& config, double quantum = 0.0);
CircleGroup popular_circle(const Configuration& config, double quantum = 0.0);

// Points of one line on one side of the origin, by increasing radius.
struct RayPoints {
  Direction direction;
  int side = 1;
  std::vector<Point> members;
  std::vector<std::size_t> indices;  // provenance, when known
  std::vector<Scalar> ratio2;        // |p_k|^2 / |p_{k+1}|^2, in the points' mode
  std::vector<double> ratios;        // |p_k| / |p_{k+1}|

  std::size_t size() const { return members.size(); }
};

// Builds a ray from arbitrary-order points; UsageError unless they are
// nonempty, non-origin, collinear with the origin and on one side of it.
RayPoints make_ray(std::vector<Point> points, std::vector<std::size_t> indices = {});
// The larger side of a line group (ties go to the positive side).
RayPoints popular_ray(const LineGroup& line);

struct WedgeResult {
  double start = 0.0;  // theta*, in [0, 2 pi)
  double width = 0.0;  // arccos(b)
  std::vector<std::size_t> indices;
  std::vector<Point> members;  // in angular order from start
  std::size_t origin_excluded = 0;
  std::size_t guaranteed = 0;  // ceil(width / 2 pi * non-origin count)
};

// Largest closed wedge theta <= arg p <= theta + arccos(b). Endpoints are
// widened by kDefaultAngleTolerance.
WedgeResult max_wedge(const Configuration& config, const Scalar& b);

// W_b(p, q): with |p| < |q|, |p| / |q| < b. Compared as radius^2 against b^2.
bool is_well_spaced_pair(const Point& p, const Point& q, const Scalar& b);
bool is_well_spaced(const RayPoints& ray, const Scalar& b);

struct WellSpacedExtraction {
  RayPoints kept;
  std::vector<std::size_t> kept_positions;      // positions in the input ray
  std::vector<std::size_t> rejected_positions;
  // (l(t), t) for each rejected t: a consecutive neighbour of t in the input
  // ray whose ratio with t is at least b.
  std::vector<std::pair<Point, Point>> t_pairs;
};

WellSpacedExtraction extract_max_well_spaced(const RayPoints& ray, const Scalar& b);

struct DensityReport {
  Direction direction;
  int side = 1;
  std::size_t members = 0;
  std::size_t close_pairs = 0;     // ratio in (b, 1)
  std::size_t spaced_pairs = 0;    // ratio < b
  std::size_t boundary_pairs = 0;  // ratio == b
  Scalar b;
  double c = 1.0;
  std::size_t ambient_n = 0;
  double threshold = 0.0;  // c sqrt(n)
  bool is_b_dense = false;
};

DensityReport density_report(const RayPoints& ray, const Scalar& b, double c, std::size_t n);

// Popular line -> popular ray -> report -> remove the ray, `rounds` times or
// until no points remain. Thresholds use the original configuration size.
std::vector<DensityReport> iterate_dense_lines(const Configuration& config, const Scalar& b, double c,
                                               std::size_t rounds);

struct BucketReport {
  double circle_radius = 0.0;
  std::size_t circle_size = 0;
  // Line radii divided by the circle radius, r_1 < ... < r_M. Bucket 0 is
  // (0, r_1], bucket i is (r_i, r_{i+1}].
  std::vector<double> boundaries;
  std::vector<std::size_t> counts;
  std::vector<std::vector<Scalar>> bucket_values;  // unnormalized dot values
  double max_ratio = 0.0;  // largest |l_i| / |l_{i+1}|, 0 for a single point
  double k = 0.0;          // arccos(max_ratio) / 2 pi
  std::size_t threshold = 0;  // floor(k N)
  std::vector<bool> pass;
  std::size_t total_distinct = 0;  // |{c . l}|
  Quantization quantization;
};

// Distinct real parts Re(c * l) = c . l per bucket. Quantization defaults to
// Exact for exact points and the default grid otherwise.
BucketReport bucket_projection_report(std::span<const Point> circle, const RayPoints& line,
                                      std::optional<Quantization> quantization = std::nullopt);

}  // namespace dotprod
