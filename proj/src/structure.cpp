#include "dotprod/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "dotprod/errors.hpp"
#include "dotprod/geometry.hpp"

namespace dotprod {

namespace {

constexpr double kPi = std::numbers::pi;

// atan2 for integers of any size.
double big_atan2(const mpz_class& y, const mpz_class& x) {
  long ey = 0, ex = 0;
  const double my = mpz_get_d_2exp(&ey, y.get_mpz_t());
  const double mx = mpz_get_d_2exp(&ex, x.get_mpz_t());
  const long e = std::max(ey, ex);
  return std::atan2(std::ldexp(my, static_cast<int>(ey - e)), std::ldexp(mx, static_cast<int>(ex - e)));
}

double line_angle_from(double theta) {
  double phi = theta < 0 ? theta + kPi : theta;
  if (phi >= kPi) phi -= kPi;
  return phi;
}

struct ExactDirection {
  Direction direction;
  int side = 1;
};

ExactDirection exact_direction(const Point& p) {
  const mpq_class& x = p.x.rational();
  const mpq_class& y = p.y.rational();
  mpz_class u = x.get_num() * y.get_den();
  mpz_class v = y.get_num() * x.get_den();
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
  u /= g;
  v /= g;
  int side = 1;
  if (u < 0 || (u == 0 && v < 0)) {
    u = -u;
    v = -v;
    side = -1;
  }
  ExactDirection out;
  out.direction.mode = Mode::Exact;
  out.direction.angle = line_angle_from(big_atan2(v, u));
  out.direction.dx = std::move(u);
  out.direction.dy = std::move(v);
  out.side = side;
  return out;
}

// Line angle order on exact canonical directions: [0, pi/2), pi/2, (pi/2, pi).
bool exact_direction_less(const Direction& a, const Direction& b) {
  auto half = [](const Direction& d) { return d.dx == 0 ? 1 : (d.dy >= 0 ? 0 : 2); };
  const int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  if (ha == 1) return false;
  return a.dy * b.dx < b.dy * a.dx;
}

bool direction_less(const Direction& a, const Direction& b) {
  if (a.mode == Mode::Exact && b.mode == Mode::Exact) return exact_direction_less(a, b);
  return a.angle < b.angle;
}

double approx_signed_coordinate(const Point& p, double phi) {
  return p.x.real() * std::cos(phi) + p.y.real() * std::sin(phi);
}

void sort_line_members(LineGroup& g) {
  std::vector<std::size_t> order(g.members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (g.direction.mode == Mode::Exact) {
    std::vector<mpq_class> t;
    t.reserve(g.members.size());
    for (const auto& p : g.members) {
      t.emplace_back(p.x.rational() * mpq_class(g.direction.dx) + p.y.rational() * mpq_class(g.direction.dy));
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  } else {
    std::vector<double> t;
    for (const auto& p : g.members) t.push_back(approx_signed_coordinate(p, g.direction.angle));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  }
  LineGroup sorted;
  sorted.direction = g.direction;
  for (auto k : order) {
    sorted.indices.push_back(g.indices[k]);
    sorted.members.push_back(g.members[k]);
    sorted.sides.push_back(g.sides[k]);
  }
  g = std::move(sorted);
}

void finalize_ray(RayPoints& ray) {
  std::vector<std::size_t> order(ray.members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Scalar> r2;
  for (const auto& p : ray.members) r2.push_back(p.radius2());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r2[a] < r2[b]; });
  std::vector<Point> members;
  std::vector<std::size_t> indices;
  std::vector<Scalar> sorted_r2;
  for (auto k : order) {
    members.push_back(ray.members[k]);
    if (!ray.indices.empty()) indices.push_back(ray.indices[k]);
    sorted_r2.push_back(r2[k]);
  }
  ray.members = std::move(members);
  ray.indices = std::move(indices);
  ray.ratio2.clear();
  ray.ratios.clear();
  for (std::size_t k = 0; k + 1 < sorted_r2.size(); ++k) {
    if (!(sorted_r2[k] < sorted_r2[k + 1])) throw UsageError("ray points must have distinct radii");
    ray.ratio2.push_back(sorted_r2[k] / sorted_r2[k + 1]);
    ray.ratios.push_back(std::sqrt(ray.ratio2.back().to_double()));
  }
}

// b in the mode used for comparisons against points of `mode`.
Scalar comparison_b(const Scalar& b, Mode mode) {
  if (mode == Mode::Exact && !b.is_exact()) throw UsageError("exact points need an exact b (e.g. 1/2 or 0.9)");
  const Scalar out = b.to_mode(mode);
  const Scalar one = mode == Mode::Exact ? Scalar::exact(1) : Scalar::approx(1.0);
  if (out.sign() <= 0 || !(out < one)) throw UsageError("b must lie in (0,1), got " + b.to_string());
  return out;
}

}  // namespace

std::string Direction::to_string() const {
  if (mode == Mode::Exact) return "(" + dx.get_str() + "," + dy.get_str() + ")";
  char buf[64];
  std::snprintf(buf, sizeof buf, "angle=%.17g", angle);
  return buf;
}

LineGrouping supporting_lines(const Configuration& config, double angle_tolerance) {
  LineGrouping out;
  if (config.mode() == Mode::Exact) {
    std::map<std::pair<mpz_class, mpz_class>, std::size_t> slot;
    for (std::size_t i = 0; i < config.size(); ++i) {
      const Point& p = config[i];
      if (p.is_origin()) {
        out.origin_indices.push_back(i);
        continue;
      }
      ExactDirection d = exact_direction(p);
      auto [it, inserted] = slot.try_emplace({d.direction.dx, d.direction.dy}, out.groups.size());
      if (inserted) {
        out.groups.emplace_back();
        out.groups.back().direction = d.direction;
      }
      LineGroup& g = out.groups[it->second];
      g.indices.push_back(i);
      g.members.push_back(p);
      g.sides.push_back(d.side);
    }
  } else {
    struct Item {
      double phi;
      std::size_t index;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < config.size(); ++i) {
      if (config[i].is_origin()) {
        out.origin_indices.push_back(i);
      } else {
        items.push_back({line_angle_from(config[i].angle()), i});
      }
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return a.phi != b.phi ? a.phi < b.phi : a.index < b.index;
    });
    std::vector<std::vector<Item>> runs;
    for (const auto& it : items) {
      if (runs.empty() || it.phi - runs.back().back().phi > angle_tolerance) runs.emplace_back();
      runs.back().push_back(it);
    }
    std::vector<double> gaps;
    for (std::size_t r = 0; r + 1 < runs.size(); ++r) gaps.push_back(runs[r + 1].front().phi - runs[r].back().phi);
    // Angles just below pi belong to the line at angle 0.
    if (runs.size() > 1) {
      const double wrap = runs.front().front().phi + kPi - runs.back().back().phi;
      if (wrap <= angle_tolerance) {
        runs.front().insert(runs.front().end(), runs.back().begin(), runs.back().end());
        runs.pop_back();
      } else {
        gaps.push_back(wrap);
      }
    }
    if (runs.size() > 1) out.min_group_gap = *std::min_element(gaps.begin(), gaps.end());
    for (const auto& run : runs) {
      LineGroup g;
      g.direction.mode = Mode::Approx;
      g.direction.angle = run.front().phi;
      for (const auto& it : run) {
        const Point& p = config[it.index];
        g.indices.push_back(it.index);
        g.members.push_back(p);
        g.sides.push_back(approx_signed_coordinate(p, g.direction.angle) >= 0 ? 1 : -1);
      }
      out.groups.push_back(std::move(g));
    }
  }
  for (auto& g : out.groups) sort_line_members(g);
  std::stable_sort(out.groups.begin(), out.groups.end(), [](const LineGroup& a, const LineGroup& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return direction_less(a.direction, b.direction);
  });
  return out;
}

LineGroup popular_line(const Configuration& config, double angle_tolerance) {
  LineGrouping lines = supporting_lines(config, angle_tolerance);
  if (lines.groups.empty()) throw DomainError("no supporting line: every point is the origin");
  return std::move(lines.groups.front());
}

std::size_t CircleGrouping::proper_count() const {
  return static_cast<std::size_t>(
      std::count_if(groups.begin(), groups.end(), [](const CircleGroup& g) { return !g.degenerate; }));
}

CircleGrouping supporting_circles(const Configuration& config, double quantum) {
  CircleGrouping out;
  std::vector<CircleGroup> proper;
  CircleGroup origin;
  origin.degenerate = true;
  if (config.mode() == Mode::Exact) {
    origin.radius2 = Scalar::exact(0);
    std::map<mpq_class, std::size_t> slot;
    for (std::size_t i = 0; i < config.size(); ++i) {
      const Point& p = config[i];
      if (p.is_origin()) {
        origin.indices.push_back(i);
        origin.members.push_back(p);
        continue;
      }
      const Scalar r2 = p.radius2();
      auto [it, inserted] = slot.try_emplace(r2.rational(), proper.size());
      if (inserted) {
        proper.emplace_back();
        proper.back().radius2 = r2;
      }
      proper[it->second].indices.push_back(i);
      proper[it->second].members.push_back(p);
    }
  } else {
    origin.radius2 = Scalar::approx(0.0);
    double max_r2 = 0;
    for (const auto& p : config) max_r2 = std::max(max_r2, p.radius2().real());
    out.quantum = quantum > 0 ? quantum : default_quantum(max_r2);
    std::unordered_map<std::int64_t, std::size_t> slot;
    for (std::size_t i = 0; i < config.size(); ++i) {
      const Point& p = config[i];
      if (p.is_origin()) {
        origin.indices.push_back(i);
        origin.members.push_back(p);
        continue;
      }
      const double r2 = p.radius2().real();
      const double scaled = r2 / out.quantum;
      if (!(scaled < 9.0e18)) throw UsageError("circle quantum too small");
      auto [it, inserted] = slot.try_emplace(std::llround(scaled), proper.size());
      if (inserted) {
        proper.emplace_back();
        proper.back().radius2 = Scalar::approx(r2);
      } else if (r2 < proper[it->second].radius2.real()) {
        proper[it->second].radius2 = Scalar::approx(r2);
      }
      proper[it->second].indices.push_back(i);
      proper[it->second].members.push_back(p);
    }
  }
  std::sort(proper.begin(), proper.end(), [](const CircleGroup& a, const CircleGroup& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.radius2 < b.radius2;
  });
  out.groups = std::move(proper);
  if (!origin.members.empty()) out.groups.push_back(std::move(origin));
  return out;
}

CircleGroup popular_circle(const Configuration& config, double quantum) {
  CircleGrouping circles = supporting_circles(config, quantum);
  if (circles.proper_count() == 0) throw DomainError("no supporting circle: every point is the origin");
  return std::move(circles.groups.front());
}

RayPoints make_ray(std::vector<Point> points, std::vector<std::size_t> indices) {
  if (points.empty()) throw UsageError("a ray needs at least one point");
  if (!indices.empty() && indices.size() != points.size()) throw UsageError("ray indices do not match points");
  RayPoints ray;
  const Point& first = points.front();
  for (const auto& p : points) {
    if (p.mode() != first.mode()) throw UsageError("ray points mix modes");
    if (p.is_origin()) throw UsageError("the origin is on no ray");
  }
  if (first.mode() == Mode::Exact) {
    const ExactDirection d0 = exact_direction(first);
    for (const auto& p : points) {
      const ExactDirection d = exact_direction(p);
      if (d.direction.dx != d0.direction.dx || d.direction.dy != d0.direction.dy || d.side != d0.side) {
        throw UsageError("ray points are not on one ray from the origin");
      }
    }
    ray.direction = d0.direction;
    ray.side = d0.side;
  } else {
    const double theta0 = first.angle();
    for (const auto& p : points) {
      if (std::fabs(std::remainder(p.angle() - theta0, 2 * kPi)) > kDefaultAngleTolerance) {
        throw UsageError("ray points are not on one ray from the origin");
      }
    }
    ray.direction.mode = Mode::Approx;
    ray.direction.angle = line_angle_from(theta0);
    ray.side = approx_signed_coordinate(first, ray.direction.angle) >= 0 ? 1 : -1;
  }
  ray.members = std::move(points);
  ray.indices = std::move(indices);
  finalize_ray(ray);
  return ray;
}

RayPoints popular_ray(const LineGroup& line) {
  const auto positive = static_cast<std::size_t>(std::count(line.sides.begin(), line.sides.end(), 1));
  const std::size_t negative = line.size() - positive;
  if (line.size() == 0) throw DomainError("empty line group has no ray");
  RayPoints ray;
  ray.direction = line.direction;
  ray.side = positive >= negative ? 1 : -1;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line.sides[k] != ray.side) continue;
    ray.members.push_back(line.members[k]);
    ray.indices.push_back(line.indices[k]);
  }
  finalize_ray(ray);
  return ray;
}

WedgeResult max_wedge(const Configuration& config, const Scalar& b) {
  const double bd = b.to_double();
  if (!(bd > 0 && bd < 1)) throw UsageError("wedge b must lie in (0,1)");
  WedgeResult out;
  out.width = std::acos(bd);
  struct Item {
    double angle;
    std::size_t index;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config[i].is_origin()) {
      ++out.origin_excluded;
      continue;
    }
    double a = config[i].angle();
    if (a < 0) a += 2 * kPi;
    if (a >= 2 * kPi) a -= 2 * kPi;
    items.push_back({a, i});
  }
  if (items.empty()) throw DomainError("max wedge of a configuration with no non-origin point");
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return x.angle != y.angle ? x.angle < y.angle : x.index < y.index;
  });
  const std::size_t m = items.size();
  out.guaranteed = static_cast<std::size_t>(std::ceil(out.width / (2 * kPi) * static_cast<double>(m) - 1e-9));
  auto unrolled = [&](std::size_t k) { return items[k % m].angle + (k >= m ? 2 * kPi : 0.0); };
  std::size_t best_start = 0, best_count = 0, end = 0;
  for (std::size_t s = 0; s < m; ++s) {
    if (end < s) end = s;
    const double limit = items[s].angle + out.width + kDefaultAngleTolerance;
    while (end < s + m && unrolled(end) <= limit) ++end;
    const std::size_t count = end - s;
    if (count > best_count) {
      best_count = count;
      best_start = s;
    }
  }
  out.start = items[best_start].angle;
  for (std::size_t k = best_start; k < best_start + best_count; ++k) {
    out.indices.push_back(items[k % m].index);
    out.members.push_back(config[items[k % m].index]);
  }
  return out;
}

bool is_well_spaced_pair(const Point& p, const Point& q, const Scalar& b) {
  if (p.mode() != q.mode()) throw UsageError("well-spaced pair: points in different modes");
  if (p.is_origin() || q.is_origin()) throw UsageError("well-spaced pair: the origin is on no ray");
  const Scalar bb = comparison_b(b, p.mode());
  const Scalar cross = p.x * q.y - p.y * q.x;
  const Scalar along = dot(p, q);
  bool collinear = false;
  if (p.mode() == Mode::Exact) {
    collinear = cross.is_zero();
  } else {
    const double scale = std::sqrt(p.radius2().real() * q.radius2().real());
    collinear = std::fabs(cross.real()) <= kDefaultAngleTolerance * scale;
  }
  if (!collinear || along.sign() <= 0) throw UsageError("well-spaced pair: points are not on one ray");
  Scalar small = p.radius2(), big = q.radius2();
  if (big < small) std::swap(small, big);
  return small < bb * bb * big;
}

bool is_well_spaced(const RayPoints& ray, const Scalar& b) {
  if (ray.members.empty()) return true;
  const Scalar bb = comparison_b(b, ray.members.front().mode());
  const Scalar b2 = bb * bb;
  return std::all_of(ray.ratio2.begin(), ray.ratio2.end(), [&](const Scalar& r) { return r < b2; });
}

WellSpacedExtraction extract_max_well_spaced(const RayPoints& ray, const Scalar& b) {
  WellSpacedExtraction out;
  if (ray.members.empty()) {
    out.kept = ray;
    return out;
  }
  const Scalar bb = comparison_b(b, ray.members.front().mode());
  const Scalar b2 = bb * bb;
  std::vector<Scalar> r2;
  for (const auto& p : ray.members) r2.push_back(p.radius2());
  std::size_t last = 0;
  out.kept_positions.push_back(0);
  for (std::size_t k = 1; k < ray.size(); ++k) {
    if (r2[last] < b2 * r2[k]) {
      out.kept_positions.push_back(k);
      last = k;
      continue;
    }
    out.rejected_positions.push_back(k);
    // The preceding neighbour is at least as close as the last kept point, so
    // its ratio with k is >= b as well; the following one is a fallback only.
    if (!(ray.ratio2[k - 1] < b2)) {
      out.t_pairs.emplace_back(ray.members[k - 1], ray.members[k]);
    } else if (k + 1 < ray.size() && !(ray.ratio2[k] < b2)) {
      out.t_pairs.emplace_back(ray.members[k + 1], ray.members[k]);
    }
  }
  out.kept.direction = ray.direction;
  out.kept.side = ray.side;
  for (auto pos : out.kept_positions) {
    out.kept.members.push_back(ray.members[pos]);
    if (!ray.indices.empty()) out.kept.indices.push_back(ray.indices[pos]);
  }
  finalize_ray(out.kept);
  return out;
}

DensityReport density_report(const RayPoints& ray, const Scalar& b, double c, std::size_t n) {
  DensityReport out;
  out.direction = ray.direction;
  out.side = ray.side;
  out.members = ray.size();
  out.b = b;
  out.c = c;
  out.ambient_n = n;
  out.threshold = c * std::sqrt(static_cast<double>(n));
  if (!ray.members.empty()) {
    const Scalar bb = comparison_b(b, ray.members.front().mode());
    const Scalar b2 = bb * bb;
    for (const auto& r : ray.ratio2) {
      if (r < b2) {
        ++out.spaced_pairs;
      } else if (r == b2) {
        ++out.boundary_pairs;
      } else {
        ++out.close_pairs;
      }
    }
  }
  out.is_b_dense = static_cast<double>(out.close_pairs) >= out.threshold;
  return out;
}

std::vector<DensityReport> iterate_dense_lines(const Configuration& config, const Scalar& b, double c,
                                               std::size_t rounds) {
  if (rounds < 1) throw UsageError("iterate_dense_lines needs at least one round");
  std::vector<DensityReport> reports;
  std::vector<Point> remaining;
  for (const auto& p : config) {
    if (!p.is_origin()) remaining.push_back(p);
  }
  for (std::size_t round = 0; round < rounds && !remaining.empty(); ++round) {
    const Configuration current(config.mode(), remaining);
    const LineGroup line = popular_line(current);
    const RayPoints ray = popular_ray(line);
    reports.push_back(density_report(ray, b, c, config.size()));
    std::vector<bool> drop(remaining.size(), false);
    for (auto idx : ray.indices) drop[idx] = true;
    std::vector<Point> next;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      if (!drop[k]) next.push_back(remaining[k]);
    }
    remaining = std::move(next);
  }
  return reports;
}

BucketReport bucket_projection_report(std::span<const Point> circle, const RayPoints& line,
                                      std::optional<Quantization> quantization) {
  if (circle.empty()) throw UsageError("bucket report needs circle points");
  if (line.members.empty()) throw UsageError("bucket report needs line points");
  const Mode mode = circle.front().mode();
  if (line.members.front().mode() != mode) throw UsageError("bucket report: circle and line modes differ");
  const Scalar r2 = circle.front().radius2();
  if (r2.is_zero()) throw UsageError("bucket report: circle of radius 0");
  for (const auto& c : circle) {
    const Scalar cr2 = c.radius2();
    const bool same = mode == Mode::Exact ? cr2 == r2 : std::fabs(cr2.real() - r2.real()) <= 1e-9 * r2.real();
    if (!same) throw UsageError("bucket report: circle points do not share a radius");
  }
  for (std::size_t k = 0; k < line.ratio2.size(); ++k) {
    if (!(line.ratio2[k].to_double() < 1.0) && !(line.ratio2[k] < (mode == Mode::Exact ? Scalar::exact(1) : Scalar::approx(1.0)))) {
      throw UsageError("bucket report: line radii must be strictly increasing");
    }
  }
  const Quantization q = quantization.value_or(mode == Mode::Exact ? Quantization::exact() : Quantization::grid());
  const DotProductSet values = projection_values(circle, line.members, q);

  BucketReport out;
  out.quantization = values.quantization;
  out.circle_size = circle.size();
  out.circle_radius = std::sqrt(r2.to_double());
  const std::size_t m = line.size();
  std::vector<Scalar> line_r2;
  for (const auto& p : line.members) {
    line_r2.push_back(p.radius2());
    out.boundaries.push_back(std::sqrt(p.radius2().to_double()) / out.circle_radius);
  }
  out.counts.assign(m, 0);
  out.bucket_values.assign(m, {});
  out.total_distinct = values.cardinality();

  // Upper bucket edge i is R |l_i|; v <= edge iff v <= 0 or v^2 <= R^2 |l_i|^2.
  auto below_edge = [&](const Scalar& v, std::size_t i) {
    if (mode == Mode::Exact) return v.sign() <= 0 || v * v <= r2 * line_r2[i];
    const double edge = std::sqrt(r2.real() * line_r2[i].real());
    return v.real() <= edge + values.quantization.quantum;
  };
  for (const auto& v : values.values) {
    if (mode == Mode::Exact ? v.sign() <= 0 : v.real() <= values.quantization.quantum) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (below_edge(v, i)) {
        ++out.counts[i];
        out.bucket_values[i].push_back(v);
        break;
      }
    }
  }
  out.max_ratio = line.ratios.empty() ? 0.0 : *std::max_element(line.ratios.begin(), line.ratios.end());
  out.k = std::acos(out.max_ratio) / (2 * kPi);
  out.threshold = static_cast<std::size_t>(std::floor(out.k * static_cast<double>(circle.size()) + 1e-9));
  for (auto count : out.counts) out.pass.push_back(count >= out.threshold);
  return out;
}

}  // namespace dotprod
