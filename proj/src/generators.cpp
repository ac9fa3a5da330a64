#include "dotprod/generators.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "dotprod/errors.hpp"
#include "dotprod/prng.hpp"

namespace dotprod {

namespace {

Scalar zero_like(const Scalar& s) { return s.is_exact() ? Scalar::exact(0) : Scalar::approx(0.0); }
Scalar one_like(const Scalar& s) { return s.is_exact() ? Scalar::exact(1) : Scalar::approx(1.0); }

void require_count(std::size_t n, const char* name) {
  if (n < 1) throw UsageError(std::string(name) + " must be at least 1");
}

}  // namespace

Configuration gen_geometric_line(const Scalar& a, const Scalar& r, std::size_t n) {
  require_same_mode(a, r, "geometric line parameters");
  require_count(n, "n");
  if (a.is_zero()) throw UsageError("geometric line: a = 0 places every point at the origin");
  if (r.sign() <= 0) throw UsageError("geometric line: ratio r must be positive");
  if (r == one_like(r)) throw UsageError("geometric line: ratio r = 1 repeats the first point");
  std::vector<Point> pts;
  pts.reserve(n);
  Scalar x = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (x.is_zero()) throw UsageError("geometric line: point " + std::to_string(k) + " underflows to the origin");
    pts.emplace_back(x, zero_like(a));
    if (k + 1 < n) x = x * r;
  }
  return Configuration(a.mode(), std::move(pts));
}

Configuration gen_arithmetic_line(const Scalar& a, const Scalar& d, std::size_t n) {
  require_same_mode(a, d, "arithmetic line parameters");
  require_count(n, "n");
  if (d.is_zero()) throw UsageError("arithmetic line: step d must be nonzero");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar kk = a.is_exact() ? Scalar::exact(static_cast<long>(k)) : Scalar::approx(static_cast<double>(k));
    const Scalar x = a + kk * d;
    if (x.is_zero()) throw UsageError("arithmetic line: point " + std::to_string(k) + " is the origin");
    pts.emplace_back(x, zero_like(a));
  }
  return Configuration(a.mode(), std::move(pts));
}

Configuration gen_equally_spaced_circle(std::size_t n, double radius, double phase) {
  require_count(n, "n");
  if (!(radius > 0)) throw UsageError("circle radius must be positive");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = phase + 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    pts.emplace_back(Scalar::approx(radius * std::cos(t)), Scalar::approx(radius * std::sin(t)));
  }
  return Configuration(Mode::Approx, std::move(pts));
}

Configuration gen_circle_plus_line(std::size_t circle_count, std::size_t line_count, double r, double a) {
  if (!(r > 1)) throw UsageError("circle plus line: ratio r must exceed 1");
  if (!(a > 0)) throw UsageError("circle plus line: line start a must be positive");
  const Configuration circle = gen_equally_spaced_circle(circle_count, 1.0, 0.0);
  const Configuration line = gen_geometric_line(Scalar::approx(a), Scalar::approx(r), line_count);
  std::vector<Point> pts(circle.begin(), circle.end());
  for (const auto& p : line) {
    for (const auto& c : circle) {
      if (c == p) {
        throw UsageError("circle plus line: line point (" + p.x.to_string() + ", " + p.y.to_string() +
                         ") coincides with a circle point");
      }
    }
    pts.push_back(p);
  }
  return Configuration(Mode::Approx, std::move(pts));
}

Configuration gen_sector_circle_plus_line(std::size_t circle_count, const std::vector<Scalar>& radii,
                                          const Scalar& b) {
  require_count(circle_count, "N");
  if (radii.empty()) throw UsageError("sector circle plus line: at least one line radius is required");
  if (b.sign() <= 0 || b >= one_like(b)) throw UsageError("sector circle plus line: b must lie in (0,1)");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require_same_mode(radii[i], b, "sector parameters");
    if (radii[i].sign() <= 0) throw UsageError("sector circle plus line: radii must be positive");
    if (i == 0) continue;
    if (radii[i] <= radii[i - 1]) throw UsageError("sector circle plus line: radii must be strictly increasing");
    if (radii[i - 1] >= b * radii[i]) {
      throw UsageError("sector circle plus line: ratio " + radii[i - 1].to_string() + " / " + radii[i].to_string() +
                       " is not below b");
    }
  }
  const double width = std::acos(b.to_double());
  std::vector<Point> pts;
  pts.reserve(circle_count + radii.size());
  for (std::size_t j = 0; j < circle_count; ++j) {
    const double t = width * static_cast<double>(j + 1) / static_cast<double>(circle_count);
    pts.emplace_back(Scalar::approx(std::cos(t)), Scalar::approx(std::sin(t)));
  }
  for (const auto& rad : radii) pts.emplace_back(Scalar::approx(rad.to_double()), Scalar::approx(0.0));
  return Configuration(Mode::Approx, std::move(pts));
}

Configuration gen_polar_lattice(std::size_t circles, std::size_t rays, double r) {
  require_count(circles, "m");
  require_count(rays, "k");
  if (!(r > 1)) throw UsageError("polar lattice: ratio r must exceed 1");
  std::vector<Point> pts;
  pts.reserve(circles * rays);
  double radius = 1.0;
  for (std::size_t i = 0; i < circles; ++i) {
    for (std::size_t j = 0; j < rays; ++j) {
      const double t = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(rays);
      pts.emplace_back(Scalar::approx(radius * std::cos(t)), Scalar::approx(radius * std::sin(t)));
    }
    radius *= r;
  }
  return Configuration(Mode::Approx, std::move(pts));
}

Configuration gen_random_disk(std::size_t n, std::uint64_t seed, const Scalar& radius) {
  require_count(n, "n");
  if (radius.sign() <= 0) throw UsageError("random disk: radius must be positive");
  Xoshiro256 rng(seed);
  std::vector<Point> pts;
  pts.reserve(n);
  const std::size_t max_draws = 1000 * n + 1000000;
  std::size_t draws = 0;
  if (radius.is_exact()) {
    const mpq_class scaled = radius.rational() * mpq_class(mpz_class(1) << kRandomDiskGridBits);
    const mpz_class bound_z = mpz_class(scaled.get_num() / scaled.get_den());
    if (!bound_z.fits_slong_p() || bound_z > (1L << 40)) throw UsageError("random disk: radius too large for the exact grid");
    const long bound = bound_z.get_si();
    const mpq_class scaled2 = scaled * scaled;
    const mpq_class grid(1, mpz_class(1) << kRandomDiskGridBits);
    std::set<std::pair<long, long>> seen;
    while (pts.size() < n) {
      if (++draws > max_draws) throw UsageError("random disk: could not place n distinct grid points");
      const long i = rng.uniform_int(-bound, bound);
      const long j = rng.uniform_int(-bound, bound);
      if (mpq_class(mpz_class(i) * i + mpz_class(j) * j) > scaled2) continue;
      if (!seen.emplace(i, j).second) continue;
      pts.emplace_back(Scalar::exact(mpq_class(grid * i)), Scalar::exact(mpq_class(grid * j)));
    }
    return Configuration(Mode::Exact, std::move(pts));
  }
  const double rad = radius.real();
  std::set<std::pair<double, double>> seen;
  while (pts.size() < n) {
    if (++draws > max_draws) throw UsageError("random disk: could not place n distinct points");
    const double x = rad * (2 * rng.uniform01() - 1);
    const double y = rad * (2 * rng.uniform01() - 1);
    if (x * x + y * y > rad * rad) continue;
    const Point p(Scalar::approx(x), Scalar::approx(y));
    if (!seen.emplace(p.x.real(), p.y.real()).second) continue;
    pts.push_back(p);
  }
  return Configuration(Mode::Approx, std::move(pts));
}

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::GeometricLine: return "geometric-line";
    case GeneratorKind::ArithmeticLine: return "arithmetic-line";
    case GeneratorKind::EquallySpacedCircle: return "circle";
    case GeneratorKind::CirclePlusLine: return "circle-plus-line";
    case GeneratorKind::SectorCirclePlusLine: return "sector-circle-plus-line";
    case GeneratorKind::PolarLattice: return "polar-lattice";
    case GeneratorKind::RandomDisk: return "random-disk";
  }
  return "?";
}

GeneratorKind parse_generator_kind(std::string_view text) {
  for (auto kind : {GeneratorKind::GeometricLine, GeneratorKind::ArithmeticLine, GeneratorKind::EquallySpacedCircle,
                    GeneratorKind::CirclePlusLine, GeneratorKind::SectorCirclePlusLine, GeneratorKind::PolarLattice,
                    GeneratorKind::RandomDisk}) {
    if (text == to_string(kind)) return kind;
  }
  throw UsageError("unknown generator kind '" + std::string(text) + "'");
}

Configuration generate(const GeneratorSpec& spec) {
  const bool random = spec.kind == GeneratorKind::RandomDisk;
  if (random != spec.seed.has_value()) {
    throw UsageError(random ? "random-disk requires a seed" : "seed is only meaningful for random-disk");
  }
  auto approx_only = [&] {
    if (spec.mode != Mode::Approx) {
      throw UsageError(std::string(to_string(spec.kind)) + " produces approximate coordinates; use mode approx");
    }
  };
  auto approx_param = [](const std::string& s) { return parse_scalar(s, Mode::Approx).real(); };
  switch (spec.kind) {
    case GeneratorKind::GeometricLine:
      return gen_geometric_line(parse_scalar(spec.a, spec.mode), parse_scalar(spec.r, spec.mode), spec.n);
    case GeneratorKind::ArithmeticLine:
      return gen_arithmetic_line(parse_scalar(spec.a, spec.mode), parse_scalar(spec.d, spec.mode), spec.n);
    case GeneratorKind::EquallySpacedCircle:
      approx_only();
      return gen_equally_spaced_circle(spec.n, approx_param(spec.radius), spec.phase);
    case GeneratorKind::CirclePlusLine:
      approx_only();
      return gen_circle_plus_line(spec.circle_count, spec.line_count, approx_param(spec.r), approx_param(spec.a));
    case GeneratorKind::SectorCirclePlusLine: {
      approx_only();
      std::vector<Scalar> radii;
      for (const auto& s : spec.radii) radii.push_back(parse_scalar(s, Mode::Exact));
      return gen_sector_circle_plus_line(spec.circle_count, radii, parse_scalar(spec.b, Mode::Exact));
    }
    case GeneratorKind::PolarLattice:
      approx_only();
      return gen_polar_lattice(spec.circles, spec.rays, approx_param(spec.r));
    case GeneratorKind::RandomDisk:
      return gen_random_disk(spec.n, *spec.seed, parse_scalar(spec.radius, spec.mode));
  }
  throw UsageError("unhandled generator kind");
}

}  // namespace dotprod
