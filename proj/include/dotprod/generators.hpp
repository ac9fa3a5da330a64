#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dotprod/point.hpp"

namespace dotprod {

// Points (a r^k, 0), k = 0..n-1. Mode follows a and r.
Configuration gen_geometric_line(const Scalar& a, const Scalar& r, std::size_t n);

// Points (a + k d, 0), k = 0..n-1.
Configuration gen_arithmetic_line(const Scalar& a, const Scalar& d, std::size_t n);

// R (cos(phase + 2 pi k / n), sin(phase + 2 pi k / n)); always Approx.
Configuration gen_equally_spaced_circle(std::size_t n, double radius, double phase = 0.0);

// N equispaced unit-circle points (phase 0) followed by the geometric line
// a r^k, k < M, converted to Approx. Coincident points are rejected.
Configuration gen_circle_plus_line(std::size_t circle_count, std::size_t line_count, double r, double a);

// circle_count unit-circle points at angles arccos(b) (j + 1) / N, j < N,
// i.e. equispaced in the sector (0, arccos b], followed by the line points
// (radius, 0). Consecutive radii must be strictly increasing with ratio < b.
Configuration gen_sector_circle_plus_line(std::size_t circle_count, const std::vector<Scalar>& radii,
                                          const Scalar& b);

// m circles of radius r^i crossed with k rays at angle 2 pi j / k; Approx.
Configuration gen_polar_lattice(std::size_t circles, std::size_t rays, double r);

// n distinct points uniform in the disk of radius R, from Xoshiro256(seed) by
// rejection sampling on the bounding square. Approx points are
// R (2u - 1) per axis. Exact points lie on the grid 2^-20 Z^2.
Configuration gen_random_disk(std::size_t n, std::uint64_t seed, const Scalar& radius);

inline constexpr int kRandomDiskGridBits = 20;

enum class GeneratorKind {
  GeometricLine,
  ArithmeticLine,
  EquallySpacedCircle,
  CirclePlusLine,
  SectorCirclePlusLine,
  PolarLattice,
  RandomDisk,
};

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view text);

// Parameters for every kind. Scalars are kept as literals and parsed in the
// requested mode at generation time; unused fields are ignored.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::GeometricLine;
  Mode mode = Mode::Exact;
  std::string a = "1";
  std::string r = "2";
  std::string d = "1";
  std::string radius = "1";  // R
  std::string b = "1/2";
  double phase = 0.0;
  std::size_t n = 1;
  std::size_t circle_count = 1;  // N
  std::size_t line_count = 1;    // M
  std::size_t circles = 1;       // m
  std::size_t rays = 1;          // k
  std::vector<std::string> radii;
  std::optional<std::uint64_t> seed;
};

// Validates the parameters and builds the configuration.
Configuration generate(const GeneratorSpec& spec);

}  // namespace dotprod
