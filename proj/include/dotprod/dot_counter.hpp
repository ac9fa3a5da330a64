#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dotprod/point.hpp"

namespace dotprod {

// How dot values are identified. Exact compares rationals; Grid(q) treats two
// doubles as equal iff round(v / q) agree. A Grid quantum of 0 means "pick
// the default", 1e-9 * max(1, max |v|).
struct Quantization {
  enum class Kind { Exact, Grid };
  Kind kind = Kind::Exact;
  double quantum = 0.0;

  static Quantization exact() { return {Kind::Exact, 0.0}; }
  static Quantization grid(double q = 0.0) { return {Kind::Grid, q}; }
  bool is_exact() const { return kind == Kind::Exact; }

  friend bool operator==(const Quantization&, const Quantization&) = default;
};

struct CountOptions {
  // Worker threads for the pair space; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

struct DotProductSet {
  // Strictly increasing. Exact values are rationals; Grid values are the
  // smallest double seen in each grid cell.
  std::vector<Scalar> values;
  // Resolved quantization (a Grid quantum is never 0 here).
  Quantization quantization;
  // Ordered pairs covered: n^2 for a configuration, |C| |L| for cross pairs.
  std::uint64_t ordered_pairs = 0;
  // Smallest gap between consecutive distinct values; empty below two values.
  std::optional<double> min_gap;

  std::size_t cardinality() const { return values.size(); }
};

struct FertilityReport {
  // counts[i] = |{p_i . q : q in P}|.
  std::vector<std::size_t> counts;
  std::size_t minimum = 0;
  std::size_t minimum_index = 0;
};

// |D(P)| over all pairs (p_i, p_j), self pairs included.
DotProductSet distinct_dot_products(const Configuration& config, Quantization quantization,
                                    CountOptions options = {});

// Independent check of the Exact path: every one of the n^2 products as a
// GMP rational, sorted, strictly increasing runs counted.
DotProductSet brute_force_oracle(const Configuration& config);

FertilityReport per_point_fertility(const Configuration& config, Quantization quantization,
                                    CountOptions options = {});

// Distinct values c . l over c in circle, l in line only.
DotProductSet projection_values(std::span<const Point> circle, std::span<const Point> line,
                                Quantization quantization, CountOptions options = {});

// Default grid quantum for dot values bounded by max_abs_value.
double default_quantum(double max_abs_value);

}  // namespace dotprod
