#pragma once

// Pair-space kernels behind the dot counter. Not part of the public API.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "dotprod/point.hpp"

namespace dotprod::detail {

// Exact points scaled by one common denominator so every coordinate is an
// integer: (X, Y) = L (x, y). Dot values are then (X X' + Y Y') / L^2.
struct IntegerImage {
  std::vector<mpz_class> ax, ay, bx, by;
  mpz_class denominator;
  std::size_t max_bits = 0;  // bit length of the largest |coordinate|
};

IntegerImage integer_image(std::span<const Point> a, std::span<const Point> b);

enum class PairShape {
  UpperTriangle,  // a == b, pairs (i, j) with j >= i
  Rectangle,      // all (i, j)
};

// Sorted distinct integers X_i X_j + Y_i Y_j over the pair space. Small images
// run on __int128; larger ones in a residue number system whose modulus
// exceeds every possible difference, so residue equality is exact equality.
std::vector<mpz_class> distinct_integer_dots(const IntegerImage& image, PairShape shape, unsigned threads);

// Distinct count of row i (all j, including j = i) for each i. Requires a == b.
std::vector<std::size_t> row_distinct_integer_dots(const IntegerImage& image, unsigned threads);

struct DoublePoints {
  std::vector<double> x, y;
};

DoublePoints to_doubles(std::span<const Point> points);

// Smallest value per grid cell round(v / quantum), in increasing order.
std::vector<double> distinct_grid_dots(const DoublePoints& a, const DoublePoints& b, PairShape shape, double quantum,
                                       unsigned threads);

std::vector<std::size_t> row_distinct_grid_dots(const DoublePoints& a, double quantum, unsigned threads);

// Number of worker threads to use for `requested` (0 = hardware) over `rows`.
unsigned resolve_threads(unsigned requested, std::size_t rows);

// The first `count` primes below 2^26, descending.
std::vector<std::uint32_t> residue_primes(std::size_t count);

}  // namespace dotprod::detail
