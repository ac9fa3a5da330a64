#pragma once

#include <array>
#include <cstdint>

namespace dotprod {

// xoshiro256** (Blackman & Vigna, 2018) with its state filled from the seed by
// splitmix64. Both algorithms are fixed here so that seeded outputs are
// portable across compilers and standard libraries; std distributions are
// deliberately not used on top of it.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  // Uniform integer in [lo, hi], by rejection (no modulo bias).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace dotprod
