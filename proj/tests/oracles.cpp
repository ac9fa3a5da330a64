#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace oracle {

std::size_t distinct_dots(const std::vector<RationalPoint>& pts) {
  std::set<mpq_class> values;
  for (const auto& [px, py] : pts) {
    for (const auto& [qx, qy] : pts) values.insert(px * qx + py * qy);
  }
  return values.size();
}

std::size_t distinct_with_tolerance(std::vector<long double> values, long double tol) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t count = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] > tol) ++count;
  }
  return count;
}

std::size_t circle_distinct_cosines(std::size_t n) {
  std::vector<long double> values;
  const long double pi = std::numbers::pi_v<long double>;
  for (std::size_t d = 0; d < n; ++d) values.push_back(std::cos(2 * pi * d / n));
  return distinct_with_tolerance(values, 1e-12L);
}

std::size_t max_arc_count(const std::vector<double>& angles, double width) {
  const double two_pi = 2 * std::numbers::pi;
  std::size_t best = 0;
  for (double start : angles) {
    std::size_t count = 0;
    for (double a : angles) {
      double offset = a - start;
      if (offset < 0) offset += two_pi;
      if (offset <= width + 1e-12 || offset >= two_pi - 1e-12) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

std::size_t max_well_spaced_subset(const std::vector<mpq_class>& radii, const mpq_class& b) {
  const std::size_t m = radii.size();
  std::size_t best = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    bool ok = true;
    long last = -1;
    std::size_t size = 0;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      if (last >= 0 && !(radii[static_cast<std::size_t>(last)] < b * radii[i])) ok = false;
      last = static_cast<long>(i);
      ++size;
    }
    if (ok) best = std::max(best, size);
  }
  return best;
}

long double log_log_slope(const std::vector<std::pair<double, double>>& rows) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const long double m = rows.size();
  for (const auto& [x, y] : rows) {
    const long double lx = std::log(static_cast<long double>(x));
    const long double ly = std::log(static_cast<long double>(y));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace oracle
