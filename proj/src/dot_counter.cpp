#include "dotprod/dot_counter.hpp"

#include <algorithm>
#include <cmath>

#include "dotprod/errors.hpp"
#include "dotprod/geometry.hpp"
#include "residue_kernel.hpp"

namespace dotprod {

namespace {

void check_quantization(Mode mode, const Quantization& quantization) {
  if (quantization.is_exact()) {
    if (mode != Mode::Exact) throw UsageError("exact counting requires an exact configuration");
  } else if (quantization.quantum < 0 || !std::isfinite(quantization.quantum)) {
    throw UsageError("grid quantum must be positive");
  }
}

double max_radius(const detail::DoublePoints& d) {
  double m = 0;
  for (std::size_t i = 0; i < d.x.size(); ++i) m = std::max(m, std::hypot(d.x[i], d.y[i]));
  return m;
}

DotProductSet from_integers(std::vector<mpz_class> ints, const mpz_class& denominator, std::uint64_t pairs) {
  DotProductSet out;
  out.quantization = Quantization::exact();
  out.ordered_pairs = pairs;
  const mpz_class denom2 = denominator * denominator;
  if (ints.size() >= 2) {
    mpz_class best = ints[1] - ints[0];
    for (std::size_t k = 2; k < ints.size(); ++k) {
      mpz_class gap = ints[k] - ints[k - 1];
      if (gap < best) best = gap;
    }
    out.min_gap = mpq_class(best, denom2).get_d();
  }
  out.values.reserve(ints.size());
  for (auto& v : ints) out.values.push_back(Scalar::exact(mpq_class(v, denom2)));
  return out;
}

DotProductSet from_doubles(const std::vector<double>& vals, double quantum, std::uint64_t pairs) {
  DotProductSet out;
  out.quantization = Quantization::grid(quantum);
  out.ordered_pairs = pairs;
  if (vals.size() >= 2) {
    double best = vals[1] - vals[0];
    for (std::size_t k = 2; k < vals.size(); ++k) best = std::min(best, vals[k] - vals[k - 1]);
    out.min_gap = best;
  }
  out.values.reserve(vals.size());
  for (double v : vals) out.values.push_back(Scalar::approx(v));
  return out;
}

double resolve_quantum(const Quantization& q, double max_abs_value) {
  return q.quantum > 0 ? q.quantum : default_quantum(max_abs_value);
}

}  // namespace

double default_quantum(double max_abs_value) { return 1e-9 * std::max(1.0, max_abs_value); }

DotProductSet distinct_dot_products(const Configuration& config, Quantization quantization, CountOptions options) {
  check_quantization(config.mode(), quantization);
  const std::uint64_t pairs = static_cast<std::uint64_t>(config.size()) * config.size();
  if (quantization.is_exact()) {
    const auto image = detail::integer_image(config.points(), config.points());
    return from_integers(detail::distinct_integer_dots(image, detail::PairShape::UpperTriangle, options.threads),
                         image.denominator, pairs);
  }
  const auto d = detail::to_doubles(config.points());
  const double r = max_radius(d);
  // max |p . q| over the configuration is attained at a self pair.
  const double quantum = resolve_quantum(quantization, r * r);
  return from_doubles(detail::distinct_grid_dots(d, d, detail::PairShape::UpperTriangle, quantum, options.threads),
                      quantum, pairs);
}

DotProductSet brute_force_oracle(const Configuration& config) {
  if (config.mode() != Mode::Exact) throw UsageError("the brute-force oracle needs an exact configuration");
  std::vector<mpq_class> all;
  all.reserve(config.size() * config.size());
  for (const auto& p : config) {
    for (const auto& q : config) {
      mpq_class v = p.x.rational() * q.x.rational() + p.y.rational() * q.y.rational();
      all.push_back(v);
    }
  }
  std::sort(all.begin(), all.end());
  DotProductSet out;
  out.quantization = Quantization::exact();
  out.ordered_pairs = all.size();
  std::optional<mpq_class> best_gap;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (k > 0 && all[k] == all[k - 1]) continue;
    if (!out.values.empty()) {
      mpq_class gap = all[k] - out.values.back().rational();
      if (!best_gap || gap < *best_gap) best_gap = gap;
    }
    out.values.push_back(Scalar::exact(all[k]));
  }
  if (best_gap) out.min_gap = best_gap->get_d();
  return out;
}

FertilityReport per_point_fertility(const Configuration& config, Quantization quantization, CountOptions options) {
  check_quantization(config.mode(), quantization);
  FertilityReport report;
  if (quantization.is_exact()) {
    const auto image = detail::integer_image(config.points(), config.points());
    report.counts = detail::row_distinct_integer_dots(image, options.threads);
  } else {
    const auto d = detail::to_doubles(config.points());
    const double r = max_radius(d);
    report.counts = detail::row_distinct_grid_dots(d, resolve_quantum(quantization, r * r), options.threads);
  }
  if (!report.counts.empty()) {
    const auto it = std::min_element(report.counts.begin(), report.counts.end());
    report.minimum = *it;
    report.minimum_index = static_cast<std::size_t>(it - report.counts.begin());
  }
  return report;
}

DotProductSet projection_values(std::span<const Point> circle, std::span<const Point> line, Quantization quantization,
                                CountOptions options) {
  if (circle.empty() || line.empty()) throw UsageError("projection values need two nonempty point sets");
  const Mode mode = circle.front().mode();
  for (const auto& p : circle) {
    if (p.mode() != mode) throw UsageError("projection values: mixed modes");
  }
  for (const auto& p : line) {
    if (p.mode() != mode) throw UsageError("projection values: mixed modes");
  }
  check_quantization(mode, quantization);
  const std::uint64_t pairs = static_cast<std::uint64_t>(circle.size()) * line.size();
  if (quantization.is_exact()) {
    const auto image = detail::integer_image(circle, line);
    return from_integers(detail::distinct_integer_dots(image, detail::PairShape::Rectangle, options.threads),
                         image.denominator, pairs);
  }
  const auto c = detail::to_doubles(circle);
  const auto l = detail::to_doubles(line);
  double max_abs = 0;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    for (std::size_t j = 0; j < l.x.size(); ++j) {
      max_abs = std::max(max_abs, std::fabs(c.x[i] * l.x[j] + c.y[i] * l.y[j]));
    }
  }
  const double quantum = resolve_quantum(quantization, max_abs);
  return from_doubles(detail::distinct_grid_dots(c, l, detail::PairShape::Rectangle, quantum, options.threads), quantum,
                      pairs);
}

}  // namespace dotprod
