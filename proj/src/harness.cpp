#include "dotprod/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "dotprod/errors.hpp"
#include "dotprod/report_json.hpp"

namespace dotprod {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  const double v = parse_number<double>(text, what);
  if (!std::isfinite(v)) throw UsageError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return v;
}

// `2^a..2^b` or a comma list.
std::vector<std::size_t> parse_n_list(std::string_view text) {
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    auto exponent = [&](std::string_view part) {
      const auto t = trim(part);
      if (t.rfind("2^", 0) != 0) throw UsageError("n range must look like 2^a..2^b, got '" + std::string(text) + "'");
      return parse_number<unsigned>(std::string_view(t).substr(2), "n exponent");
    };
    const unsigned lo = exponent(text.substr(0, dots));
    const unsigned hi = exponent(text.substr(dots + 2));
    if (hi >= 40 || lo > hi) throw UsageError("bad n range '" + std::string(text) + "'");
    std::vector<std::size_t> out;
    for (unsigned e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
    return out;
  }
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<std::size_t>(item, "n value"));
  return out;
}

Quantization parse_quantization(std::string_view text) {
  if (text == "exact") return Quantization::exact();
  if (text == "grid") return Quantization::grid();
  if (text.rfind("grid:", 0) == 0) {
    const double q = parse_real(text.substr(5), "grid quantum");
    if (!(q > 0)) throw UsageError("grid quantum must be positive");
    return Quantization::grid(q);
  }
  throw UsageError("quantization must be exact, grid or grid:<quantum>, got '" + std::string(text) + "'");
}

std::string quantization_text(const Quantization& q) {
  if (q.is_exact()) return "exact";
  return q.quantum > 0 ? "grid:" + format_double(q.quantum) : "grid";
}

const std::set<std::string>& size_keys() {
  static const std::set<std::string> keys{"n", "N", "M", "m", "k"};
  return keys;
}

const std::set<std::string>& analysis_names() {
  static const std::set<std::string> names{"lines", "circles", "fertility"};
  return names;
}

template <typename Error>
[[noreturn]] void rethrow_with_n(const Error& e, std::size_t n) {
  throw Error("n = " + std::to_string(n) + ": " + e.what());
}

std::size_t count_bound(std::size_t n) { return 2 * n - 1; }

Scalar parse_b(const std::string& b) { return parse_scalar(b, Mode::Exact); }

}  // namespace

std::string_view to_string(CountMode mode) { return mode == CountMode::Full ? "full" : "cross"; }

std::size_t evaluate_size_expression(std::string_view expression, std::size_t n) {
  const std::string expr = trim(expression);
  if (expr.empty()) throw UsageError("empty size expression");
  double coefficient = 1.0;
  std::string_view rest = expr;
  const auto star = rest.find('*');
  if (star != std::string_view::npos) {
    coefficient = parse_real(trim(rest.substr(0, star)), "size coefficient");
    rest = std::string_view(expr).substr(star + 1);
  }
  const std::string body = trim(rest);
  double value = 0.0;
  if (body == "n") {
    value = coefficient * static_cast<double>(n);
  } else if (body.rfind("n^", 0) == 0) {
    const double e = parse_real(std::string_view(body).substr(2), "size exponent");
    value = coefficient * std::pow(static_cast<double>(n), e);
  } else {
    if (star != std::string_view::npos) throw UsageError("bad size expression '" + expr + "'");
    return std::max<std::size_t>(1, parse_number<std::size_t>(body, "size expression"));
  }
  if (!(value >= 0) || value > 1e15) throw UsageError("size expression '" + expr + "' out of range");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(value)));
}

ExperimentSpec parse_experiment(std::istream& in, const std::string& source) {
  ExperimentSpec spec;
  spec.sizes.clear();
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool have_n = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError(where + "expected key = value");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (!seen.insert(key).second) throw UsageError(where + "repeated key '" + key + "'");
    try {
      auto& g = spec.generator;
      if (key == "name") {
        spec.name = value;
      } else if (key == "kind") {
        g.kind = parse_generator_kind(value);
      } else if (key == "mode") {
        g.mode = parse_mode(value);
      } else if (key == "a") {
        g.a = value;
      } else if (key == "r") {
        g.r = value;
      } else if (key == "d") {
        g.d = value;
      } else if (key == "radius") {
        g.radius = value;
      } else if (key == "b") {
        g.b = value;
      } else if (key == "phase") {
        g.phase = parse_real(value, "phase");
      } else if (key == "radii") {
        g.radii = split_list(value);
      } else if (key == "seed") {
        g.seed = parse_number<std::uint64_t>(value, "seed");
      } else if (key == "n") {
        spec.ns = parse_n_list(value);
        have_n = true;
      } else if (key.rfind("size.", 0) == 0) {
        const std::string field = key.substr(5);
        if (!size_keys().count(field)) throw UsageError("unknown size field '" + field + "'");
        evaluate_size_expression(value, 1);
        spec.sizes[field] = value;
      } else if (key == "count") {
        if (value == "full") {
          spec.count_mode = CountMode::Full;
        } else if (value == "cross") {
          spec.count_mode = CountMode::Cross;
        } else {
          throw UsageError("count must be full or cross");
        }
      } else if (key == "quantization") {
        spec.quantization = parse_quantization(value);
      } else if (key == "analyses") {
        spec.analyses = split_list(value);
      } else if (key == "threads") {
        spec.threads = parse_number<unsigned>(value, "threads");
      } else if (key == "csv") {
        spec.csv_path = value;
      } else if (key == "report") {
        spec.report_path = value;
      } else if (key == "dat") {
        spec.dat_path = value;
      } else if (key == "timing") {
        spec.timing_path = value;
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& e) {
      if (std::string_view(e.what()).rfind(where, 0) == 0) throw;
      throw UsageError(where + e.what());
    }
  }
  if (!have_n) throw UsageError(source + ": missing key 'n'");
  if (spec.sizes.empty()) spec.sizes["n"] = "n";
  validate_experiment(spec);
  return spec;
}

ExperimentSpec read_experiment_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open experiment file " + path.string());
  return parse_experiment(in, path.string());
}

std::string serialize_experiment(const ExperimentSpec& spec) {
  std::ostringstream out;
  const auto& g = spec.generator;
  out << "name = " << spec.name << "\n";
  out << "kind = " << to_string(g.kind) << "\n";
  out << "mode = " << to_string(g.mode) << "\n";
  out << "a = " << g.a << "\n";
  out << "r = " << g.r << "\n";
  out << "d = " << g.d << "\n";
  out << "radius = " << g.radius << "\n";
  out << "b = " << g.b << "\n";
  out << "phase = " << format_double(g.phase) << "\n";
  if (!g.radii.empty()) out << "radii = " << join(g.radii) << "\n";
  if (g.seed) out << "seed = " << *g.seed << "\n";
  std::vector<std::string> ns;
  for (auto n : spec.ns) ns.push_back(std::to_string(n));
  out << "n = " << join(ns) << "\n";
  for (const auto& [field, expr] : spec.sizes) out << "size." << field << " = " << expr << "\n";
  out << "count = " << to_string(spec.count_mode) << "\n";
  out << "quantization = " << quantization_text(spec.quantization) << "\n";
  if (!spec.analyses.empty()) out << "analyses = " << join(spec.analyses) << "\n";
  out << "threads = " << spec.threads << "\n";
  if (!spec.csv_path.empty()) out << "csv = " << spec.csv_path << "\n";
  if (!spec.report_path.empty()) out << "report = " << spec.report_path << "\n";
  if (!spec.dat_path.empty()) out << "dat = " << spec.dat_path << "\n";
  if (!spec.timing_path.empty()) out << "timing = " << spec.timing_path << "\n";
  return out.str();
}

void validate_experiment(const ExperimentSpec& spec) {
  if (spec.ns.size() < 2) throw UsageError("an n-sweep needs at least two n values");
  for (std::size_t i = 0; i < spec.ns.size(); ++i) {
    if (spec.ns[i] == 0) throw UsageError("n values must be positive");
    if (i > 0 && spec.ns[i] <= spec.ns[i - 1]) throw UsageError("n values must be strictly increasing");
  }
  for (const auto& [field, expr] : spec.sizes) {
    if (!size_keys().count(field)) throw UsageError("unknown size field '" + field + "'");
  }
  for (const auto& a : spec.analyses) {
    if (!analysis_names().count(a)) throw UsageError("unknown analysis '" + a + "' (lines, circles, fertility)");
  }
  if (spec.quantization.is_exact() && spec.generator.mode != Mode::Exact) {
    throw UsageError("exact quantization needs mode = exact");
  }
  if (spec.count_mode == CountMode::Cross && spec.generator.kind != GeneratorKind::CirclePlusLine &&
      spec.generator.kind != GeneratorKind::SectorCirclePlusLine) {
    throw UsageError("count = cross needs a circle-plus-line or sector-circle-plus-line generator");
  }
  if (spec.generator.kind == GeneratorKind::RandomDisk && !spec.generator.seed) {
    throw UsageError("random-disk experiments need a seed");
  }
}

GeneratorSpec realize_generator(const ExperimentSpec& spec, std::size_t n) {
  GeneratorSpec g = spec.generator;
  g.n = n;
  for (const auto& [field, expr] : spec.sizes) {
    const std::size_t v = evaluate_size_expression(expr, n);
    if (field == "n") {
      g.n = v;
    } else if (field == "N") {
      g.circle_count = v;
    } else if (field == "M") {
      g.line_count = v;
    } else if (field == "m") {
      g.circles = v;
    } else if (field == "k") {
      g.rays = v;
    }
  }
  return g;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 2) throw UsageError("slope fit needs at least two rows");
  std::set<double> distinct;
  for (const auto& [n, count] : rows) {
    if (!(n > 0) || !(count >= 1)) throw UsageError("slope fit needs n > 0 and counts >= 1");
    distinct.insert(n);
  }
  if (distinct.size() < 2) throw UsageError("slope fit needs two distinct n values");
  const double m = static_cast<double>(rows.size());
  double sx = 0, sy = 0;
  for (const auto& [n, count] : rows) {
    sx += std::log(n);
    sy += std::log(count);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [n, count] : rows) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(count) - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [n, count] : rows) {
    const double e = std::log(count) - (fit.intercept + fit.slope * std::log(n));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

ScalingReport run_scaling(const ExperimentSpec& spec) {
  validate_experiment(spec);
  ScalingReport report;
  report.spec = spec;
  const CountOptions options{spec.threads};
  auto wants = [&](std::string_view a) {
    return std::find(spec.analyses.begin(), spec.analyses.end(), a) != spec.analyses.end();
  };
  for (const std::size_t n : spec.ns) {
    ScalingRow row;
    row.n = n;
    const auto start = std::chrono::steady_clock::now();
    try {
      const GeneratorSpec g = realize_generator(spec, n);
      const Configuration config = generate(g);
      row.points = config.size();
      if (spec.count_mode == CountMode::Full) {
        const DotProductSet set = distinct_dot_products(config, spec.quantization, options);
        row.count = set.cardinality();
        row.ordered_pairs = set.ordered_pairs;
      } else {
        const auto pts = config.points();
        const std::size_t split = std::min(g.circle_count, pts.size());
        if (split == 0 || split == pts.size()) throw UsageError("cross count needs circle and line points");
        const DotProductSet set =
            projection_values(pts.subspan(0, split), pts.subspan(split), spec.quantization, options);
        row.count = set.cardinality();
        row.ordered_pairs = set.ordered_pairs;
      }
      if (wants("lines")) {
        const LineGrouping lines = supporting_lines(config);
        row.analyses.line_groups = lines.groups.size();
        row.analyses.popular_line_size = lines.groups.empty() ? 0 : lines.groups.front().size();
      }
      if (wants("circles")) {
        const CircleGrouping circles = supporting_circles(config);
        row.analyses.circle_groups = circles.proper_count();
        row.analyses.popular_circle_size = circles.proper_count() ? circles.groups.front().size() : 0;
      }
      if (wants("fertility")) {
        const Quantization q = spec.quantization;
        row.analyses.min_fertility = per_point_fertility(config, q, options).minimum;
      }
    } catch (const UsageError& e) {
      rethrow_with_n(e, n);
    } catch (const DomainError& e) {
      rethrow_with_n(e, n);
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(row);
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& row : report.rows) {
    points.emplace_back(static_cast<double>(row.n), static_cast<double>(row.count));
  }
  report.fit = fit_slope(points);
  return report;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  const auto& a = report.spec.analyses;
  auto wants = [&](std::string_view name) { return std::find(a.begin(), a.end(), name) != a.end(); };
  out << "n,points,count,ordered_pairs";
  if (wants("lines")) out << ",line_groups,popular_line";
  if (wants("circles")) out << ",circle_groups,popular_circle";
  if (wants("fertility")) out << ",min_fertility";
  out << "\n";
  for (const auto& row : report.rows) {
    out << row.n << "," << row.points << "," << row.count << "," << row.ordered_pairs;
    if (wants("lines")) out << "," << *row.analyses.line_groups << "," << *row.analyses.popular_line_size;
    if (wants("circles")) out << "," << *row.analyses.circle_groups << "," << *row.analyses.popular_circle_size;
    if (wants("fertility")) out << "," << *row.analyses.min_fertility;
    out << "\n";
  }
}

void write_scaling_dat(std::ostream& out, const ScalingReport& report) {
  out << "# n count\n";
  for (const auto& row : report.rows) out << row.n << " " << row.count << "\n";
}

void write_scaling_timing(std::ostream& out, const ScalingReport& report) {
  out << "n,seconds\n";
  for (const auto& row : report.rows) out << row.n << "," << format_double(row.seconds) << "\n";
}

void write_scaling_outputs(const ScalingReport& report) {
  auto write = [](const std::string& path, auto&& body) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    body(out);
    if (!out) throw UsageError("failed writing " + path);
  };
  const auto& spec = report.spec;
  write(spec.csv_path, [&](std::ostream& o) { write_scaling_csv(o, report); });
  write(spec.report_path, [&](std::ostream& o) { o << dump(to_json(report)); });
  write(spec.dat_path, [&](std::ostream& o) { write_scaling_dat(o, report); });
  write(spec.timing_path, [&](std::ostream& o) { write_scaling_timing(o, report); });
}

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::LineLower:
      return "line_lower";
    case Suite::CircleCount:
      return "circle_count";
    case Suite::BucketBound:
      return "bucket_bound";
    case Suite::WedgeBound:
      return "wedge_bound";
    case Suite::DensityPipeline:
      return "density_pipeline";
  }
  return "?";
}

Suite parse_suite(std::string_view text) {
  for (Suite s : {Suite::LineLower, Suite::CircleCount, Suite::BucketBound, Suite::WedgeBound,
                  Suite::DensityPipeline}) {
    if (to_string(s) == text) return s;
  }
  throw UsageError("unknown suite '" + std::string(text) +
                   "' (line_lower, circle_count, bucket_bound, wedge_bound, density_pipeline)");
}

namespace {

Quantization suite_quantization(const Configuration& config, const SuiteOptions& options) {
  if (options.quantization) return *options.quantization;
  return config.mode() == Mode::Exact ? Quantization::exact() : Quantization::grid();
}

SuiteCheck at_least(std::string label, double observed, double bound) {
  return {std::move(label), observed >= bound, observed, bound, observed - bound};
}

}  // namespace

SuiteReport verify_suite(const Configuration& config, Suite suite, const SuiteOptions& options) {
  if (config.empty()) throw UsageError("verify: empty configuration");
  SuiteReport report;
  report.suite = suite;
  report.n = config.size();
  const CountOptions count_options{options.threads};
  switch (suite) {
    case Suite::LineLower: {
      make_ray(std::vector<Point>(config.begin(), config.end()));
      const auto set = distinct_dot_products(config, suite_quantization(config, options), count_options);
      report.value = set.cardinality();
      report.checks.push_back(at_least("|D| >= 2n - 1", static_cast<double>(report.value),
                                       static_cast<double>(count_bound(config.size()))));
      break;
    }
    case Suite::CircleCount: {
      const CircleGrouping circles = supporting_circles(config);
      if (circles.proper_count() != 1 || circles.groups.size() != 1) {
        throw UsageError("circle_count needs points on one circle centred at the origin");
      }
      const auto set = distinct_dot_products(config, suite_quantization(config, options), count_options);
      report.value = set.cardinality();
      const double expected = static_cast<double>(config.size() / 2 + 1);
      const double observed = static_cast<double>(report.value);
      report.checks.push_back({"|D| == floor(n/2) + 1", observed == expected, observed, expected, observed - expected});
      break;
    }
    case Suite::BucketBound: {
      const BucketReport buckets = popular_bucket_report(config, options.quantization);
      report.value = buckets.total_distinct;
      for (std::size_t i = 1; i < buckets.counts.size(); ++i) {
        report.checks.push_back(at_least("|B_" + std::to_string(i) + "| >= floor(kN)",
                                         static_cast<double>(buckets.counts[i]),
                                         static_cast<double>(buckets.threshold)));
      }
      report.checks.push_back(at_least("total >= (M - 1) floor(kN)", static_cast<double>(buckets.total_distinct),
                                       static_cast<double>((buckets.counts.size() - 1) * buckets.threshold)));
      break;
    }
    case Suite::WedgeBound: {
      const WedgeResult wedge = max_wedge(config, parse_b(options.b));
      report.value = wedge.members.size();
      report.checks.push_back(at_least("|wedge| >= ceil(arccos(b) / 2pi * n)", static_cast<double>(report.value),
                                       static_cast<double>(wedge.guaranteed)));
      break;
    }
    case Suite::DensityPipeline: {
      const LineGroup line = popular_line(config);
      const RayPoints ray = popular_ray(line);
      const DensityReport density = density_report(ray, parse_b(options.b), options.c, config.size());
      report.value = density.close_pairs;
      report.checks.push_back(at_least("close pairs >= c sqrt(n)", static_cast<double>(density.close_pairs),
                                       density.threshold));
      break;
    }
  }
  report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const SuiteCheck& c) { return c.pass; });
  return report;
}

BucketReport popular_bucket_report(const Configuration& config, std::optional<Quantization> quantization) {
  const CircleGrouping circles = supporting_circles(config);
  if (circles.proper_count() == 0 || circles.groups.front().size() < 2) {
    throw UsageError("bucket report needs a circle with at least two points");
  }
  const CircleGroup& circle = circles.groups.front();
  const RayPoints ray = popular_ray(popular_line(config));
  std::vector<Point> outside;
  std::vector<std::size_t> indices;
  for (std::size_t k = 0; k < ray.size(); ++k) {
    const Scalar r2 = ray.members[k].radius2();
    const bool beyond =
        config.mode() == Mode::Exact ? circle.radius2 < r2 : r2.real() > circle.radius2.real() * (1 + 1e-9);
    if (beyond) {
      outside.push_back(ray.members[k]);
      indices.push_back(ray.indices[k]);
    }
  }
  if (outside.size() < 2) throw UsageError("bucket report needs two popular-ray points outside the circle");
  return bucket_projection_report(circle.members, make_ray(outside, indices), quantization);
}

Configuration suite_default_configuration(Suite suite, std::size_t n, std::uint64_t seed) {
  switch (suite) {
    case Suite::LineLower:
      return gen_geometric_line(Scalar::exact(1), Scalar::exact(2), n);
    case Suite::CircleCount:
      return gen_equally_spaced_circle(n, 1.0);
    case Suite::BucketBound:
      return gen_circle_plus_line(n, 6, 2.0, 2.0);
    case Suite::WedgeBound:
      return gen_random_disk(n, seed, Scalar::exact(1));
    case Suite::DensityPipeline:
      return density_pipeline_configuration(n, 0, seed);
  }
  throw UsageError("unknown suite");
}

Configuration density_pipeline_configuration(std::size_t ray_count, std::size_t off_ray_count, std::uint64_t seed) {
  if (ray_count == 0) throw UsageError("density pipeline needs at least one ray point");
  std::vector<Point> pts;
  pts.reserve(ray_count + off_ray_count);
  for (std::size_t k = 0; k < ray_count; ++k) {
    pts.emplace_back(Scalar::exact(static_cast<long>(10 + k)), Scalar::exact(0));
  }
  if (off_ray_count > 0) {
    const long radius = 4 * (10 + static_cast<long>(ray_count));
    const Configuration disk = gen_random_disk(off_ray_count + off_ray_count / 16 + 16, seed, Scalar::exact(radius));
    std::size_t taken = 0;
    for (const auto& p : disk) {
      if (taken == off_ray_count) break;
      if (p.is_origin() || (p.y.is_zero() && p.x.sign() > 0)) continue;
      pts.push_back(p);
      ++taken;
    }
    if (taken < off_ray_count) throw UsageError("density pipeline: not enough off-ray points drawn");
  }
  return Configuration(Mode::Exact, std::move(pts));
}

}  // namespace dotprod
