#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dotprod/dot_counter.hpp"
#include "dotprod/generators.hpp"
#include "dotprod/structure.hpp"

namespace dotprod {

// What each sweep row counts: all pairs of the configuration, or only pairs
// between its first N points (the circle part) and the rest (the line part).
enum class CountMode { Full, Cross };

std::string_view to_string(CountMode mode);

// Size expressions in n: an integer, `n`, `n^e`, `c*n` or `c*n^e`. Values
// are rounded to the nearest integer and clamped to at least 1.
std::size_t evaluate_size_expression(std::string_view expression, std::size_t n);

struct ExperimentSpec {
  std::string name = "experiment";
  GeneratorSpec generator;
  // Generator count fields driven by n: keys n, N, M, m, k.
  std::map<std::string, std::string> sizes{{"n", "n"}};
  std::vector<std::size_t> ns;
  Quantization quantization = Quantization::exact();
  CountMode count_mode = CountMode::Full;
  // Per-row attachments: lines, circles, fertility.
  std::vector<std::string> analyses;
  unsigned threads = 0;
  std::string csv_path;
  std::string report_path;
  std::string dat_path;
  std::string timing_path;
};

// Line-oriented `key = value` file; `#` starts a comment. `n` takes a comma
// list or a power-of-two range such as `2^7..2^13`.
ExperimentSpec parse_experiment(std::istream& in, const std::string& source = "<stream>");
ExperimentSpec read_experiment_file(const std::filesystem::path& path);
// Canonical text that parse_experiment reads back to an equal ExperimentSpec.
std::string serialize_experiment(const ExperimentSpec& spec);

// Throws UsageError unless n is strictly increasing with at least two entries
// and the remaining fields are consistent.
void validate_experiment(const ExperimentSpec& spec);

// The generator parameters for one row.
GeneratorSpec realize_generator(const ExperimentSpec& spec, std::size_t n);

struct RowAnalyses {
  std::optional<std::size_t> line_groups;
  std::optional<std::size_t> popular_line_size;
  std::optional<std::size_t> circle_groups;
  std::optional<std::size_t> popular_circle_size;
  std::optional<std::size_t> min_fertility;
};

struct ScalingRow {
  std::size_t n = 0;
  std::size_t points = 0;  // configuration size actually generated
  std::size_t count = 0;   // |D(P_n)| or the cross count
  std::uint64_t ordered_pairs = 0;
  double seconds = 0.0;
  RowAnalyses analyses;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log residuals
};

// Ordinary least squares of ln count on ln n.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& rows);

struct ScalingReport {
  ExperimentSpec spec;
  std::vector<ScalingRow> rows;
  SlopeFit fit;
};

ScalingReport run_scaling(const ExperimentSpec& spec);

// Deterministic outputs; wall time only goes to the timing table.
void write_scaling_csv(std::ostream& out, const ScalingReport& report);
void write_scaling_dat(std::ostream& out, const ScalingReport& report);
void write_scaling_timing(std::ostream& out, const ScalingReport& report);
// Writes every output path set in the experiment.
void write_scaling_outputs(const ScalingReport& report);

// The popular circle against the points of the popular ray lying beyond it.
// UsageError unless the circle has two points and two ray points lie beyond.
BucketReport popular_bucket_report(const Configuration& config, std::optional<Quantization> quantization = {});

enum class Suite { LineLower, CircleCount, BucketBound, WedgeBound, DensityPipeline };

std::string_view to_string(Suite suite);
Suite parse_suite(std::string_view text);

struct SuiteOptions {
  std::string b = "1/2";  // wedge_bound, density_pipeline
  double c = 1.0;         // density_pipeline
  std::optional<Quantization> quantization;
  unsigned threads = 0;
};

struct SuiteCheck {
  std::string label;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // observed - bound; 0 for equalities that hold
};

struct SuiteReport {
  Suite suite = Suite::LineLower;
  std::size_t n = 0;
  std::vector<SuiteCheck> checks;
  // Headline number of the suite: |D| for line_lower and circle_count, the
  // total distinct projections for bucket_bound, the wedge size, the close
  // pair count.
  std::size_t value = 0;
  bool pass = false;
};

// UsageError when the configuration does not fit the suite.
SuiteReport verify_suite(const Configuration& config, Suite suite, const SuiteOptions& options = {});

// Default configuration of each suite for size n: the line {2^k}, the equally
// spaced circle, n unit-circle points plus the line {2, 4, ..., 64}, the exact
// random unit disk, the x-axis ray {10, ..., 9 + n}.
Configuration suite_default_configuration(Suite suite, std::size_t n, std::uint64_t seed = 1);

// The x-axis ray {10, ..., 9 + ray_count} followed by off_ray_count distinct
// exact random points of the disk of radius 4 * (10 + ray_count) off that ray.
Configuration density_pipeline_configuration(std::size_t ray_count, std::size_t off_ray_count, std::uint64_t seed);

}  // namespace dotprod
