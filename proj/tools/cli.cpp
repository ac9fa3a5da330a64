#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "dotprod/dot_counter.hpp"
#include "dotprod/errors.hpp"
#include "dotprod/generators.hpp"
#include "dotprod/harness.hpp"
#include "dotprod/points_io.hpp"
#include "dotprod/report_json.hpp"
#include "dotprod/structure.hpp"

namespace dotprod {

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quantization_text(const Quantization& q) {
  return q.is_exact() ? "exact" : "grid " + num(q.quantum);
}

struct Globals {
  unsigned threads = 0;
  std::string format = "text";
  std::string output;

  bool structured() const { return format == "structured"; }
};

void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.output, std::ios::binary);
  if (!file) throw UsageError("cannot write " + g.output);
  file << text;
  if (!file) throw UsageError("failed writing " + g.output);
}

Configuration load_nonempty(const std::string& path) {
  Configuration config = read_points_file(path);
  if (config.empty()) throw UsageError(path + ": no points");
  return config;
}

// generate -------------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::string mode = "exact";
  GeneratorSpec spec;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_generate(CLI::App& app, GenerateArgs& a) {
  auto* cmd = app.add_subcommand("generate", "Build a point configuration and write it as a points file");
  cmd->configurable();
  cmd->add_option("--kind", a.kind, "geometric-line, arithmetic-line, circle, circle-plus-line, "
                                    "sector-circle-plus-line, polar-lattice, random-disk")
      ->required();
  cmd->add_option("--mode", a.mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  cmd->add_option("--a", a.spec.a, "Line start a");
  cmd->add_option("--r", a.spec.r, "Ratio r");
  cmd->add_option("--d", a.spec.d, "Arithmetic step d");
  cmd->add_option("--radius", a.spec.radius, "Circle or disk radius R");
  cmd->add_option("--b", a.spec.b, "Sector parameter b");
  cmd->add_option("--phase", a.spec.phase, "Circle phase");
  cmd->add_option("--n", a.spec.n, "Number of points n");
  cmd->add_option("--N", a.spec.circle_count, "Circle points N");
  cmd->add_option("--M", a.spec.line_count, "Line points M");
  cmd->add_option("--m", a.spec.circles, "Polar lattice circles m");
  cmd->add_option("--k", a.spec.rays, "Polar lattice rays k");
  cmd->add_option("--radii", a.spec.radii, "Sector line radii")->delimiter(',');
  a.seed_opt = cmd->add_option("--seed", a.seed, "Random seed");
}

int run_generate(GenerateArgs& a, const Globals& g, std::ostream& out) {
  a.spec.kind = parse_generator_kind(a.kind);
  a.spec.mode = parse_mode(a.mode);
  if (a.seed_opt->count() > 0) a.spec.seed = a.seed;
  const Configuration config = generate(a.spec);
  std::ostringstream text;
  write_points(text, config);
  emit(g, out, text.str());
  return kExitOk;
}

// count ----------------------------------------------------------------------

struct CountArgs {
  std::string file;
  std::vector<std::string> cross;
  double quantum = 0.0;
  bool exact = false;
  bool per_point = false;
  bool values = false;
};

void add_count(CLI::App& app, CountArgs& a) {
  auto* cmd = app.add_subcommand("count", "Count distinct dot products of a points file");
  cmd->configurable();
  cmd->add_option("file,--file", a.file, "Points file");
  auto* cross = cmd->add_option("--cross", a.cross, "Count only pairs between two points files A and B")
                    ->expected(2);
  auto* quantum = cmd->add_option("--quantum", a.quantum, "Grid quantum (default 1e-9 max(1, max|v|))")
                      ->check(CLI::PositiveNumber);
  cmd->add_flag("--exact", a.exact, "Exact rational counting (exact files only)")->excludes(quantum);
  cmd->add_flag("--per-point", a.per_point, "Also report per-point counts")->excludes(cross);
  cmd->add_flag("--values", a.values, "List the distinct values");
}

int run_count(const CountArgs& a, const Globals& g, std::ostream& out) {
  if (a.file.empty() == a.cross.empty()) throw UsageError("count needs a points file or --cross A B");
  const Quantization q = a.exact ? Quantization::exact() : Quantization::grid(a.quantum);
  const CountOptions options{g.threads};
  DotProductSet set;
  std::optional<FertilityReport> fertility;
  std::size_t points = 0;
  if (!a.cross.empty()) {
    const Configuration A = load_nonempty(a.cross[0]);
    const Configuration B = load_nonempty(a.cross[1]);
    if (A.mode() != B.mode()) throw UsageError("--cross files have different modes");
    set = projection_values(A.points(), B.points(), q, options);
    points = A.size() + B.size();
  } else {
    const Configuration config = load_nonempty(a.file);
    set = distinct_dot_products(config, q, options);
    if (a.per_point) fertility = per_point_fertility(config, q, options);
    points = config.size();
  }
  std::ostringstream text;
  if (g.structured()) {
    Json j;
    j["points"] = points;
    j["count"] = to_json(set, a.values);
    if (fertility) j["per_point"] = to_json(*fertility);
    text << dump(j);
  } else {
    text << "points " << points << "\n";
    text << "cardinality " << set.cardinality() << "\n";
    text << "ordered_pairs " << set.ordered_pairs << "\n";
    text << "quantization " << quantization_text(set.quantization) << "\n";
    text << "min_gap " << (set.min_gap ? num(*set.min_gap) : "none") << "\n";
    if (fertility) {
      text << "per_point_minimum " << fertility->minimum << " at index " << fertility->minimum_index << "\n";
      text << "per_point";
      for (auto c : fertility->counts) text << " " << c;
      text << "\n";
    }
    if (a.values) {
      text << "values\n";
      for (const auto& v : set.values) text << v.to_string() << "\n";
    }
  }
  emit(g, out, text.str());
  return kExitOk;
}

// analyze --------------------------------------------------------------------

struct AnalyzeArgs {
  std::string file;
  bool lines = false;
  bool circles = false;
  std::string wedge;
  std::vector<std::string> density;
  bool buckets = false;
  std::size_t rounds = 0;
  double quantum = 0.0;
  double angle_tolerance = kDefaultAngleTolerance;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
  auto* cmd = app.add_subcommand("analyze", "Structural analyses of a points file");
  cmd->configurable();
  cmd->add_option("file,--file", a.file, "Points file")->required();
  cmd->add_flag("--lines", a.lines, "Supporting lines through the origin");
  cmd->add_flag("--circles", a.circles, "Supporting circles centred at the origin");
  cmd->add_option("--wedge", a.wedge, "Largest wedge of angle arccos(b)");
  auto* density = cmd->add_option("--density", a.density, "Popular ray density report for b and c")->expected(2);
  cmd->add_flag("--buckets", a.buckets, "Popular circle projections onto the popular ray, per bucket");
  cmd->add_option("--iterate", a.rounds, "Repeat the density report, removing each ray")
      ->check(CLI::PositiveNumber)
      ->needs(density);
  cmd->add_option("--quantum", a.quantum, "Grid quantum for circles and buckets")->check(CLI::PositiveNumber);
  cmd->add_option("--angle-tolerance", a.angle_tolerance, "Approx direction grouping tolerance (rad)")
      ->check(CLI::PositiveNumber);
}

std::string direction_text(const Direction& d) {
  return d.mode == Mode::Exact ? d.to_string() : "angle " + num(d.angle);
}

std::string density_text(const DensityReport& d) {
  std::ostringstream s;
  s << "ray " << direction_text(d.direction) << (d.side > 0 ? " +" : " -") << ", members " << d.members
    << ", close " << d.close_pairs << ", spaced " << d.spaced_pairs << ", boundary " << d.boundary_pairs
    << ", threshold " << num(d.threshold) << ", b-dense " << (d.is_b_dense ? "yes" : "no");
  return s.str();
}

int run_analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out) {
  const Configuration config = load_nonempty(a.file);
  const bool any = a.lines || a.circles || !a.wedge.empty() || !a.density.empty() || a.buckets;
  const bool lines = a.lines || !any;
  const bool circles = a.circles || !any;
  Json j;
  std::ostringstream text;
  if (lines) {
    const LineGrouping grouping = supporting_lines(config, a.angle_tolerance);
    j["lines"] = to_json(grouping);
    text << "lines " << grouping.groups.size() << " groups, " << grouping.origin_indices.size() << " origin points\n";
    if (!grouping.groups.empty()) {
      const auto& top = grouping.groups.front();
      const auto positive = std::count(top.sides.begin(), top.sides.end(), 1);
      text << "popular_line " << direction_text(top.direction) << ", " << top.size() << " points (" << positive
           << " +, " << top.size() - static_cast<std::size_t>(positive) << " -)\n";
    }
    if (grouping.min_group_gap) text << "min_group_gap " << num(*grouping.min_group_gap) << "\n";
  }
  if (circles) {
    const CircleGrouping grouping = supporting_circles(config, a.quantum);
    j["circles"] = to_json(grouping);
    text << "circles " << grouping.proper_count() << " proper circles\n";
    if (grouping.proper_count() > 0) {
      const auto& top = grouping.groups.front();
      text << "popular_circle radius2 " << top.radius2.to_string() << ", " << top.size() << " points\n";
    }
  }
  if (!a.wedge.empty()) {
    const WedgeResult wedge = max_wedge(config, parse_scalar(a.wedge, Mode::Exact));
    j["wedge"] = to_json(wedge);
    text << "wedge start " << num(wedge.start) << ", width " << num(wedge.width) << ", size "
         << wedge.members.size() << ", guaranteed " << wedge.guaranteed << "\n";
  }
  if (!a.density.empty()) {
    const Scalar b = parse_scalar(a.density[0], Mode::Exact);
    double c = 0;
    try {
      c = std::stod(a.density[1]);
    } catch (const std::exception&) {
      throw UsageError("--density c must be a number, got '" + a.density[1] + "'");
    }
    if (a.rounds > 0) {
      Json rounds = Json::array();
      const auto reports = iterate_dense_lines(config, b, c, a.rounds);
      for (std::size_t r = 0; r < reports.size(); ++r) {
        rounds.push_back(to_json(reports[r]));
        text << "round " << r + 1 << " " << density_text(reports[r]) << "\n";
      }
      j["iterate"] = std::move(rounds);
    } else {
      const DensityReport report =
          density_report(popular_ray(popular_line(config, a.angle_tolerance)), b, c, config.size());
      j["density"] = to_json(report);
      text << "density " << density_text(report) << "\n";
    }
  }
  if (a.buckets) {
    const BucketReport report =
        popular_bucket_report(config, config.mode() == Mode::Exact && a.quantum == 0
                                          ? std::optional<Quantization>{}
                                          : std::optional<Quantization>{Quantization::grid(a.quantum)});
    j["buckets"] = to_json(report);
    text << "buckets circle " << report.circle_size << " points, k " << num(report.k) << ", threshold "
         << report.threshold << ", counts";
    for (auto c : report.counts) text << " " << c;
    text << ", total " << report.total_distinct << "\n";
  }
  emit(g, out, g.structured() ? dump(j) : text.str());
  return kExitOk;
}

// scaling --------------------------------------------------------------------

struct ScalingArgs {
  std::string file;
  std::string csv, report, dat, timing;
};

void add_scaling(CLI::App& app, ScalingArgs& a) {
  auto* cmd = app.add_subcommand("scaling", "Run an n-sweep from an experiment file and fit the log-log slope");
  cmd->configurable();
  cmd->add_option("experiment,--experiment", a.file, "Experiment file")->required();
  cmd->add_option("--csv", a.csv, "Override the CSV output path");
  cmd->add_option("--report", a.report, "Override the structured report path");
  cmd->add_option("--dat", a.dat, "Override the two-column data path");
  cmd->add_option("--timing", a.timing, "Override the wall-time table path");
}

int run_scaling_cmd(const ScalingArgs& a, const Globals& g, std::ostream& out) {
  ExperimentSpec spec = read_experiment_file(a.file);
  if (!a.csv.empty()) spec.csv_path = a.csv;
  if (!a.report.empty()) spec.report_path = a.report;
  if (!a.dat.empty()) spec.dat_path = a.dat;
  if (!a.timing.empty()) spec.timing_path = a.timing;
  if (g.threads > 0) spec.threads = g.threads;
  const ScalingReport report = run_scaling(spec);
  write_scaling_outputs(report);
  std::ostringstream text;
  if (g.structured()) {
    text << dump(to_json(report));
  } else {
    text << "n count\n";
    for (const auto& row : report.rows) text << row.n << " " << row.count << "\n";
    text << "slope " << num(report.fit.slope) << "\n";
    text << "residual " << num(report.fit.residual) << "\n";
  }
  emit(g, out, text.str());
  return kExitOk;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::string points;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string b = "1/2";
  double c = 1.0;
  double quantum = 0.0;
  bool exact = false;
  std::size_t off_ray = 0;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
  auto* cmd = app.add_subcommand("verify", "Check one of the lemma suites and report margins");
  cmd->configurable();
  cmd->add_option("--suite", a.suite, "line_lower, circle_count, bucket_bound, wedge_bound, density_pipeline")
      ->required();
  auto* points = cmd->add_option("--points", a.points, "Points file to check");
  cmd->add_option("--n", a.n, "Size of the suite's default configuration")->check(CLI::PositiveNumber)->excludes(points);
  cmd->add_option("--seed", a.seed, "Seed for random default configurations");
  cmd->add_option("--b", a.b, "b for wedge_bound and density_pipeline");
  cmd->add_option("--c", a.c, "Density threshold coefficient c");
  auto* quantum = cmd->add_option("--quantum", a.quantum, "Grid quantum")->check(CLI::PositiveNumber);
  cmd->add_flag("--exact", a.exact, "Exact counting")->excludes(quantum);
  cmd->add_option("--off-ray", a.off_ray, "density_pipeline: random off-ray points added to the default ray");
}

std::size_t default_suite_size(Suite suite) {
  switch (suite) {
    case Suite::CircleCount:
      return 8;
    case Suite::BucketBound:
      return 24;
    default:
      return 100;
  }
}

int run_verify(const VerifyArgs& a, const Globals& g, std::ostream& out) {
  const Suite suite = parse_suite(a.suite);
  SuiteOptions options;
  options.b = a.b;
  options.c = a.c;
  options.threads = g.threads;
  if (a.exact) options.quantization = Quantization::exact();
  if (a.quantum > 0) options.quantization = Quantization::grid(a.quantum);
  Configuration config;
  if (!a.points.empty()) {
    config = load_nonempty(a.points);
  } else {
    const std::size_t n = a.n > 0 ? a.n : default_suite_size(suite);
    config = suite == Suite::DensityPipeline ? density_pipeline_configuration(n, a.off_ray, a.seed)
                                             : suite_default_configuration(suite, n, a.seed);
  }
  const SuiteReport report = verify_suite(config, suite, options);
  std::ostringstream text;
  if (g.structured()) {
    text << dump(to_json(report));
  } else {
    text << "suite " << to_string(report.suite) << ": " << (report.pass ? "pass" : "FAIL") << "\n";
    text << "value " << report.value << "\n";
    for (const auto& c : report.checks) {
      text << "check " << c.label << ": observed " << num(c.observed) << ", bound " << num(c.bound) << ", margin "
           << num(c.margin) << ", " << (c.pass ? "pass" : "FAIL") << "\n";
    }
  }
  emit(g, out, text.str());
  return report.pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distinct dot products: generators, exact counting and structural analyses", "dotprod"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a config file, e.g. a saved effective-config echo");
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 uses all cores)");
  app.add_option("--format", g.format, "text or structured (JSON)")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("-o,--output", g.output, "Write the output here instead of stdout");

  GenerateArgs generate_args;
  CountArgs count_args;
  AnalyzeArgs analyze_args;
  ScalingArgs scaling_args;
  VerifyArgs verify_args;
  add_generate(app, generate_args);
  add_count(app, count_args);
  add_analyze(app, analyze_args);
  add_scaling(app, scaling_args);
  add_verify(app, verify_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  err << "# effective configuration\n" << app.config_to_str(false, false);

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "generate") return run_generate(generate_args, g, out);
    if (name == "count") return run_count(count_args, g, out);
    if (name == "analyze") return run_analyze(analyze_args, g, out);
    if (name == "scaling") return run_scaling_cmd(scaling_args, g, out);
    return run_verify(verify_args, g, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace dotprod
