#include "dotprod/report_json.hpp"

namespace dotprod {

namespace {

Json scalars(const std::vector<Scalar>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_json(v));
  return out;
}

Json points(const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(to_json(p));
  return out;
}

template <typename T>
Json optional_value(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const Scalar& s) {
  if (s.is_exact()) return s.to_string();
  return s.real();
}

Json to_json(const Point& p) { return Json::array({to_json(p.x), to_json(p.y)}); }

Json to_json(const Quantization& q) {
  Json j;
  j["kind"] = q.is_exact() ? "exact" : "grid";
  if (!q.is_exact()) j["quantum"] = q.quantum;
  return j;
}

Json to_json(const DotProductSet& set, bool include_values) {
  Json j;
  j["cardinality"] = set.cardinality();
  j["ordered_pairs"] = set.ordered_pairs;
  j["quantization"] = to_json(set.quantization);
  j["min_gap"] = optional_value(set.min_gap);
  if (include_values) j["values"] = scalars(set.values);
  return j;
}

Json to_json(const FertilityReport& report) {
  Json j;
  j["counts"] = report.counts;
  j["minimum"] = report.minimum;
  j["minimum_index"] = report.minimum_index;
  return j;
}

Json to_json(const Direction& d) {
  Json j;
  j["mode"] = std::string(to_string(d.mode));
  if (d.mode == Mode::Exact) j["vector"] = Json::array({d.dx.get_str(), d.dy.get_str()});
  j["angle"] = d.angle;
  return j;
}

Json to_json(const LineGrouping& lines) {
  Json j;
  j["group_count"] = lines.groups.size();
  Json groups = Json::array();
  for (const auto& g : lines.groups) {
    Json gj;
    gj["direction"] = to_json(g.direction);
    gj["size"] = g.size();
    gj["indices"] = g.indices;
    gj["sides"] = g.sides;
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  j["origin_indices"] = lines.origin_indices;
  j["min_group_gap"] = optional_value(lines.min_group_gap);
  return j;
}

Json to_json(const CircleGrouping& circles) {
  Json j;
  j["proper_count"] = circles.proper_count();
  j["quantum"] = circles.quantum;
  Json groups = Json::array();
  for (const auto& g : circles.groups) {
    Json gj;
    gj["radius2"] = to_json(g.radius2);
    gj["degenerate"] = g.degenerate;
    gj["size"] = g.size();
    gj["indices"] = g.indices;
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  return j;
}

Json to_json(const WedgeResult& wedge) {
  Json j;
  j["start"] = wedge.start;
  j["width"] = wedge.width;
  j["size"] = wedge.members.size();
  j["guaranteed"] = wedge.guaranteed;
  j["origin_excluded"] = wedge.origin_excluded;
  j["indices"] = wedge.indices;
  return j;
}

Json to_json(const DensityReport& report) {
  Json j;
  j["direction"] = to_json(report.direction);
  j["side"] = report.side;
  j["members"] = report.members;
  j["close_pairs"] = report.close_pairs;
  j["spaced_pairs"] = report.spaced_pairs;
  j["boundary_pairs"] = report.boundary_pairs;
  j["b"] = to_json(report.b);
  j["c"] = report.c;
  j["ambient_n"] = report.ambient_n;
  j["threshold"] = report.threshold;
  j["is_b_dense"] = report.is_b_dense;
  return j;
}

Json to_json(const BucketReport& report) {
  Json j;
  j["circle_radius"] = report.circle_radius;
  j["circle_size"] = report.circle_size;
  j["boundaries"] = report.boundaries;
  j["counts"] = report.counts;
  j["max_ratio"] = report.max_ratio;
  j["k"] = report.k;
  j["threshold"] = report.threshold;
  Json pass = Json::array();
  for (bool p : report.pass) pass.push_back(p);
  j["pass"] = std::move(pass);
  j["total_distinct"] = report.total_distinct;
  j["quantization"] = to_json(report.quantization);
  Json values = Json::array();
  for (const auto& bucket : report.bucket_values) values.push_back(scalars(bucket));
  j["bucket_values"] = std::move(values);
  return j;
}

Json to_json(const WellSpacedExtraction& extraction) {
  Json j;
  j["kept"] = points(extraction.kept.members);
  j["kept_positions"] = extraction.kept_positions;
  j["rejected_positions"] = extraction.rejected_positions;
  Json pairs = Json::array();
  for (const auto& [l, t] : extraction.t_pairs) pairs.push_back(Json::array({to_json(l), to_json(t)}));
  j["t_pairs"] = std::move(pairs);
  return j;
}

Json to_json(const ScalingReport& report) {
  Json j;
  j["name"] = report.spec.name;
  j["kind"] = std::string(to_string(report.spec.generator.kind));
  j["mode"] = std::string(to_string(report.spec.generator.mode));
  j["count"] = std::string(to_string(report.spec.count_mode));
  j["quantization"] = to_json(report.spec.quantization);
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["n"] = row.n;
    r["points"] = row.points;
    r["count"] = row.count;
    r["ordered_pairs"] = row.ordered_pairs;
    const auto& a = row.analyses;
    if (a.line_groups) r["line_groups"] = *a.line_groups;
    if (a.popular_line_size) r["popular_line"] = *a.popular_line_size;
    if (a.circle_groups) r["circle_groups"] = *a.circle_groups;
    if (a.popular_circle_size) r["popular_circle"] = *a.popular_circle_size;
    if (a.min_fertility) r["min_fertility"] = *a.min_fertility;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["slope"] = report.fit.slope;
  j["intercept"] = report.fit.intercept;
  j["residual"] = report.fit.residual;
  return j;
}

Json to_json(const SuiteReport& report) {
  Json j;
  j["suite"] = std::string(to_string(report.suite));
  j["n"] = report.n;
  j["value"] = report.value;
  j["pass"] = report.pass;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj;
    cj["label"] = c.label;
    cj["pass"] = c.pass;
    cj["observed"] = c.observed;
    cj["bound"] = c.bound;
    cj["margin"] = c.margin;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dotprod
