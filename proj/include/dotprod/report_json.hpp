#pragma once

#include <json.hpp>

#include <string>

#include "dotprod/dot_counter.hpp"
#include "dotprod/harness.hpp"
#include "dotprod/structure.hpp"

namespace dotprod {

// Key order is fixed, so equal reports serialize to equal bytes.
using Json = nlohmann::ordered_json;

// Exact scalars become "num/den" strings, approximate ones numbers.
Json to_json(const Scalar& s);
Json to_json(const Point& p);
Json to_json(const Quantization& q);
Json to_json(const DotProductSet& set, bool include_values);
Json to_json(const FertilityReport& report);
Json to_json(const Direction& d);
Json to_json(const LineGrouping& lines);
Json to_json(const CircleGrouping& circles);
Json to_json(const WedgeResult& wedge);
Json to_json(const DensityReport& report);
Json to_json(const BucketReport& report);
Json to_json(const WellSpacedExtraction& extraction);
// Wall time is left out; see write_scaling_timing.
Json to_json(const ScalingReport& report);
Json to_json(const SuiteReport& report);

// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace dotprod
