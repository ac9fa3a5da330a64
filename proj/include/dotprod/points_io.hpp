#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dotprod/point.hpp"

namespace dotprod {

// Points file: a required `#mode exact|approx` header, then one `x y` pair per
// line. Exact coordinates are `num/den` or integers, approximate ones are
// decimal literals. Blank lines and other `#` lines are ignored.
Configuration read_points(std::istream& in, const std::string& source = "<stream>");
Configuration read_points_file(const std::filesystem::path& path);

// Exact coordinates are written as num/den, approximate ones in shortest
// round-trip form, so write -> read reproduces the configuration bit for bit.
void write_points(std::ostream& out, const Configuration& config);
void write_points_file(const std::filesystem::path& path, const Configuration& config);

}  // namespace dotprod
