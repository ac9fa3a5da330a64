#include "dotprod/points_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "dotprod/errors.hpp"

namespace dotprod {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Scalar parse_coordinate(const std::string& token, Mode mode, const std::string& where) {
  const bool rational = token.find('/') != std::string::npos;
  const bool decimal = token.find_first_of(".eE") != std::string::npos;
  if (mode == Mode::Exact && decimal) throw UsageError(where + ": decimal literal '" + token + "' in an exact file");
  if (mode == Mode::Approx && rational) throw UsageError(where + ": rational literal '" + token + "' in an approx file");
  try {
    return parse_scalar(token, mode);
  } catch (const UsageError& e) {
    throw UsageError(where + ": " + e.what());
  }
}

}  // namespace

Configuration read_points(std::istream& in, const std::string& source) {
  std::optional<Mode> mode;
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text[0] == '#') {
      std::istringstream header(text.substr(1));
      std::string key, value;
      header >> key;
      if (key == "mode") {
        header >> value;
        if (mode) throw UsageError(where + ": repeated #mode header");
        if (!points.empty()) throw UsageError(where + ": #mode header after the first point");
        try {
          mode = parse_mode(value);
        } catch (const UsageError& e) {
          throw UsageError(where + ": " + e.what());
        }
      }
      continue;
    }
    if (!mode) throw UsageError(where + ": point before the #mode header");
    std::istringstream fields(text);
    std::string xs, ys, extra;
    if (!(fields >> xs >> ys) || (fields >> extra)) throw UsageError(where + ": expected two coordinates");
    points.emplace_back(parse_coordinate(xs, *mode, where), parse_coordinate(ys, *mode, where));
  }
  if (!mode) throw UsageError(source + ": missing #mode header");
  return Configuration(*mode, std::move(points));
}

Configuration read_points_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open points file " + path.string());
  return read_points(in, path.string());
}

void write_points(std::ostream& out, const Configuration& config) {
  out << "#mode " << to_string(config.mode()) << '\n';
  for (const auto& p : config) out << p.x.to_string() << ' ' << p.y.to_string() << '\n';
}

void write_points_file(const std::filesystem::path& path, const Configuration& config) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write points file " + path.string());
  write_points(out, config);
}

}  // namespace dotprod
