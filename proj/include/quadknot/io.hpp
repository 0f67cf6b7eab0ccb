#pragma once

// Knot input formats.
//
// PlainXYZ: one vertex per line, three reals separated by whitespace, `#`
// starts a comment, the cycle closes implicitly.
// JSON: {"vertices": [[x,y,z], ...], "name": "...", "tolerances": {...}}.

#include <charconv>
#include <istream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "knot.hpp"

namespace quadknot {

enum class KnotFormat { PlainXYZ, JSON };

namespace detail {

inline double parse_real(std::string_view tok, int line_no) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + std::string(tok) + "'");
  return v;
}

inline std::vector<Point3> parse_xyz(std::istream& in) {
  std::vector<Point3> pts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok{std::istream_iterator<std::string>(ls), {}};
    if (tok.empty()) continue;
    if (tok.size() != 3)
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 coordinates, got " +
                       std::to_string(tok.size()));
    pts.push_back({parse_real(tok[0], line_no), parse_real(tok[1], line_no), parse_real(tok[2], line_no)});
  }
  return pts;
}

}  // namespace detail

inline PolygonalKnot load_knot(std::istream& in, KnotFormat format, std::string default_name = {},
                               const ToleranceConfig& overrides_base = {}) {
  if (format == KnotFormat::PlainXYZ) {
    return PolygonalKnot(detail::parse_xyz(in), std::move(default_name), overrides_base);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw ParseError("JSON knot must be an object with a \"vertices\" array");
  std::vector<Point3> pts;
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
      throw ParseError("each vertex must be an array of three numbers");
    pts.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
  }
  std::string name = j.value("name", default_name);
  ToleranceConfig tol = overrides_base;
  bool fixed_scale = false;
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ParseError("\"tolerances\" must be an object");
    for (const auto& [key, value] : j["tolerances"].items()) {
      if (!value.is_number()) throw ParseError("tolerance '" + key + "' must be a number");
      try {
        tol.set(key, value.get<double>());
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
      }
      if (key == "scale") fixed_scale = true;
    }
  }
  if (fixed_scale) return PolygonalKnot::with_fixed_scale(std::move(pts), tol, std::move(name));
  return PolygonalKnot(std::move(pts), std::move(name), tol);
}

inline PolygonalKnot load_knot(std::string_view text, KnotFormat format, std::string default_name = {},
                               const ToleranceConfig& tol = {}) {
  std::istringstream in{std::string(text)};
  return load_knot(in, format, std::move(default_name), tol);
}

// Guesses the format from the first non-blank character.
inline KnotFormat sniff_format(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{' ? KnotFormat::JSON : KnotFormat::PlainXYZ;
  }
  return KnotFormat::PlainXYZ;
}

inline std::string to_xyz(const PolygonalKnot& k) {
  std::ostringstream os;
  os.precision(17);
  if (!k.name().empty()) os << "# " << k.name() << '\n';
  for (const auto& v : k.vertices()) os << v.x << ' ' << v.y << ' ' << v.z << '\n';
  return os.str();
}

}  // namespace quadknot
