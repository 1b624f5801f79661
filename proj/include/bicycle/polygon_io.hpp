#pragma once

#include <filesystem>
#include <string>

#include "bicycle/geometry.hpp"

namespace bicycle {

// {"dim": n, "vertices": [[...], ...], "name": "..."}; name is optional.
struct PolygonFile {
  Polygon polygon;
  std::string name;
};

// Throws InvalidPolygon on malformed JSON or fields, DimensionMismatch when
// a vertex disagrees with "dim".
PolygonFile parse_polygon(const std::string& text);
PolygonFile load_polygon(const std::filesystem::path& path);

// Doubles are written in shortest round-trip form, so load(save(p)) == p.
std::string dump_polygon(const Polygon& v, const std::string& name = {});
void save_polygon(const std::filesystem::path& path, const Polygon& v, const std::string& name = {});

}  // namespace bicycle
