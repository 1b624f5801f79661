#include "bicycle/polygon_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bicycle {

using nlohmann::json;

PolygonFile parse_polygon(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw BicycleError(ErrorKind::InvalidPolygon, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw BicycleError(ErrorKind::InvalidPolygon, "expected an object with a \"vertices\" array");
  }
  std::vector<Vec> vs;
  for (const json& p : doc["vertices"]) {
    if (!p.is_array() || p.empty()) throw BicycleError(ErrorKind::InvalidPolygon, "vertex must be a coordinate list");
    Vec v(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p[i].is_number()) throw BicycleError(ErrorKind::InvalidPolygon, "coordinates must be numbers");
      v[static_cast<Eigen::Index>(i)] = p[i].get<double>();
    }
    vs.push_back(std::move(v));
  }
  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_integer()) throw BicycleError(ErrorKind::InvalidPolygon, "\"dim\" must be an integer");
    const auto dim = doc["dim"].get<long>();
    for (const Vec& v : vs)
      if (v.size() != dim) {
        throw BicycleError(ErrorKind::DimensionMismatch, "vertex of dimension " + std::to_string(v.size()) +
                                                             " in a dim " + std::to_string(dim) + " file");
      }
  }
  PolygonFile out{Polygon(std::move(vs)), {}};
  if (doc.contains("name") && doc["name"].is_string()) out.name = doc["name"].get<std::string>();
  return out;
}

PolygonFile load_polygon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BicycleError(ErrorKind::InvalidPolygon, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_polygon(buf.str());
}

std::string dump_polygon(const Polygon& v, const std::string& name) {
  // One vertex per line; json handles escaping and shortest round-trip doubles.
  std::string out = "{\n  \"dim\": " + std::to_string(v.dim()) + ",\n";
  if (!name.empty()) out += "  \"name\": " + json(name).dump() + ",\n";
  out += "  \"vertices\": [\n";
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Vec& p = v.vertices()[k];
    json row = json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) row.push_back(p[i]);
    out += "    " + row.dump() + (k + 1 < v.size() ? ",\n" : "\n");
  }
  out += "  ]\n}\n";
  return out;
}

void save_polygon(const std::filesystem::path& path, const Polygon& v, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw BicycleError(ErrorKind::InvalidPolygon, "cannot write " + path.string());
  out << dump_polygon(v, name);
}

}  // namespace bicycle
