#pragma once

#include <string>
#include <vector>

#include "bicycle/geometry.hpp"
#include "bicycle/invariants.hpp"

namespace bicycle {

struct SvgPolygon {
  Polygon polygon;
  std::string stroke = "#1f4e79";
  bool dashed = false;
};

struct SvgArrow {
  Vec from;
  Vec to;
};

// Everything is in model coordinates (y up); the writer flips to SVG.
struct SvgScene {
  std::vector<SvgPolygon> polygons;
  std::vector<ChainCircle> circles;  // lines are skipped
  std::vector<Vec> points;
  std::vector<SvgArrow> arrows;
  std::vector<std::pair<Vec, Vec>> segments;
};

struct SvgOptions {
  double pixels_per_unit = 120;
  double margin = 24;
};

// Deterministic output: fixed element order, fixed-precision numbers, no
// timestamps or generated ids beyond the single arrowhead marker.
std::string render_svg(const SvgScene& scene, const SvgOptions& opt = {});

}  // namespace bicycle
