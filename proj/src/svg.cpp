#include "bicycle/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace bicycle {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -std::numeric_limits<double>::infinity(), y1 = x1;
  void add(const Vec& p) {
    x0 = std::min(x0, p[0]);
    y0 = std::min(y0, p[1]);
    x1 = std::max(x1, p[0]);
    y1 = std::max(y1, p[1]);
  }
  bool empty() const { return !(x1 >= x0); }
  double extent() const { return std::max(x1 - x0, y1 - y0); }
};

}  // namespace

std::string render_svg(const SvgScene& scene, const SvgOptions& opt) {
  Box box;
  for (const auto& p : scene.polygons) {
    if (p.polygon.dim() != 2) throw BicycleError(ErrorKind::DimensionMismatch, "SVG output is planar only");
    for (const Vec& v : p.polygon.vertices()) box.add(v);
  }
  for (const Vec& p : scene.points) box.add(p);
  for (const auto& a : scene.arrows) {
    box.add(a.from);
    box.add(a.to);
  }
  for (const auto& s : scene.segments) {
    box.add(s.first);
    box.add(s.second);
  }
  if (box.empty()) box.add(make_vec({0.0, 0.0}));
  // Circles widen the frame only when they are comparable to the drawing.
  const double base = std::max(box.extent(), 1e-9);
  Box full = box;
  for (const auto& c : scene.circles) {
    if (c.is_line() || std::abs(c.radius()) > 3.0 * base) continue;
    const double r = std::abs(c.radius());
    full.add(make_vec({(*c.center)[0] - r, (*c.center)[1] - r}));
    full.add(make_vec({(*c.center)[0] + r, (*c.center)[1] + r}));
  }

  const double s = opt.pixels_per_unit;
  const double w = (full.x1 - full.x0) * s + 2 * opt.margin;
  const double h = (full.y1 - full.y0) * s + 2 * opt.margin;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
  out += "<defs><marker id=\"arrowhead\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" "
         "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 z\" fill=\"#b03a2e\"/></marker></defs>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // y-up model frame: x' = margin + s (x - x0), y' = margin + s (y1 - y)
  out += "<g transform=\"translate(" + num(opt.margin - s * full.x0) + "," + num(opt.margin + s * full.y1) +
         ") scale(" + num(s) + "," + num(-s) + ")\" fill=\"none\" stroke-linejoin=\"round\">\n";

  for (const auto& c : scene.circles) {
    if (c.is_line()) continue;
    out += "  <circle cx=\"" + num((*c.center)[0]) + "\" cy=\"" + num((*c.center)[1]) + "\" r=\"" +
           num(std::abs(c.radius())) + "\" stroke=\"#7d8c99\" stroke-width=\"0.8\" "
           "vector-effect=\"non-scaling-stroke\"/>\n";
  }
  for (const auto& seg : scene.segments) {
    out += "  <line x1=\"" + num(seg.first[0]) + "\" y1=\"" + num(seg.first[1]) + "\" x2=\"" + num(seg.second[0]) +
           "\" y2=\"" + num(seg.second[1]) + "\" stroke=\"#999999\" stroke-width=\"0.8\" "
           "vector-effect=\"non-scaling-stroke\"/>\n";
  }
  for (const auto& p : scene.polygons) {
    std::string pts;
    for (const Vec& v : p.polygon.vertices()) pts += (pts.empty() ? "" : " ") + num(v[0]) + "," + num(v[1]);
    out += "  <polygon points=\"" + pts + "\" stroke=\"" + p.stroke + "\" stroke-width=\"1.6\"" +
           (p.dashed ? " stroke-dasharray=\"5 3\"" : "") + " vector-effect=\"non-scaling-stroke\"/>\n";
  }
  const double dot = 2.5 / s;
  for (const Vec& p : scene.points) {
    out += "  <circle cx=\"" + num(p[0]) + "\" cy=\"" + num(p[1]) + "\" r=\"" + num(dot) +
           "\" fill=\"#b03a2e\" stroke=\"none\"/>\n";
  }
  for (const auto& a : scene.arrows) {
    out += "  <line x1=\"" + num(a.from[0]) + "\" y1=\"" + num(a.from[1]) + "\" x2=\"" + num(a.to[0]) + "\" y2=\"" +
           num(a.to[1]) + "\" stroke=\"#b03a2e\" stroke-width=\"1.2\" marker-end=\"url(#arrowhead)\" "
           "vector-effect=\"non-scaling-stroke\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace bicycle
