#include "bicycle/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace bicycle {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidPolygon: return "InvalidPolygon";
    case ErrorKind::DegenerateLine: return "DegenerateLine";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::DegenerateMonodromy: return "DegenerateMonodromy";
    case ErrorKind::NoRealFixedPoint: return "NoRealFixedPoint";
    case ErrorKind::PoleAtEllEqualsA: return "PoleAtEllEqualsA";
    case ErrorKind::ProjectiveDenominatorZero: return "ProjectiveDenominatorZero";
    case ErrorKind::EllipticMonodromy: return "EllipticMonodromy";
    case ErrorKind::IdentityMonodromy: return "IdentityMonodromy";
    case ErrorKind::ClosureFailure: return "ClosureFailure";
    case ErrorKind::ZeroArea: return "ZeroArea";
    case ErrorKind::SignAssignmentFailure: return "SignAssignmentFailure";
    case ErrorKind::PoleOnChain: return "PoleOnChain";
    case ErrorKind::ChordTooLong: return "ChordTooLong";
    case ErrorKind::NotConcentricAlternating: return "NotConcentricAlternating";
    case ErrorKind::NotCyclic: return "NotCyclic";
  }
  return "Unknown";
}

Vec make_vec(std::initializer_list<double> coords) {
  Vec v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return v;
}

Tolerance Tolerance::from_env() {
  Tolerance tol;
  if (const char* env = std::getenv("BICYCLE_TOL")) {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end != env && std::isfinite(value) && value > 0) tol.eps_geom = value;
  }
  return tol;
}

void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw BicycleError(ErrorKind::DimensionMismatch,
                       "dimensions " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
}

Polygon::Polygon(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw BicycleError(ErrorKind::InvalidPolygon, "a polygon needs at least 3 vertices");
  }
  const auto n = vertices_.front().size();
  if (n < 2) throw BicycleError(ErrorKind::InvalidPolygon, "dimension must be at least 2");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec& v = vertices_[i];
    if (v.size() != n) {
      throw BicycleError(ErrorKind::DimensionMismatch, "vertex " + std::to_string(i) + " has dimension " +
                                                           std::to_string(v.size()) + ", expected " +
                                                           std::to_string(n));
    }
    if (!v.allFinite()) {
      throw BicycleError(ErrorKind::InvalidPolygon, "vertex " + std::to_string(i) + " is not finite");
    }
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (side(static_cast<std::ptrdiff_t>(i)) == 0.0) {
      throw BicycleError(ErrorKind::InvalidPolygon, "vertices " + std::to_string(i) + " and " +
                                                        std::to_string((i + 1) % vertices_.size()) +
                                                        " coincide");
    }
  }
}

Polygon::Polygon(std::initializer_list<std::initializer_list<double>> points)
    : Polygon([&] {
        std::vector<Vec> vs;
        vs.reserve(points.size());
        for (const auto& p : points) vs.push_back(make_vec(p));
        return vs;
      }()) {}

std::size_t Polygon::wrap(std::ptrdiff_t i) const {
  const auto k = static_cast<std::ptrdiff_t>(vertices_.size());
  return static_cast<std::size_t>(((i % k) + k) % k);
}

std::vector<double> Polygon::sides() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = side(static_cast<std::ptrdiff_t>(i));
  return out;
}

double Polygon::perimeter() const {
  double p = 0;
  for (std::size_t i = 0; i < size(); ++i) p += side(static_cast<std::ptrdiff_t>(i));
  return p;
}

double Polygon::diameter() const {
  double d = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  return d;
}

Polygon Polygon::translated(const Vec& offset) const {
  std::vector<Vec> vs = vertices_;
  for (auto& v : vs) {
    require_same_dim(v, offset);
    v += offset;
  }
  return Polygon(std::move(vs));
}

Polygon Polygon::reversed() const {
  std::vector<Vec> vs;
  vs.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) vs.push_back((*this)[-static_cast<std::ptrdiff_t>(i)]);
  return Polygon(std::move(vs));
}

Polygon Polygon::shifted(std::ptrdiff_t s) const {
  std::vector<Vec> vs;
  vs.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) vs.push_back((*this)[static_cast<std::ptrdiff_t>(i) + s]);
  return Polygon(std::move(vs));
}

Polygon Polygon::with_vertex(std::ptrdiff_t i, Vec v) const {
  std::vector<Vec> vs = vertices_;
  vs[wrap(i)] = std::move(v);
  return Polygon(std::move(vs));
}

double max_vertex_distance(const Polygon& a, const Polygon& b) {
  if (a.size() != b.size()) {
    throw BicycleError(ErrorKind::InvalidPolygon, "polygons differ in vertex count");
  }
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    require_same_dim(a[idx], b[idx]);
    d = std::max(d, (a[idx] - b[idx]).norm());
  }
  return d;
}

namespace {

double point_scale(const Vec& a, const Vec& b) { return std::max({a.norm(), b.norm(), 1.0}); }

}  // namespace

Vec reflect_in_line(const Vec& p, const Vec& a, const Vec& b, const Tolerance& tol) {
  require_same_dim(p, a);
  require_same_dim(a, b);
  const Vec d = b - a;
  const double len = d.norm();
  if (len < tol.eps_geom * point_scale(a, b)) {
    throw BicycleError(ErrorKind::DegenerateLine, "line through two coincident points");
  }
  const Vec foot = a + d * ((p - a).dot(d) / (len * len));
  return 2.0 * foot - p;
}

Vec perp_bisector_reflect(const Vec& p, const Vec& a, const Vec& b, const Tolerance& tol) {
  require_same_dim(p, a);
  require_same_dim(a, b);
  const Vec d = b - a;
  const double len = d.norm();
  if (len < tol.eps_geom * point_scale(a, b)) {
    throw BicycleError(ErrorKind::DegenerateLine, "bisector of a zero-length segment");
  }
  const Vec n = d / len;
  const Vec mid = 0.5 * (a + b);
  return p - 2.0 * (p - mid).dot(n) * n;
}

Vec bicycle_step(const Vec& v1, const Vec& v2, const Vec& w1, const Tolerance& tol) {
  require_same_dim(v1, v2);
  require_same_dim(v1, w1);
  return reflect_in_line(w1 + (v2 - v1), w1, v2, tol);
}

double butterfly_residual(const Vec& p1, const Vec& p2, const Vec& p3, const Vec& p4) {
  if ((p3 - p1).norm() == 0.0) return std::numeric_limits<double>::infinity();
  return (p4 - perp_bisector_reflect(p2, p1, p3, Tolerance{0.0, 0.0})).norm();
}

bool is_darboux_butterfly(std::span<const Vec> quad, const Tolerance& tol) {
  if (quad.size() != 4) {
    throw BicycleError(ErrorKind::WrongArity, "a butterfly has 4 vertices, got " + std::to_string(quad.size()));
  }
  for (const Vec& q : quad) require_same_dim(q, quad[0]);
  double diam = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) diam = std::max(diam, (quad[i] - quad[j]).norm());
  if ((quad[0] - quad[2]).norm() <= tol.eps_geom * diam) return false;
  return butterfly_residual(quad[0], quad[1], quad[2], quad[3]) <= tol.eps_geom * diam;
}

bool is_darboux_butterfly(const Polygon& quad, const Tolerance& tol) {
  return is_darboux_butterfly(std::span<const Vec>(quad.vertices()), tol);
}

double coplanarity_defect(std::span<const Vec> points) {
  if (points.size() < 4) return 0.0;
  const auto n = points[0].size();
  const auto m = static_cast<Eigen::Index>(points.size() - 1);
  if (n < 3 || m < 3) return 0.0;
  Eigen::MatrixXd d(n, m);
  double norms = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    require_same_dim(points[0], points[static_cast<std::size_t>(j) + 1]);
    d.col(j) = points[static_cast<std::size_t>(j) + 1] - points[0];
    norms *= std::max(d.col(j).squaredNorm(), 1e-300);
  }
  // For four points the Gram matrix is 3x3 and singular exactly at rank <= 2.
  const Eigen::MatrixXd gram = d.transpose() * d;
  return std::abs(gram.determinant()) / norms;
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

double signed_angle(const Vec& from, const Vec& to) {
  return std::atan2(cross2(from, to), from.head(2).dot(to.head(2)));
}

Vec rotate2(const Vec& p, double angle, const Vec& center) {
  const double c = std::cos(angle), s = std::sin(angle);
  const Vec d = p - center;
  Vec out(2);
  out << center[0] + c * d[0] - s * d[1], center[1] + s * d[0] + c * d[1];
  return out;
}

}  // namespace bicycle
