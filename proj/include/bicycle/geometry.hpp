#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bicycle/error.hpp"

namespace bicycle {

using Vec = Eigen::VectorXd;

Vec make_vec(std::initializer_list<double> coords);

// Relative tolerances. eps_geom scales geometric predicates by the size of
// the configuration; eps_class scales the parabolic band of the discriminant.
struct Tolerance {
  double eps_geom = 1e-9;
  double eps_class = 1e-8;

  // Reads BICYCLE_TOL (applies to eps_geom) when set and parseable.
  static Tolerance from_env();
};

void require_same_dim(const Vec& a, const Vec& b);

/// Closed polygon V_1..V_k with cyclic indexing.
///
/// Construction validates the invariants every algorithm relies on: at least
/// three vertices, a common dimension >= 2, finite coordinates, and distinct
/// consecutive vertices.
class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Vec> vertices);
  Polygon(std::initializer_list<std::initializer_list<double>> points);

  std::size_t size() const { return vertices_.size(); }
  int dim() const { return vertices_.empty() ? 0 : static_cast<int>(vertices_.front().size()); }

  // Cyclic access; any integer index is valid.
  const Vec& operator[](std::ptrdiff_t i) const { return vertices_[wrap(i)]; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  std::size_t wrap(std::ptrdiff_t i) const;

  // Side V_i -> V_{i+1}.
  Vec edge(std::ptrdiff_t i) const { return (*this)[i + 1] - (*this)[i]; }
  double side(std::ptrdiff_t i) const { return edge(i).norm(); }
  std::vector<double> sides() const;
  double perimeter() const;

  // Largest distance between two vertices; the length unit for relative tolerances.
  double diameter() const;

  Polygon translated(const Vec& offset) const;
  Polygon reversed() const;               // V_1, V_k, ..., V_2
  Polygon shifted(std::ptrdiff_t s) const;  // vertex i becomes V_{i+s}
  Polygon with_vertex(std::ptrdiff_t i, Vec v) const;

 private:
  std::vector<Vec> vertices_;
};

// Largest vertexwise distance between two polygons of equal size.
double max_vertex_distance(const Polygon& a, const Polygon& b);

Vec reflect_in_line(const Vec& p, const Vec& a, const Vec& b, const Tolerance& tol = {});

// Reflection of p in the hyperplane bisecting segment ab perpendicularly.
Vec perp_bisector_reflect(const Vec& p, const Vec& a, const Vec& b, const Tolerance& tol = {});

/// One discrete bicycle step.
///
/// Translates w1 by v2 - v1 and reflects the result in the line w1 v2, so
/// (v1, v2, w2, w1) closes an isosceles trapezoid with |v2 w2| = |v1 w1| and
/// |w1 w2| = |v1 v2|. Equivalently w2 is the reflection of v1 in the
/// perpendicular bisector of w1 v2.
Vec bicycle_step(const Vec& v1, const Vec& v2, const Vec& w1, const Tolerance& tol = {});

// Butterfly (P1, P2, P3, P4): P4 is the reflection of P2 in the perpendicular
// bisector of P1 P3. Throws WrongArity unless exactly four points are given.
bool is_darboux_butterfly(std::span<const Vec> quad, const Tolerance& tol = {});
bool is_darboux_butterfly(const Polygon& quad, const Tolerance& tol = {});

// Distance |P4 - R(P2)| from the butterfly condition, unscaled.
double butterfly_residual(const Vec& p1, const Vec& p2, const Vec& p3, const Vec& p4);

// Gram determinant of the difference vectors q_i - q_0, normalised by the
// product of their squared lengths; zero exactly when the points are coplanar.
double coplanarity_defect(std::span<const Vec> points);

// 2D helpers.
double cross2(const Vec& a, const Vec& b);
double signed_angle(const Vec& from, const Vec& to);  // in (-pi, pi]
Vec rotate2(const Vec& p, double angle, const Vec& center);

}  // namespace bicycle
