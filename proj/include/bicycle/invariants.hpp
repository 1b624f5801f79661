#pragma once

#include <optional>
#include <vector>

#include "bicycle/dynamics.hpp"
#include "bicycle/geometry.hpp"

namespace bicycle {

// Antisymmetric n x n array; only the strict upper triangle is stored.
class Bivector {
 public:
  explicit Bivector(int n);

  int dim() const { return n_; }
  double operator()(int i, int j) const;
  void add(int i, int j, double value);  // adds value at (i, j) and -value at (j, i)
  // The single component (0, 1); meaningful in dimension 2.
  double scalar() const { return (*this)(0, 1); }
  double max_abs_diff(const Bivector& other) const;
  double max_abs() const;

 private:
  std::size_t slot(int i, int j) const;
  int n_;
  std::vector<double> upper_;
};

// Cyclic sum of V_i ^ V_{i+1}. In the plane this is twice the shoelace area.
Bivector area_bivector(const Polygon& v);

// sum (|V_{i+1}|^2 - |V_{i-1}|^2) V_i
Vec j_vector(const Polygon& v);
// sum |V_i|^2 (V_{i-1} - V_{i+1}); equal to j_vector.
Vec j_vector_alt(const Polygon& v);

// rot90(J) / (2 A), i.e. the rotated J divided by four times the signed area.
// Throws ZeroArea.
Vec circumcenter_of_mass(const Polygon& v, const Tolerance& tol = {});

// Area-weighted mean of the circumcenters of the fan triangles from `apex`.
// Collinear fan triangles get zero weight. Throws ZeroArea.
Vec ccm_triangulation_oracle(const Polygon& v, std::size_t apex = 0);

Vec circumcenter(const Vec& a, const Vec& b, const Vec& c);

// Member of the rear-track chain. curvature = 1 / signed radius; a line
// (parallel neighbouring frames) has curvature 0 and a direction instead of
// a center.
struct ChainCircle {
  std::optional<Vec> center;
  Vec direction;  // only for lines
  double curvature = 0;

  bool is_line() const { return !center.has_value(); }
  double radius() const;  // +inf for lines
};

// circles[j] is the member between frames j and j+1 (half-integer index j + 1/2);
// q[i] is the midpoint of V_i W_i, where circles[i-1] and circles[i] touch.
struct RearTrack {
  std::vector<ChainCircle> circles;
  std::vector<Vec> q;
};

/// Chain of circles through the rear track of a planar pair.
///
/// Magnitudes come from |P - Q_i|. The sign of the first radius is fixed,
/// the rest follow from the tangency type at each Q_i (same sign across an
/// exterior tangency), and the loop must close with the starting sign or
/// SignAssignmentFailure is raised. Finally all signs are flipped together
/// if needed so that the reconstruction with +ell lands on V.
RearTrack rear_track(const BicyclePair& pair, const Tolerance& tol = {});

// Convex combination of neighbouring centers giving V_i for ell = +L/2 and
// W_i for ell = -L/2.
std::vector<Vec> reconstruct(const RearTrack& track, double ell);

// Max over i of | |P_{i-1/2} - P_{i+1/2}| - |r_{i-1/2} + r_{i+1/2}| | for
// consecutive finite members.
double chain_tangency_defect(const RearTrack& track);

struct EigenvalueProducts {
  double lambda_vw = 1;     // prod |V_{i-1} W_i| / prod |V_i W_{i-1}|
  double lambda_chain = 1;  // prod |ell - r_j| / prod |ell + r_j|, ell = L/2
};

// Both products equal the derivative of the monodromy at the seed direction
// of W. Throws PoleOnChain when some ell - r_j vanishes.
EigenvalueProducts eigenvalue_products(const BicyclePair& pair, const RearTrack& track, const Tolerance& tol = {});

}  // namespace bicycle
