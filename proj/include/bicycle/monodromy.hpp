#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bicycle/geometry.hpp"

namespace bicycle {

/// Real 2x2 matrix acting by fractional-linear maps on x = tan(alpha/2),
/// alpha being the direction of the segment V_i W_i measured counterclockwise
/// from the positive horizontal axis. Defined up to a nonzero factor; it is
/// stored unnormalised.
struct Mobius2 {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();

  double trace() const { return m.trace(); }
  double det() const { return m.determinant(); }
  double max_abs() const { return m.cwiseAbs().maxCoeff(); }
  // Scale-free conjugacy invariant Tr^2 / det.
  double tr2_over_det() const { return trace() * trace() / det(); }

  Mobius2 operator*(const Mobius2& rhs) const { return {m * rhs.m}; }
};

// Max entrywise gap after dividing each matrix by its own entry at the
// position of the largest-magnitude entry of `a`.
double projective_distance(const Mobius2& a, const Mobius2& b);
double distance_from_identity(const Mobius2& a);

enum class MonodromyClass { Elliptic, Parabolic, Hyperbolic, Identity, Degenerate };
std::string_view to_string(MonodromyClass c);

// [[l + a cos phi, -a sin phi], [-a sin phi, l - a cos phi]]: transport of the
// frame direction along one side of length a and direction phi.
Mobius2 edge_mobius(double ell, double a, double phi);

// Product of edge matrices in traversal order (later sides on the left)
// without any degeneracy check. Works at ell equal to a side length, where
// the result has rank one.
Mobius2 monodromy_product(const Polygon& v, double ell);

// Tr^2 / det of monodromy_product with det taken as the product of
// ell^2 - a_i^2, which stays accurate when the matrix is near rank one.
double monodromy_tr2_over_det(const Polygon& v, double ell);

// Same product traversed backwards from V_1 (V_1 -> V_k -> ... -> V_1); it is
// proportional to the adjugate of the forward product.
Mobius2 reverse_monodromy_product(const Polygon& v, double ell);

// Throws DegenerateMonodromy when |det| is negligible against the entries,
// which happens when ell equals a side length.
Mobius2 polygon_monodromy(const Polygon& v, double ell, const Tolerance& tol = {});

// Identity, then Degenerate (det ~ 0), then the sign of Tr^2 - 4 det against
// the band eps_class * max(Tr^2, 4|det|).
MonodromyClass classify(const Mobius2& m, const Tolerance& tol = {});

// Tr^2 - 4 det divided by max(Tr^2, 4|det|); its sign changes at the
// parabolic boundaries and it is what boundary bisection tracks.
double normalized_discriminant(const Mobius2& m);

struct FixedDirection {
  double angle = 0;       // radians in (-pi, pi]
  double eigenvalue = 0;  // derivative of the circle map at the fixed point
};

struct FixedDirections {
  MonodromyClass cls = MonodromyClass::Identity;
  std::vector<FixedDirection> points;  // attracting first; empty for Identity
};

// Homogeneous point (sin(alpha/2) : cos(alpha/2)) <-> direction angle.
double angle_of_homogeneous(const Eigen::Vector2d& h);
Eigen::Vector2d homogeneous_of_angle(double alpha);

// Fixed points of the projective action. Hyperbolic yields two entries with
// reciprocal derivatives, Parabolic one entry with derivative 1. A rank-one
// (Degenerate) map yields its range (derivative 0) then its kernel
// (derivative +inf). Throws NoRealFixedPoint for elliptic input.
FixedDirections fixed_directions(const Mobius2& m, const Tolerance& tol = {});

// Direction of the eigenvector for the eigenvalue of larger modulus; the
// attracting fixed point of the projective action. Empty for elliptic,
// identity, or nilpotent matrices.
std::optional<double> attracting_direction(const Mobius2& m, const Tolerance& tol = {});

/// Half-trace of the monodromy as a polynomial in ell:
/// Tr(M)/2 = ell^k + c_1 ell^(k-1) + ... + c_k, with coeffs[j] = c_j.
struct TracePoly {
  std::vector<double> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double evaluate(double ell) const;
};

TracePoly trace_polynomial(const Polygon& v);

// Direction of V_2 W_2 given the unit direction u of V_1 W_1, the unit side
// direction x of V_1 V_2, the side length a and the frame length ell.
// Throws PoleAtEllEqualsA where the formula's denominator |ell u - a x|^2
// vanishes (ell = a and u = x).
Vec direction_step(const Vec& u, const Vec& x, double a, double ell, const Tolerance& tol = {});

/// Element of O(n,1) for the form G = diag(1, ..., 1, -1), block layout
/// [[A, xi], [eta^T, lambda]].
struct LorentzMatrix {
  Eigen::MatrixXd m;

  int n() const { return static_cast<int>(m.rows()) - 1; }
  static LorentzMatrix identity(int n) { return {Eigen::MatrixXd::Identity(n + 1, n + 1)}; }
  LorentzMatrix operator*(const LorentzMatrix& rhs) const { return {m * rhs.m}; }
};

// max |M^T G M - G| over entries.
double lorentz_defect(const LorentzMatrix& m);

LorentzMatrix edge_lorentz(double ell, double a, const Vec& x, const Tolerance& tol = {});

// u -> (A u + xi) / (eta . u + lambda), renormalised to unit length.
Vec lorentz_action(const LorentzMatrix& m, const Vec& u, const Tolerance& tol = {});

// Product of edge_lorentz over the sides of v, later sides on the left.
LorentzMatrix lorentz_monodromy(const Polygon& v, double ell, const Tolerance& tol = {});

// Unit u with M (u, 1) proportional to (u, 1) for the real eigenvalue of
// largest modulus, if that eigenvector is null. Works in any dimension.
std::optional<Vec> lorentz_attracting_direction(const LorentzMatrix& m, const Tolerance& tol = {});

}  // namespace bicycle
