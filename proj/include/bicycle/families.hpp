#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bicycle/geometry.hpp"
#include "bicycle/monodromy.hpp"

namespace bicycle {

// Regime maps return nothing for L <= eps_geom, where the quadrilateral
// boundary r1 - r2 may collapse to zero.

struct CyclicInfo {
  bool is_cyclic_convex = false;
  Vec center;
  double d = 0;  // circumdiameter

  // Hyperbolic on (0, d), Parabolic at d, Elliptic above.
  std::optional<MonodromyClass> regime(double L, const Tolerance& tol = {}) const;
};

CyclicInfo classify_cyclic(const Polygon& v, const Tolerance& tol = {});

// Counterclockwise rotation about the circumcenter through 2 arcsin(L / d).
// Throws NotCyclic or ChordTooLong.
Polygon rotation_transform(const Polygon& v, double L, const Tolerance& tol = {});

struct ConcentricFit {
  Vec center;
  double r_odd = 0;   // radius through V_1, V_3, ... (zero-based even indices)
  double r_even = 0;  // radius through V_2, V_4, ...
  double residual = 0;
};

// Least-squares fit of two concentric circles to alternate vertices of an
// even polygon. Empty when the fit is singular (parallel diagonals).
std::optional<ConcentricFit> fit_concentric(const Polygon& v);

/// Partner of an alternating concentric 2k-gon: W_1 on the other circle at
/// angle w1_angle about the common center, and each later W_i advanced by the
/// same angle as V_i. Throws NotConcentricAlternating.
Polygon concentric_transform(const Polygon& v, double w1_angle, const Tolerance& tol = {});

struct QuadClassification {
  enum class Kind { GenericConcentric, ParallelDiagonals, Butterfly };
  Kind kind = Kind::Butterfly;
  Vec center;      // GenericConcentric
  double r1 = 0;   // r1 >= r2
  double r2 = 0;
  Vec direction;   // ParallelDiagonals: unit direction of the diagonals
  double gap = 0;  // ParallelDiagonals: distance between the diagonal lines

  // Elliptic on (0, r1 - r2) and above r1 + r2, Hyperbolic between, Parabolic
  // at either boundary (within eps_class relative); Identity for butterflies.
  std::optional<MonodromyClass> regime(double L, const Tolerance& tol = {}) const;
};

std::string_view to_string(QuadClassification::Kind k);

QuadClassification classify_quadrilateral(const Polygon& q, const Tolerance& tol = {});

struct NGonSpec {
  int n = 12;
  int k = 3;
  double r1 = 1;
  double r2 = 0.7;
  double phase = 0;
};

// Alternating radii r1, r2 at angles phase + 2 pi i / n. Throws
// InvalidPolygon unless n is even, k odd and 1 <= k < n / 2.
Polygon ngon_construct(const NGonSpec& spec);

struct NGonReport {
  bool ok = false;
  double side_spread = 0;      // (max - min) / mean side
  double diagonal_spread = 0;  // same for the k-diagonals
  std::vector<double> butterfly_residuals;  // per i, divided by the diameter
  std::size_t worst_index = 0;
  double worst_residual = 0;
};

NGonReport ngon_verify_report(const Polygon& v, int k, const Tolerance& tol = {});
bool ngon_verify(const Polygon& v, int k, const Tolerance& tol = {});

// Regular in the sense of a constant rotation step about the centroid
// (star polygons included).
bool is_regular(const Polygon& v, double tol);
// Alternate vertices on two concentric circles, each class equally spaced.
bool is_two_circle(const Polygon& v, double tol);

/// One random restart of the bicycle (4k, k)-gon search: perturb a regular
/// 4k-gon (or a two-circle one, for odd k) and minimise the defining residuals
/// by damped Gauss-Newton with V_0 and V_1 pinned.
struct RigidTrial {
  bool converged = false;
  double residual = 0;
  bool verified = false;    // ngon residuals below the verification threshold
  bool regular = false;
  bool two_circle = false;
  bool rhombi_congruent = false;
  std::optional<Polygon> polygon;
};

struct RigidSearch {
  int k = 2;
  int trials = 100;
  double noise = 0.05;
  double verify_threshold = 1e-7;
  std::uint64_t seed = 1;
};

RigidTrial rigid_trial(const RigidSearch& search, int index);

// Checks V_s V_{s+k} V_{s+2k} V_{s+3k} against the next rhombus for s < k:
// bicycle partners at L = side, with equal side and diagonal lengths.
bool rhombus_orbit_congruent(const Polygon& v, int k, double tol);

struct RigidReport {
  int k = 0;
  int n = 0;
  int trials = 0;
  int converged = 0;
  int verified = 0;
  int regular = 0;
  int two_circle = 0;
  int rhombus_failures = 0;
  int counterexamples = 0;  // verified but outside the family the theorem allows
};

RigidReport summarize_rigid(const RigidSearch& search, const std::vector<RigidTrial>& trials);

// Runs the trials in parallel (see sweep.hpp for the serial reference).
RigidReport rigid_check(int k, int trials, std::uint64_t seed = 1);

}  // namespace bicycle
