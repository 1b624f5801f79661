#pragma once

#include <optional>
#include <vector>

#include "bicycle/geometry.hpp"
#include "bicycle/monodromy.hpp"

namespace bicycle {

// Length convention: every function here takes L = |V_i W_i|. Formulas that
// are naturally written with a half-length use ell = L / 2 internally.

struct PropagationResult {
  std::vector<Vec> w;         // W_1 .. W_{k+1}; W_{k+1} should return to W_1
  double closure_defect = 0;  // |W_{k+1} - W_1|
};

// Applies bicycle_step once around the polygon starting from the seed w1.
PropagationResult propagate(const Polygon& v, const Vec& w1, const Tolerance& tol = {});

// Same, walking the polygon backwards: W_k from (V_1, V_k, W_1), then W_{k-1}
// and so on. The result is stored in forward order W_1 .. W_k, W_{k+1} where
// W_{k+1} is the point reached after the full backward lap.
PropagationResult propagate_backward(const Polygon& v, const Vec& w1, const Tolerance& tol = {});

enum class Branch { Attracting, Repelling };

struct TransformResult {
  Polygon w;
  MonodromyClass cls = MonodromyClass::Hyperbolic;
  double seed_angle = 0;      // direction of V_1 W_1
  double eigenvalue = 0;      // derivative of M_{V,L} at the seed direction
  double closure_defect = 0;
};

/// The bicycle transformation W = T_L(V) of a planar polygon.
///
/// The Attracting branch seeds at the attracting fixed direction of M_{V,L}
/// and propagates forwards. The Repelling branch seeds at the attracting
/// fixed direction of the reversed traversal and propagates backwards; both
/// therefore contract rounding errors. At L equal to a side length the
/// monodromy has rank one and its range is used as the attracting direction.
/// Throws EllipticMonodromy, IdentityMonodromy (every seed closes; use
/// propagate), DegenerateMonodromy, or ClosureFailure.
TransformResult transform_detailed(const Polygon& v, double L, Branch branch = Branch::Attracting,
                                   const Tolerance& tol = {});
Polygon transform(const Polygon& v, double L, Branch branch = Branch::Attracting, const Tolerance& tol = {});

// Dimension-independent variant seeding at the attracting fixed point of the
// Lorentz monodromy on the sphere of directions.
Polygon transform_lorentz(const Polygon& v, double L, const Tolerance& tol = {});

// W_{i+1} must be bicycle_step(V_i, V_{i+1}, W_i) for all i, with a common
// |V_i W_i| (equal to `length` when given). Parallelogram partners fail.
bool correspondence_check(const Polygon& v, const Polygon& w, const Tolerance& tol = {},
                          std::optional<double> length = std::nullopt);

// Largest per-vertex violation of the above, divided by the configuration size.
double correspondence_defect(const Polygon& v, const Polygon& w, std::optional<double> length = std::nullopt);

// Reflects V_i in the perpendicular bisector of V_{i-1} V_{i+1}.
Polygon recut(const Polygon& v, std::ptrdiff_t i, const Tolerance& tol = {});

// Point t1 making (v1, w1, t1, s1) a Darboux butterfly.
Vec butterfly_fourth(const Vec& v1, const Vec& w1, const Vec& s1, const Tolerance& tol = {});

/// Bianchi permutability: given B_l(V, W) and B_m(V, S), returns T with
/// B_l(S, T) and B_m(W, T).
///
/// T_i is the butterfly completion of (V_i, W_i, S_i) at every vertex, which
/// is what stepping T along S or W produces; each step is then checked
/// against both S and W and ClosureFailure is raised on disagreement. When
/// S coincides with W the answer is V.
Polygon bianchi_fourth_polygon(const Polygon& v, const Polygon& w, const Polygon& s, const Tolerance& tol = {});

// T obtained literally by seeding t1 and stepping along S (or along W). Used
// to cross-check the vertexwise construction.
PropagationResult bianchi_propagated(const Polygon& v, const Polygon& w, const Polygon& s, bool along_s,
                                     const Tolerance& tol = {});

/// Planar pair in the bicycle correspondence with |V_i W_i| = length.
/// alphas[i] is the oriented angle from V_i V_{i-1} to V_i W_i.
struct BicyclePair {
  Polygon v;
  Polygon w;
  double length = 0;
  std::vector<double> alphas;

  // Validates the correspondence and fills length and alphas.
  static BicyclePair make(Polygon v, Polygon w, const Tolerance& tol = {});
};

// alpha_i = angle(V_{i-1} V_i W_i), oriented.
std::vector<double> angle_sequence(const BicyclePair& pair);
// The same angles read at W_{i-1}: angle(V_{i-1} W_{i-1} W_i).
std::vector<double> angle_sequence_at_w(const BicyclePair& pair);

// Oriented interior angle theta_i = angle(V_{i-1} V_i V_{i+1}).
std::vector<double> turning_angles(const Polygon& v);

// Max over i of |L cos((a_i - a_{i-1} + t_{i-1})/2) - c_i cos((a_i + a_{i-1} - t_{i-1})/2)|
// with L = |V_i W_i| and c_i = |V_{i-1} V_i|, using pair.alphas.
double verify_difference_equation(const BicyclePair& pair, const Tolerance& tol = {});

}  // namespace bicycle
