#pragma once

#include <optional>
#include <vector>

#include "bicycle/families.hpp"
#include "bicycle/geometry.hpp"
#include "bicycle/monodromy.hpp"

namespace bicycle {

// Each kernel comes in a serial reference version and an OpenMP version
// that must produce identical output (same order, same values).

struct ScanRow {
  double L = 0;
  MonodromyClass cls = MonodromyClass::Identity;
  double tr2_over_det = 0;
  double discriminant = 0;  // normalized_discriminant
  std::optional<double> eig_attracting;  // derivative at the attracting fixed point
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<double> boundaries;  // sign changes of the discriminant, bisected
};

// steps + 1 equally spaced values from lo to hi. Values within 1e-12 relative
// of a side length are nudged by 1e-9 relative.
std::vector<double> scan_grid(const Polygon& v, double lo, double hi, int steps);

ScanRow scan_point(const Polygon& v, double L, const Tolerance& tol = {});

// Bisects the sign change of normalized_discriminant on [a, b] until the
// bracket is below 1e-13 * max(1, b).
double bisect_boundary(const Polygon& v, double a, double b);

ScanResult scan_serial(const Polygon& v, double lo, double hi, int steps, const Tolerance& tol = {});
ScanResult scan_parallel(const Polygon& v, double lo, double hi, int steps, const Tolerance& tol = {});

std::vector<RigidTrial> rigid_trials_serial(const RigidSearch& search);
std::vector<RigidTrial> rigid_trials_parallel(const RigidSearch& search);

}  // namespace bicycle
