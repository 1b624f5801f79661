#include "bicycle/sweep.hpp"

#include <algorithm>
#include <cmath>

namespace bicycle {

std::vector<double> scan_grid(const Polygon& v, double lo, double hi, int steps) {
  if (steps < 1 || !(hi > lo) || !(lo > 0)) {
    throw BicycleError(ErrorKind::InvalidPolygon, "scan grid needs 0 < lo < hi and at least one step");
  }
  const std::vector<double> sides = v.sides();
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    double L = lo + (hi - lo) * i / steps;
    for (double a : sides)
      if (std::abs(L - a) <= 1e-12 * L) L += 1e-9 * L;
    grid[static_cast<std::size_t>(i)] = L;
  }
  return grid;
}

ScanRow scan_point(const Polygon& v, double L, const Tolerance& tol) {
  ScanRow row;
  row.L = L;
  const Mobius2 m = monodromy_product(v, L);
  row.cls = classify(m, tol);
  row.discriminant = normalized_discriminant(m);
  row.tr2_over_det = monodromy_tr2_over_det(v, L);
  if (row.cls == MonodromyClass::Hyperbolic || row.cls == MonodromyClass::Parabolic) {
    row.eig_attracting = fixed_directions(m, tol).points.front().eigenvalue;
  }
  return row;
}

double bisect_boundary(const Polygon& v, double a, double b) {
  auto f = [&](double L) { return normalized_discriminant(monodromy_product(v, L)); };
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, b); ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

namespace {

bool changes_sign(const ScanRow& x, const ScanRow& y) {
  auto usable = [](const ScanRow& r) { return r.cls != MonodromyClass::Identity; };
  return usable(x) && usable(y) && (x.discriminant > 0) != (y.discriminant > 0);
}

std::vector<std::size_t> sign_changes(const std::vector<ScanRow>& rows) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (changes_sign(rows[i], rows[i + 1])) out.push_back(i);
  return out;
}

}  // namespace

ScanResult scan_serial(const Polygon& v, double lo, double hi, int steps, const Tolerance& tol) {
  const std::vector<double> grid = scan_grid(v, lo, hi, steps);
  ScanResult out;
  out.rows.reserve(grid.size());
  for (double L : grid) out.rows.push_back(scan_point(v, L, tol));
  for (std::size_t i : sign_changes(out.rows))
    out.boundaries.push_back(bisect_boundary(v, out.rows[i].L, out.rows[i + 1].L));
  return out;
}

ScanResult scan_parallel(const Polygon& v, double lo, double hi, int steps, const Tolerance& tol) {
  const std::vector<double> grid = scan_grid(v, lo, hi, steps);
  ScanResult out;
  out.rows.resize(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out.rows[static_cast<std::size_t>(i)] = scan_point(v, grid[static_cast<std::size_t>(i)], tol);
  }
  const std::vector<std::size_t> changes = sign_changes(out.rows);
  out.boundaries.resize(changes.size());
  const auto nb = static_cast<std::ptrdiff_t>(changes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < nb; ++j) {
    const std::size_t i = changes[static_cast<std::size_t>(j)];
    out.boundaries[static_cast<std::size_t>(j)] = bisect_boundary(v, out.rows[i].L, out.rows[i + 1].L);
  }
  return out;
}

std::vector<RigidTrial> rigid_trials_serial(const RigidSearch& search) {
  std::vector<RigidTrial> out;
  out.reserve(static_cast<std::size_t>(search.trials));
  for (int i = 0; i < search.trials; ++i) out.push_back(rigid_trial(search, i));
  return out;
}

std::vector<RigidTrial> rigid_trials_parallel(const RigidSearch& search) {
  std::vector<RigidTrial> out(static_cast<std::size_t>(search.trials));
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < search.trials; ++i) out[static_cast<std::size_t>(i)] = rigid_trial(search, i);
  return out;
}

}  // namespace bicycle
