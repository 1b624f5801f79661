// One line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bicycle/dynamics.hpp"
#include "bicycle/families.hpp"
#include "bicycle/invariants.hpp"
#include "bicycle/monodromy.hpp"
#include "bicycle/sweep.hpp"
#include "support.hpp"

using namespace bicycle;
using testkit::kPi;
using testkit::uniform;
using testkit::uniform_int;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Running maximum with a bound; the criterion holds when worst <= bound.
struct Worst {
  double value = 0;
  void add(double x) { value = std::max(value, std::isnan(x) ? INFINITY : x); }
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Distances only: |V_i W_i| = L and |W_i W_{i+1}| = |V_i V_{i+1}|.
double trapezoid_defect(const Polygon& v, const Polygon& w, double L) {
  double worst = 0;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(v.size()); ++i) {
    worst = std::max(worst, std::abs((v[i] - w[i]).norm() - L));
    worst = std::max(worst, std::abs((v[i + 1] - v[i]).norm() - (w[i + 1] - w[i]).norm()));
  }
  return worst;
}

Polygon rotated_about(const Polygon& v, const Vec& c, double a) {
  std::vector<Vec> out;
  for (const Vec& p : v.vertices()) {
    const Vec d = p - c;
    out.push_back(c + make_vec({std::cos(a) * d[0] - std::sin(a) * d[1], std::sin(a) * d[0] + std::cos(a) * d[1]}));
  }
  return Polygon(out);
}

Vec centroid(const Polygon& v) {
  Vec c = Vec::Zero(v.dim());
  for (const Vec& p : v.vertices()) c += p;
  return c / static_cast<double>(v.size());
}

// Derivative of the projective map at its attracting fixed point, from the
// eigenvalues of the matrix: mu_small / mu_big.
double attracting_multiplier(const Mobius2& m) {
  Eigen::EigenSolver<Eigen::Matrix2d> es(m.m);
  const auto ev = es.eigenvalues();
  double a = ev[0].real(), b = ev[1].real();
  if (std::abs(a) > std::abs(b)) std::swap(a, b);
  return a / b;
}

Polygon random_non_butterfly_quad() {
  for (;;) {
    const Polygon q = testkit::random_polygon(4);
    if (butterfly_residual(q[0], q[1], q[2], q[3]) > 0.05) return q;
  }
}

// ------------------------------------------------------------------ criteria

Outcome butterfly_lemma() {
  Worst on;
  int checked = 0, converse_bad = 0;
  double converse_min = INFINITY;
  for (int t = 0; t < 200; ++t) {
    const Polygon bf = testkit::random_butterfly();
    for (int s = 0; s < 5;) {
      const double L = uniform(0.05, 3.0);
      if (testkit::near_side(bf, L, 1e-3)) continue;
      on.add(distance_from_identity(monodromy_product(bf, L)));
      ++checked;
      ++s;
    }
  }
  for (int t = 0; t < 200; ++t) {
    const Polygon q = random_non_butterfly_quad();
    double L;
    do L = uniform(0.05, 3.0);
    while (testkit::near_side(q, L, 1e-3));
    const double d = distance_from_identity(monodromy_product(q, L));
    converse_min = std::min(converse_min, d);
    converse_bad += d <= 1e-6;
  }
  return {on.value <= 1e-9 && converse_bad == 0,
          fmt("%d butterfly cases, max distance from identity %.2e (<= 1e-9); ", checked, on.value) +
              fmt("non-butterflies: min distance %.2e (> 1e-6), %d failures", converse_min, converse_bad)};
}

Outcome lorentz_theorem() {
  Worst defect, action;
  for (int dim = 2; dim <= 5; ++dim) {
    for (int t = 0; t < 100; ++t) {
      Vec x = testkit::random_point(dim);
      x.normalize();
      const double a = uniform(0.1, 2.0);
      double ell;
      do ell = uniform(0.1, 2.0);
      while (std::abs(ell - a) < 1e-2);
      const LorentzMatrix m = edge_lorentz(ell, a, x);
      defect.add(lorentz_defect(m));
      Vec u = testkit::random_point(dim);
      u.normalize();
      action.add((lorentz_action(m, u) - direction_step(u, x, a, ell)).norm());
    }
  }
  return {defect.value <= 1e-9 && action.value <= 1e-10,
          fmt("dims 2-5, 400 edges: max |M^T G M - G| %.2e (<= 1e-9), max action gap %.2e (<= 1e-10)", defect.value,
              action.value)};
}

Outcome conjugacy() {
  Worst w;
  int points = 0;
  for (int t = 0; t < 50; ++t) {
    const auto pr = testkit::random_pair(uniform_int(4, 8));
    const double d = pr.v.diameter();
    for (int g = 0; g < 50; ++g) {
      double lam = d * (0.05 + 1.95 * g / 49.0);
      while (testkit::near_side(pr.v, lam, 1e-2) || testkit::near_side(pr.w, lam, 1e-2)) lam *= 1.013;
      w.add(rel(monodromy_tr2_over_det(pr.v, lam), monodromy_tr2_over_det(pr.w, lam)));
      ++points;
    }
  }
  return {w.value <= 1e-8, fmt("50 pairs x 50 lambda (%d points): max relative gap in Tr^2/det %.2e (<= 1e-8)",
                               points, w.value)};
}

Outcome bianchi() {
  int done = 0, failed = 0;
  Worst d;
  const Tolerance tol{1e-8, 1e-8};
  while (done < 50) {
    const Polygon v = testkit::random_polygon(uniform_int(3, 8));
    const auto l = testkit::hyperbolic_length(v), m = testkit::hyperbolic_length(v);
    if (!l || !m || std::abs(*l - *m) < 1e-2) continue;
    Polygon w, s;
    try {
      w = transform(v, *l);
      s = transform(v, *m);
    } catch (const BicycleError&) {
      continue;
    }
    ++done;
    try {
      const Polygon t = bianchi_fourth_polygon(v, w, s, tol);
      const bool ok = correspondence_check(s, t, tol, *l) && correspondence_check(w, t, tol, *m);
      failed += !ok;
      d.add(std::max(trapezoid_defect(s, t, *l), trapezoid_defect(w, t, *m)) / v.perimeter());
    } catch (const BicycleError&) {
      ++failed;
    }
  }
  return {failed == 0 && d.value <= 1e-8,
          fmt("50 triples: %d failed checks, max trapezoid defect / perimeter %.2e (<= 1e-8)", failed, d.value)};
}

Outcome recut_theorem() {
  Worst inv, comm, kite;
  int recuts = 0;
  for (int t = 0; t < 50; ++t) {
    const auto pr = testkit::random_pair(uniform_int(4, 8));
    const Polygon& v = pr.v;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(v.size()); ++i) {
      const Polygon r = recut(v, i);
      for (int s = 0; s < 3; ++s) {
        double lam;
        do lam = uniform(0.05, 2.0) * v.diameter();
        while (testkit::near_side(v, lam, 1e-2));
        inv.add(rel(monodromy_tr2_over_det(v, lam), monodromy_tr2_over_det(r, lam)));
      }
      const Polygon a = transform(r, pr.L);
      const Polygon b = recut(pr.w, i);
      comm.add(max_vertex_distance(a, b) / v.perimeter());
      ++recuts;
    }
  }
  // parallelogram ABCD against the kite AECD, E the recut of B
  for (int t = 0; t < 20; ++t) {
    const Vec a = testkit::random_point(2), ab = testkit::random_point(2), ad = testkit::random_point(2);
    if (std::abs(cross2(ab, ad)) < 0.1) {
      --t;
      continue;
    }
    const Polygon par({a, a + ab, a + ab + ad, a + ad});
    const Polygon kt = recut(par, 1);
    for (int s = 0; s < 5;) {
      const double lam = uniform(0.05, 3.0);
      if (testkit::near_side(par, lam, 1e-2)) continue;
      kite.add(projective_distance(monodromy_product(par, lam), monodromy_product(kt, lam)));
      ++s;
    }
  }
  return {inv.value <= 1e-8 && comm.value <= 1e-8 && kite.value <= 1e-9,
          fmt("%d recuts: Tr^2/det gap %.2e (<= 1e-8), |T R - R T| / perimeter %.2e (<= 1e-8); ", recuts, inv.value,
              comm.value) +
              fmt("kite vs parallelogram, 20 x 5 lambda: projective distance %.2e (<= 1e-9)", kite.value)};
}

struct InvariantGaps {
  Worst area, j, ccm, perimeter, sides;
  void compare(const Polygon& v, const Polygon& w) {
    const double d = std::max({1.0, v.diameter(), w.diameter()});
    area.add(area_bivector(v).max_abs_diff(area_bivector(w)) / (d * d));
    j.add((j_vector(v) - j_vector(w)).norm() / (d * d * d));
    if (v.dim() == 2) {
      ccm.add((circumcenter_of_mass(v) - circumcenter_of_mass(w)).norm() / d);
      perimeter.add(std::abs(v.perimeter() - w.perimeter()) / d);
      auto sv = v.sides(), sw = w.sides();
      std::sort(sv.begin(), sv.end());
      std::sort(sw.begin(), sw.end());
      for (std::size_t i = 0; i < sv.size(); ++i) sides.add(std::abs(sv[i] - sw[i]) / d);
    }
  }
  double max() const { return std::max({area.value, j.value, ccm.value, perimeter.value, sides.value}); }
};

Outcome conserved_quantities() {
  InvariantGaps tr, rc, space;
  for (int t = 0; t < 100; ++t) {
    const auto pr = testkit::random_pair(uniform_int(3, 9));
    tr.compare(pr.v, pr.w);
    rc.compare(pr.v, recut(pr.v, uniform_int(0, static_cast<int>(pr.v.size()) - 1)));
  }
  int built = 0;
  while (built < 50) {
    const Polygon v = testkit::random_polygon(uniform_int(3, 8), 3);
    const double L = uniform(0.05, 0.3) * v.perimeter();
    try {
      const Polygon w = transform_lorentz(v, L);
      if (trapezoid_defect(v, w, L) > 1e-9 * v.perimeter()) continue;
      space.compare(v, w);
      ++built;
    } catch (const BicycleError&) {
    }
  }
  const double bound = 1e-9;
  return {tr.max() <= bound && rc.max() <= bound && space.max() <= bound,
          fmt("100 planar pairs: worst scaled gap %.2e under transform, %.2e under recut; ", tr.max(), rc.max()) +
              fmt("50 pairs in R^3: A %.2e, J %.2e (all <= 1e-9 * scale)", space.area.value, space.j.value)};
}

Outcome trace_polynomial_shape() {
  Worst odd, c2, ck;
  for (int t = 0; t < 100; ++t) {
    const Polygon v = testkit::random_polygon(uniform_int(3, 10));
    const TracePoly p = trace_polynomial(v);
    const std::size_t k = v.size();
    double top = 0;
    for (double c : p.coeffs) top = std::max(top, std::abs(c));
    for (std::size_t i = 1; i < p.coeffs.size(); i += 2) odd.add(std::abs(p.coeffs[i]) / top);
    double sum_sq = 0, prod = 1, alt = 0;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
      const Vec e = v.edge(i);
      sum_sq += e.squaredNorm();
      prod *= e.norm();
      alt += (i % 2 == 0 ? 1 : -1) * std::atan2(e[1], e[0]);
    }
    c2.add(rel(p.coeffs[2], -0.5 * sum_sq));
    if (k % 2 == 0) ck.add(std::abs(p.coeffs[k] - prod * std::cos(alt)) / prod);
  }
  const TracePoly tri = trace_polynomial(Polygon{{0, 0}, {3, 0}, {3, 4}});
  const double tri_gap = std::abs(tri.coeffs[2] + 25.0) / 25.0;
  return {odd.value <= 1e-9 && c2.value <= 1e-10 && ck.value <= 1e-9 && tri_gap <= 1e-10,
          fmt("100 polygons: max |c_odd| / max|c| %.2e (<= 1e-9), c_2 relative gap %.2e (<= 1e-10), ", odd.value,
              c2.value) +
              fmt("c_k / (a_1..a_k) vs cos(alternating sum) %.2e (<= 1e-9); 3-4-5 triangle c_2 = %.15g", ck.value,
                  tri.coeffs[2])};
}

Outcome inscribed() {
  const Polygon sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const ScanResult scan = scan_serial(sq, 0.05, 3.0, 59);
  const double gap = scan.boundaries.size() == 1 ? std::abs(scan.boundaries[0] - std::sqrt(2.0)) : INFINITY;
  Worst rot;
  int cases = 0;
  for (int t = 0; t < 20; ++t) {
    const Polygon v = testkit::random_cyclic_convex(uniform_int(3, 9), uniform(0.5, 2.0));
    const CyclicInfo info = classify_cyclic(v);
    for (int s = 0; s < 10; ++s) {
      const double L = info.d * (0.02 + 0.96 * s / 9.0);
      const double a = 2 * std::asin(L / info.d);
      const Polygon w = transform(v, L);
      const double dist = std::min(max_vertex_distance(w, rotated_about(v, info.center, a)),
                                   max_vertex_distance(w, rotated_about(v, info.center, -a)));
      rot.add(dist / info.d);
      ++cases;
    }
  }
  return {gap <= 1e-10 && rot.value <= 1e-9,
          fmt("unit square: %zu boundary, |b - sqrt 2| = %.2e (<= 1e-10); ", scan.boundaries.size(),
              gap) +
              fmt("%d inscribed cases on (0, d): max distance to a rotation / d %.2e (<= 1e-9)", cases, rot.value)};
}

Outcome quadrilaterals() {
  int generic = 0, wrong_count = 0;
  Worst bgap;
  while (generic < 50) {
    const Polygon q = random_non_butterfly_quad();
    const QuadClassification c = classify_quadrilateral(q);
    if (c.kind != QuadClassification::Kind::GenericConcentric) continue;
    if (c.r1 - c.r2 < 0.05 * (c.r1 + c.r2) || c.r1 + c.r2 > 20) continue;
    ++generic;
    const ScanResult s = scan_parallel(q, 1e-3 * (c.r1 + c.r2), 2.0 * (c.r1 + c.r2), 400);
    if (s.boundaries.size() != 2) {
      ++wrong_count;
      continue;
    }
    bgap.add(std::abs(s.boundaries[0] - (c.r1 - c.r2)));
    bgap.add(std::abs(s.boundaries[1] - (c.r1 + c.r2)));
  }

  // parallel diagonals: A, C on y = 0 and B, D on y = g
  int glide_ok = 0;
  double worst_linearity = 0;
  for (int t = 0; t < 10; ++t) {
    const double g = uniform(0.3, 1.0);
    const Polygon q{{uniform(-1, -0.2), 0}, {uniform(-1, 1), g}, {uniform(0.2, 1), 0}, {uniform(-1, 1), g}};
    const QuadClassification c = classify_quadrilateral(q);
    if (c.kind != QuadClassification::Kind::ParallelDiagonals) continue;
    const double L = c.gap * uniform(1.5, 3.0);
    if (testkit::near_side(q, L, 1e-2)) {
      --t;
      continue;
    }
    std::vector<Polygon> orbit{q};
    try {
      for (int n = 0; n < 50; ++n) {
        // the branch that does not lead back to the previous polygon
        const Polygon a = transform(orbit.back(), L), b = transform(orbit.back(), L, Branch::Repelling);
        const Polygon& prev = orbit.size() > 1 ? orbit[orbit.size() - 2] : q;
        orbit.push_back(orbit.size() > 1 && max_vertex_distance(a, prev) < max_vertex_distance(b, prev) ? b : a);
      }
    } catch (const BicycleError&) {
      continue;
    }
    // distance of the centroid from the start against n
    const Vec c0 = centroid(q);
    const double step = (centroid(orbit[2]) - c0).norm() / 2;
    double lin = 0;
    for (std::size_t n = 2; n < orbit.size(); n += 2)
      lin = std::max(lin, std::abs((centroid(orbit[n]) - c0).norm() - step * static_cast<double>(n)) / (step * n));
    worst_linearity = std::max(worst_linearity, lin);
    glide_ok += step > 1e-3 && lin < 1e-6;
  }

  Worst closure;
  for (int t = 0; t < 20; ++t) {
    const Polygon bf = testkit::random_butterfly();
    for (int s = 0; s < 12; ++s) {
      const double L = uniform(0.05, 2.0), a = uniform(-kPi, kPi);
      closure.add(propagate(bf, bf[0] + L * make_vec({std::cos(a), std::sin(a)})).closure_defect / bf.perimeter());
    }
  }
  return {wrong_count == 0 && bgap.value <= 1e-8 && glide_ok == 10 && closure.value <= 1e-9,
          fmt("50 generic: %d scans with wrong boundary count, max |b - (r1 -+ r2)| %.2e (<= 1e-8); ",
              wrong_count, bgap.value) +
              fmt("parallel diagonals: %d/10 orbits linear over 50 steps (worst %.1e); butterflies: closure %.2e",
                  glide_ok, worst_linearity, closure.value)};
}

struct PairSample {
  testkit::RandomPair pr;
  BicyclePair pair;
};

std::vector<PairSample>& pair_samples() {
  static std::vector<PairSample> samples = [] {
    std::vector<PairSample> out;
    for (int t = 0; t < 50; ++t) {
      auto pr = testkit::random_pair(uniform_int(3, 8));
      BicyclePair p = BicyclePair::make(pr.v, pr.w);
      out.push_back({std::move(pr), std::move(p)});
    }
    return out;
  }();
  return samples;
}

Outcome eigenvalues() {
  Worst products, vs_matrix;
  for (const PairSample& s : pair_samples()) {
    const auto e = eigenvalue_products(s.pair, rear_track(s.pair));
    products.add(rel(e.lambda_vw, e.lambda_chain));
    const double mu = std::abs(attracting_multiplier(monodromy_product(s.pr.v, s.pr.L)));
    vs_matrix.add(rel(e.lambda_vw, mu));
    vs_matrix.add(rel(e.lambda_chain, mu));
  }
  // parabolic pairs: generic quadrilaterals at L = r1 + r2 and r1 - r2, where
  // the partner is the concentric one with W_1 opposite to or in line with V_1
  Worst parabolic;
  int par = 0;
  while (par < 20) {
    const Polygon q = random_non_butterfly_quad();
    const QuadClassification c = classify_quadrilateral(q);
    if (c.kind != QuadClassification::Kind::GenericConcentric || c.r1 - c.r2 < 0.1 || c.r1 > 10) continue;
    const Vec d = q[0] - c.center;
    const double a0 = std::atan2(d[1], d[0]);
    for (double turn : {kPi, 0.0}) {
      const Polygon w = concentric_transform(q, a0 + turn);
      const BicyclePair pair = BicyclePair::make(q, w);
      try {
        const auto e = eigenvalue_products(pair, rear_track(pair));
        parabolic.add(std::abs(e.lambda_vw - 1));
        parabolic.add(std::abs(e.lambda_chain - 1));
      } catch (const BicycleError&) {
        parabolic.add(INFINITY);
      }
    }
    ++par;
  }
  return {products.value <= 1e-8 && vs_matrix.value <= 1e-7 && parabolic.value <= 1e-7,
          fmt("50 pairs: lambda_vw vs lambda_chain %.2e (<= 1e-8), vs matrix eigenvalue ratio %.2e (<= 1e-7); ",
              products.value, vs_matrix.value) +
              fmt("40 parabolic pairs: max |lambda - 1| %.2e (<= 1e-7)", parabolic.value)};
}

Outcome angle_recurrence() {
  Worst residual, linear;
  int sign_ok = 0, steps = 0;
  const double h = 1e-6;
  auto direction = [](const Vec& e) { return std::atan2(e[1], e[0]); };
  for (const PairSample& s : pair_samples()) {
    residual.add(verify_difference_equation(s.pair));
    const Polygon& v = s.pr.v;
    const Polygon& w = s.pr.w;
    const double L = s.pr.L;
    // Perturb the frame direction at V_{i-1} by +-h, take one step and read
    // the variation at V_i: the ratio u_i / u_{i-1}.
    for (std::ptrdiff_t i = 1; i <= static_cast<std::ptrdiff_t>(v.size()); ++i) {
      const double a = direction(w[i - 1] - v[i - 1]);
      auto out = [&](double da) {
        const Vec seed = v[i - 1] + L * make_vec({std::cos(a + da), std::sin(a + da)});
        return direction(bicycle_step(v[i - 1], v[i], seed) - v[i]);
      };
      const double ratio = std::remainder(out(h) - out(-h), 2 * kPi) / (2 * h);
      const double lhs = ratio * (v[i] - w[i - 1]).norm();
      const double rhs = (v[i - 1] - w[i]).norm();
      linear.add(rel(std::abs(lhs), rhs));
      sign_ok += (ratio > 0) == (L > (v[i] - v[i - 1]).norm());
      ++steps;
    }
  }
  return {residual.value <= 1e-8 && linear.value <= 1e-7,
          fmt("50 pairs: difference equation residual %.2e (< 1e-8); |u_i| |V_i W_i-1| vs |u_i-1| |V_i-1 W_i| "
              "relative gap %.2e (<= 1e-7), ",
              residual.value, linear.value) +
              fmt("sign of u_i / u_i-1 equals sign(L - c_i) in %d/%d steps", sign_ok, steps)};
}

Outcome rear_track_chain() {
  Worst tangency, midpoints, recon;
  int sign_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const auto pr = testkit::random_pair(uniform_int(3, 9));
    const double scale = std::max(1.0, pr.v.diameter());
    try {
      const BicyclePair pair = BicyclePair::make(pr.v, pr.w);
      const RearTrack track = rear_track(pair);
      tangency.add(chain_tangency_defect(track) / scale);
      const auto rv = reconstruct(track, 0.5 * pair.length), rw = reconstruct(track, -0.5 * pair.length);
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pr.v.size()); ++i) {
        const auto u = static_cast<std::size_t>(i);
        midpoints.add((track.q[u] - 0.5 * (pr.v[i] + pr.w[i])).norm() / scale);
        recon.add(std::max((rv[u] - pr.v[i]).norm(), (rw[u] - pr.w[i]).norm()) / scale);
      }
    } catch (const BicycleError&) {
      ++sign_failures;
    }
  }
  return {tangency.value <= 1e-9 && midpoints.value <= 1e-12 && recon.value <= 1e-9 && sign_failures == 0,
          fmt("100 pairs: tangency %.2e (<= 1e-9), midpoints %.2e (<= 1e-12), ", tangency.value, midpoints.value) +
              fmt("reconstruction %.2e (<= 1e-9), %d sign assignment failures", recon.value, sign_failures)};
}

Outcome rigidity() {
  int constructed_bad = 0;
  for (int k : {1, 3, 5}) {
    for (int r = 0; r < 10; ++r) {
      const double ratio = 0.2 + 1.6 * r / 9.0;
      constructed_bad += !ngon_verify(ngon_construct({4 * k, k, 1.0, ratio, 0.3}), k);
    }
  }
  const RigidReport rep = rigid_check(2, 10000, 1);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "(4k,k) constructions k=1,3,5 x 10 ratios: %d failed; octagon search, %d trials: %d converged, "
                "%d verified, %d regular, %d non-regular verified",
                constructed_bad, rep.trials, rep.converged, rep.verified, rep.regular, rep.counterexamples);
  return {constructed_bad == 0 && rep.counterexamples == 0, buf};
}

Outcome recut_group() {
  Worst involution, commute, braid;
  for (int dim : {2, 3}) {
    for (int t = 0; t < 50; ++t) {
      const Polygon v = testkit::random_polygon(uniform_int(5, 9), dim);
      const auto k = static_cast<std::ptrdiff_t>(v.size());
      for (std::ptrdiff_t i = 0; i < k; ++i) {
        involution.add(max_vertex_distance(recut(recut(v, i), i), v));
        braid.add(max_vertex_distance(recut(recut(recut(v, i), i + 1), i),
                                      recut(recut(recut(v, i + 1), i), i + 1)));
        for (std::ptrdiff_t j = i + 2; j < k; ++j) {
          if ((j + 1) % k == i) continue;
          commute.add(max_vertex_distance(recut(recut(v, i), j), recut(recut(v, j), i)));
        }
      }
    }
  }
  return {involution.value <= 1e-9 && commute.value <= 1e-9 && braid.value <= 1e-9,
          fmt("100 polygons (dims 2, 3): R_i^2 %.2e, far commutation %.2e, braid %.2e (all <= 1e-9)",
              involution.value, commute.value, braid.value)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"butterfly monodromy is the identity, and only for butterflies", butterfly_lemma},
      {"edge matrices are Lorentz and act as the direction step", lorentz_theorem},
      {"monodromies of V and T_L(V) are conjugate", conjugacy},
      {"Bianchi permutability", bianchi},
      {"recutting preserves the monodromy and commutes with T_L", recut_theorem},
      {"A, J, CCM, perimeter and sides are conserved", conserved_quantities},
      {"trace polynomial: odd terms vanish, c_2 and c_k", trace_polynomial_shape},
      {"inscribed polygons: boundary at d, rotation inside", inscribed},
      {"quadrilateral regimes, glide orbits, butterfly closure", quadrilaterals},
      {"eigenvalue as products over the pair and the chain", eigenvalues},
      {"angle difference equation and its linearization", angle_recurrence},
      {"rear-track chain of circles", rear_track_chain},
      {"rigidity of bicycle (4k,k)-gons", rigidity},
      {"recutting group relations", recut_group},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s  %2zu  %s  [%.2fs]\n      %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures;
}
