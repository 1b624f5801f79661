#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "bicycle/dynamics.hpp"
#include "bicycle/geometry.hpp"
#include "bicycle/monodromy.hpp"

namespace testkit {

using bicycle::Polygon;
using bicycle::Vec;

constexpr double kPi = std::numbers::pi;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }
inline int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng()); }

inline Vec random_point(int dim, double r = 1.0) {
  Vec p(dim);
  for (int i = 0; i < dim; ++i) p[i] = uniform(-r, r);
  return p;
}

inline double min_side(const Polygon& v) {
  const auto s = v.sides();
  return *std::min_element(s.begin(), s.end());
}

// Random vertices in a cube, rejecting very short sides.
inline Polygon random_polygon(int k, int dim = 2, double r = 1.0) {
  for (;;) {
    std::vector<Vec> vs;
    for (int i = 0; i < k; ++i) vs.push_back(random_point(dim, r));
    Polygon v(std::move(vs));
    if (min_side(v) > 0.1 * r) return v;
  }
}

inline Polygon random_cyclic_convex(int k, double radius = 1.0) {
  std::vector<double> a;
  for (;;) {
    a.clear();
    for (int i = 0; i < k; ++i) a.push_back(uniform(0, 2 * kPi));
    std::sort(a.begin(), a.end());
    double gap = 2 * kPi - a.back() + a.front();
    for (int i = 0; i + 1 < k; ++i) gap = std::min(gap, a[i + 1] - a[i]);
    if (gap > 0.15) break;
  }
  const Vec c = random_point(2, 0.5);
  std::vector<Vec> vs;
  for (double t : a) vs.push_back(bicycle::make_vec({c[0] + radius * std::cos(t), c[1] + radius * std::sin(t)}));
  return Polygon(std::move(vs));
}

inline Polygon random_butterfly() {
  for (;;) {
    const Vec p1 = random_point(2), p2 = random_point(2), p3 = random_point(2);
    const Vec p4 = bicycle::perp_bisector_reflect(p2, p1, p3);
    try {
      Polygon q({p1, p2, p3, p4});
      if (min_side(q) > 0.1 && (p1 - p3).norm() > 0.1 && (p2 - p4).norm() > 0.1) return q;
    } catch (const bicycle::BicycleError&) {
    }
  }
}

inline bool near_side(const Polygon& v, double L, double rel = 1e-3) {
  for (double a : v.sides())
    if (std::abs(L - a) < rel * std::max(1.0, a)) return true;
  return false;
}

// A length L at which v has a clearly hyperbolic monodromy, if one is found.
inline std::optional<double> hyperbolic_length(const Polygon& v, double min_disc = 1e-3) {
  const double p = v.perimeter();
  for (int tries = 0; tries < 200; ++tries) {
    const double L = uniform(0.05, 0.5) * p;
    if (near_side(v, L)) continue;
    const auto m = bicycle::monodromy_product(v, L);
    if (bicycle::normalized_discriminant(m) > min_disc && std::abs(m.det()) > 1e-6 * m.max_abs() * m.max_abs())
      return L;
  }
  return std::nullopt;
}

struct RandomPair {
  Polygon v;
  Polygon w;
  double L;
};

// V random planar, W = T_L(V) at a hyperbolic L.
inline RandomPair random_pair(int k) {
  for (;;) {
    Polygon v = random_polygon(k);
    const auto L = hyperbolic_length(v);
    if (!L) continue;
    try {
      Polygon w = bicycle::transform(v, *L);
      if (min_side(w) > 1e-3) return {v, w, *L};
    } catch (const bicycle::BicycleError&) {
    }
  }
}

}  // namespace testkit
