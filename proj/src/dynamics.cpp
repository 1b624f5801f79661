#include "bicycle/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bicycle {

PropagationResult propagate(const Polygon& v, const Vec& w1, const Tolerance& tol) {
  require_same_dim(v[0], w1);
  PropagationResult out;
  out.w.reserve(v.size() + 1);
  out.w.push_back(w1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    out.w.push_back(bicycle_step(v[idx], v[idx + 1], out.w.back(), tol));
  }
  out.closure_defect = (out.w.back() - out.w.front()).norm();
  return out;
}

PropagationResult propagate_backward(const Polygon& v, const Vec& w1, const Tolerance& tol) {
  require_same_dim(v[0], w1);
  const auto k = static_cast<std::ptrdiff_t>(v.size());
  PropagationResult out;
  out.w.assign(v.size() + 1, w1);
  Vec current = w1;
  // Zero-based: step from (V[i+1], W[i+1]) to W[i]; W[k] is the seed.
  for (std::ptrdiff_t i = k - 1; i >= 0; --i) {
    current = bicycle_step(v[i + 1], v[i], current, tol);
    out.w[static_cast<std::size_t>(i == 0 ? k : i)] = current;
  }
  out.closure_defect = (current - w1).norm();
  return out;
}

namespace {

Vec unit_direction(double angle) {
  Vec u(2);
  u << std::cos(angle), std::sin(angle);
  return u;
}

double derivative_at(const Mobius2& forward, double angle, const Tolerance& tol) {
  const FixedDirections fd = fixed_directions(forward, tol);
  double best = std::numeric_limits<double>::infinity(), value = 1.0;
  for (const auto& p : fd.points) {
    double gap = std::abs(std::remainder(p.angle - angle, 2.0 * std::numbers::pi));
    if (gap < best) {
      best = gap;
      value = p.eigenvalue;
    }
  }
  return value;
}

Polygon polygon_from_open(std::vector<Vec> w) {
  w.pop_back();
  return Polygon(std::move(w));
}

}  // namespace

TransformResult transform_detailed(const Polygon& v, double L, Branch branch, const Tolerance& tol) {
  if (v.dim() != 2) {
    throw BicycleError(ErrorKind::DimensionMismatch, "transform needs a planar polygon; use transform_lorentz");
  }
  if (!(L > 0)) throw BicycleError(ErrorKind::InvalidPolygon, "length parameter must be positive");
  const Mobius2 forward = monodromy_product(v, L);
  const Mobius2 seed_map = branch == Branch::Attracting ? forward : reverse_monodromy_product(v, L);

  TransformResult out;
  out.cls = classify(forward, tol);
  if (out.cls == MonodromyClass::Elliptic) {
    throw BicycleError(ErrorKind::EllipticMonodromy, "no real fixed direction at L = " + std::to_string(L));
  }
  if (out.cls == MonodromyClass::Identity) {
    throw BicycleError(ErrorKind::IdentityMonodromy, "every seed closes at L = " + std::to_string(L));
  }
  const auto angle = attracting_direction(seed_map, tol);
  if (!angle) {
    throw BicycleError(ErrorKind::DegenerateMonodromy, "no usable fixed direction at L = " + std::to_string(L));
  }
  out.seed_angle = *angle;
  const Vec w1 = v[0] + L * unit_direction(*angle);

  PropagationResult run =
      branch == Branch::Attracting ? propagate(v, w1, tol) : propagate_backward(v, w1, tol);
  // Extra laps pull the seed further into the attracting fixed point.
  for (int lap = 0; lap < 2 && run.closure_defect > 0; ++lap) {
    PropagationResult next = branch == Branch::Attracting ? propagate(v, run.w.back(), tol)
                                                          : propagate_backward(v, run.w.back(), tol);
    if (next.closure_defect >= run.closure_defect) break;
    run = std::move(next);
  }
  out.closure_defect = run.closure_defect;

  // A parabolic fixed point is a double root: its location carries sqrt(eps) error.
  const double allowed = (out.cls == MonodromyClass::Parabolic ? std::sqrt(tol.eps_geom) : tol.eps_geom) *
                         v.perimeter();
  if (out.closure_defect > allowed) {
    throw BicycleError(ErrorKind::ClosureFailure, "closure defect " + std::to_string(out.closure_defect) +
                                                      " at L = " + std::to_string(L));
  }
  out.w = polygon_from_open(std::move(run.w));
  const Vec seed = out.w[0] - v[0];
  out.seed_angle = std::atan2(seed[1], seed[0]);
  out.eigenvalue = derivative_at(forward, out.seed_angle, tol);
  return out;
}

Polygon transform(const Polygon& v, double L, Branch branch, const Tolerance& tol) {
  return transform_detailed(v, L, branch, tol).w;
}

Polygon transform_lorentz(const Polygon& v, double L, const Tolerance& tol) {
  const LorentzMatrix m = lorentz_monodromy(v, L, tol);
  const auto u = lorentz_attracting_direction(m, tol);
  if (!u) {
    throw BicycleError(ErrorKind::NoRealFixedPoint, "Lorentz monodromy has no attracting direction");
  }
  PropagationResult run = propagate(v, v[0] + L * *u, tol);
  for (int lap = 0; lap < 2 && run.closure_defect > 0; ++lap) {
    PropagationResult next = propagate(v, run.w.back(), tol);
    if (next.closure_defect >= run.closure_defect) break;
    run = std::move(next);
  }
  if (run.closure_defect > tol.eps_geom * v.perimeter()) {
    throw BicycleError(ErrorKind::ClosureFailure, "closure defect " + std::to_string(run.closure_defect));
  }
  return polygon_from_open(std::move(run.w));
}

double correspondence_defect(const Polygon& v, const Polygon& w, std::optional<double> length) {
  if (v.size() != w.size() || v.dim() != w.dim()) return std::numeric_limits<double>::infinity();
  const std::size_t k = v.size();
  double mean = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    mean += (v[idx] - w[idx]).norm();
  }
  mean /= static_cast<double>(k);
  const double L = length.value_or(mean);
  const double scale = std::max({v.diameter(), w.diameter(), L});
  if (!(L > 0) || scale == 0.0) return std::numeric_limits<double>::infinity();

  double worst = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    worst = std::max(worst, std::abs((v[idx] - w[idx]).norm() - L));
    try {
      const Vec next = bicycle_step(v[idx], v[idx + 1], w[idx], Tolerance{1e-14, 1e-8});
      worst = std::max(worst, (next - w[idx + 1]).norm());
    } catch (const BicycleError&) {
      // W_i = V_{i+1}: the step is undefined, fall back to the metric conditions.
      worst = std::max(worst, std::abs((v[idx + 1] - w[idx + 1]).norm() - L));
      worst = std::max(worst, std::abs((w[idx] - w[idx + 1]).norm() - v.side(idx)));
      const Vec quad[4] = {v[idx], v[idx + 1], w[idx + 1], w[idx]};
      worst = std::max(worst, scale * coplanarity_defect(quad));
    }
  }
  if (mean < 1e-12 * scale) return std::numeric_limits<double>::infinity();
  return worst / scale;
}

bool correspondence_check(const Polygon& v, const Polygon& w, const Tolerance& tol, std::optional<double> length) {
  return correspondence_defect(v, w, length) <= tol.eps_geom;
}

Polygon recut(const Polygon& v, std::ptrdiff_t i, const Tolerance& tol) {
  return v.with_vertex(i, perp_bisector_reflect(v[i], v[i - 1], v[i + 1], tol));
}

Vec butterfly_fourth(const Vec& v1, const Vec& w1, const Vec& s1, const Tolerance& tol) {
  return perp_bisector_reflect(v1, w1, s1, tol);
}

Polygon bianchi_fourth_polygon(const Polygon& v, const Polygon& w, const Polygon& s, const Tolerance& tol) {
  if (v.size() != w.size() || v.size() != s.size()) {
    throw BicycleError(ErrorKind::InvalidPolygon, "Bianchi triple must have equal vertex counts");
  }
  const double scale = std::max({v.diameter(), w.diameter(), s.diameter(), (v[0] - w[0]).norm(),
                                 (v[0] - s[0]).norm()});
  if (max_vertex_distance(w, s) <= tol.eps_geom * scale) return v;

  std::vector<Vec> t;
  t.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    t.push_back(butterfly_fourth(v[idx], w[idx], s[idx], tol));
  }
  Polygon out(std::move(t));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const double along_s = (bicycle_step(s[idx], s[idx + 1], out[idx], tol) - out[idx + 1]).norm();
    const double along_w = (bicycle_step(w[idx], w[idx + 1], out[idx], tol) - out[idx + 1]).norm();
    if (std::max(along_s, along_w) > 10.0 * tol.eps_geom * scale) {
      throw BicycleError(ErrorKind::ClosureFailure,
                         "step " + std::to_string(i) + " of the fourth polygon disagrees by " +
                             std::to_string(std::max(along_s, along_w)));
    }
  }
  return out;
}

PropagationResult bianchi_propagated(const Polygon& v, const Polygon& w, const Polygon& s, bool along_s,
                                     const Tolerance& tol) {
  const Vec t1 = butterfly_fourth(v[0], w[0], s[0], tol);
  return propagate(along_s ? s : w, t1, tol);
}

std::vector<double> turning_angles(const Polygon& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    out[i] = signed_angle(v[idx - 1] - v[idx], v[idx + 1] - v[idx]);
  }
  return out;
}

std::vector<double> angle_sequence(const BicyclePair& pair) {
  std::vector<double> out(pair.v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    out[i] = signed_angle(pair.v[idx - 1] - pair.v[idx], pair.w[idx] - pair.v[idx]);
  }
  return out;
}

std::vector<double> angle_sequence_at_w(const BicyclePair& pair) {
  std::vector<double> out(pair.v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    out[i] = signed_angle(pair.v[idx - 1] - pair.w[idx - 1], pair.w[idx] - pair.w[idx - 1]);
  }
  return out;
}

BicyclePair BicyclePair::make(Polygon v, Polygon w, const Tolerance& tol) {
  if (v.dim() != 2 || w.dim() != 2) {
    throw BicycleError(ErrorKind::DimensionMismatch, "bicycle pairs with angle data are planar");
  }
  if (!correspondence_check(v, w, tol)) {
    throw BicycleError(ErrorKind::InvalidPolygon, "polygons are not in the bicycle correspondence");
  }
  BicyclePair pair{std::move(v), std::move(w), 0.0, {}};
  for (std::size_t i = 0; i < pair.v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    pair.length += (pair.v[idx] - pair.w[idx]).norm();
  }
  pair.length /= static_cast<double>(pair.v.size());
  pair.alphas = angle_sequence(pair);
  return pair;
}

double verify_difference_equation(const BicyclePair& pair, const Tolerance&) {
  const std::vector<double> theta = turning_angles(pair.v);
  const auto k = static_cast<std::ptrdiff_t>(pair.v.size());
  auto at = [k](const std::vector<double>& xs, std::ptrdiff_t i) { return xs[static_cast<std::size_t>(((i % k) + k) % k)]; };
  double worst = 0;
  for (std::ptrdiff_t i = 0; i < k; ++i) {
    const double a = at(pair.alphas, i), a_prev = at(pair.alphas, i - 1), t_prev = at(theta, i - 1);
    const double c = (pair.v[i - 1] - pair.v[i]).norm();
    const double lhs = pair.length * std::cos(0.5 * (a - a_prev + t_prev));
    const double rhs = c * std::cos(0.5 * (a + a_prev - t_prev));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace bicycle
