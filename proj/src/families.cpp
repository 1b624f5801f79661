#include "bicycle/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bicycle/dynamics.hpp"
#include "bicycle/invariants.hpp"
#include "bicycle/sweep.hpp"

namespace bicycle {

namespace {

constexpr double kPi = std::numbers::pi;

void require_planar(const Polygon& v) {
  if (v.dim() != 2) throw BicycleError(ErrorKind::DimensionMismatch, "planar polygon required");
}

std::optional<MonodromyClass> regime_between(double L, double lo, double hi, const Tolerance& tol) {
  if (L <= tol.eps_geom) return std::nullopt;
  auto near = [&](double b) { return std::isfinite(b) && std::abs(L - b) <= tol.eps_class * b; };
  if (near(lo) || near(hi)) return MonodromyClass::Parabolic;
  return L > lo && L < hi ? MonodromyClass::Hyperbolic : MonodromyClass::Elliptic;
}

double total_turning(const Polygon& v) {
  double t = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    t += signed_angle(v[idx] - v[idx - 1], v[idx + 1] - v[idx]);
  }
  return t;
}

}  // namespace

std::optional<MonodromyClass> CyclicInfo::regime(double L, const Tolerance& tol) const {
  if (!is_cyclic_convex) return std::nullopt;
  return regime_between(L, 0.0, d, tol);
}

CyclicInfo classify_cyclic(const Polygon& v, const Tolerance& tol) {
  require_planar(v);
  CyclicInfo info;
  const double diam = v.diameter();
  if (std::abs(cross2(v[1] - v[0], v[2] - v[0])) <= tol.eps_geom * diam * diam) return info;
  info.center = circumcenter(v[0], v[1], v[2]);
  const double R = (v[0] - info.center).norm();
  info.d = 2.0 * R;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs((v[static_cast<std::ptrdiff_t>(i)] - info.center).norm() - R) > tol.eps_geom * std::max(R, diam)) {
      return info;
    }
  }
  int sign = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const double c = cross2(v[idx + 1] - v[idx], v[idx + 2] - v[idx + 1]);
    const int s = c > 0 ? 1 : (c < 0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return info;
    sign = s;
  }
  info.is_cyclic_convex = std::abs(std::abs(total_turning(v)) - 2.0 * kPi) < 1e-6;
  return info;
}

Polygon rotation_transform(const Polygon& v, double L, const Tolerance& tol) {
  const CyclicInfo info = classify_cyclic(v, tol);
  if (!info.is_cyclic_convex) throw BicycleError(ErrorKind::NotCyclic, "polygon is not convex and inscribed");
  if (L > info.d * (1.0 + tol.eps_geom)) {
    throw BicycleError(ErrorKind::ChordTooLong, "L = " + std::to_string(L) + " exceeds the circumdiameter " +
                                                    std::to_string(info.d));
  }
  const double theta = 2.0 * std::asin(std::min(L / info.d, 1.0));
  std::vector<Vec> out;
  out.reserve(v.size());
  for (const Vec& p : v.vertices()) out.push_back(rotate2(p, theta, info.center));
  return Polygon(std::move(out));
}

std::optional<ConcentricFit> fit_concentric(const Polygon& v) {
  require_planar(v);
  if (v.size() % 2 != 0) return std::nullopt;
  const auto k = static_cast<Eigen::Index>(v.size());
  // |V_i|^2 = 2 O . V_i + c_parity with c = r^2 - |O|^2
  Eigen::MatrixXd a(k, 4);
  Eigen::VectorXd b(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vec& p = v[i];
    a.row(i) << 2.0 * p[0], 2.0 * p[1], i % 2 == 0 ? 1.0 : 0.0, i % 2 == 0 ? 0.0 : 1.0;
    b[i] = p.squaredNorm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv[3] <= 1e-10 * sv[0]) return std::nullopt;
  const Eigen::VectorXd x = svd.solve(b);
  ConcentricFit fit;
  fit.center = x.head(2);
  const double q_odd = x[2] + fit.center.squaredNorm(), q_even = x[3] + fit.center.squaredNorm();
  if (q_odd <= 0 || q_even <= 0) return std::nullopt;
  fit.r_odd = std::sqrt(q_odd);
  fit.r_even = std::sqrt(q_even);
  const double diam = v.diameter();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double r = i % 2 == 0 ? fit.r_odd : fit.r_even;
    fit.residual = std::max(fit.residual, std::abs((v[i] - fit.center).norm() - r) / diam);
  }
  return fit;
}

Polygon concentric_transform(const Polygon& v, double w1_angle, const Tolerance& tol) {
  const auto fit = fit_concentric(v);
  if (!fit || fit->residual > tol.eps_geom) {
    throw BicycleError(ErrorKind::NotConcentricAlternating,
                       "alternate vertices do not lie on two concentric circles");
  }
  auto angle = [&](const Vec& p) { return std::atan2(p[1] - fit->center[1], p[0] - fit->center[0]); };
  const double a1 = angle(v[0]);
  std::vector<Vec> w;
  w.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = w1_angle + angle(v[static_cast<std::ptrdiff_t>(i)]) - a1;
    const double r = i % 2 == 0 ? fit->r_even : fit->r_odd;
    Vec p(2);
    p << fit->center[0] + r * std::cos(a), fit->center[1] + r * std::sin(a);
    w.push_back(std::move(p));
  }
  return Polygon(std::move(w));
}

std::string_view to_string(QuadClassification::Kind k) {
  switch (k) {
    case QuadClassification::Kind::GenericConcentric: return "GenericConcentric";
    case QuadClassification::Kind::ParallelDiagonals: return "ParallelDiagonals";
    case QuadClassification::Kind::Butterfly: return "Butterfly";
  }
  return "Unknown";
}

std::optional<MonodromyClass> QuadClassification::regime(double L, const Tolerance& tol) const {
  switch (kind) {
    case Kind::Butterfly:
      if (L <= tol.eps_geom) return std::nullopt;
      return MonodromyClass::Identity;
    case Kind::ParallelDiagonals: return regime_between(L, gap, std::numeric_limits<double>::infinity(), tol);
    case Kind::GenericConcentric: return regime_between(L, r1 - r2, r1 + r2, tol);
  }
  return std::nullopt;
}

QuadClassification classify_quadrilateral(const Polygon& q, const Tolerance& tol) {
  if (q.size() != 4) {
    throw BicycleError(ErrorKind::WrongArity, "a quadrilateral has 4 vertices, got " + std::to_string(q.size()));
  }
  require_planar(q);
  QuadClassification out;
  if (is_darboux_butterfly(q, tol)) return out;

  const Vec ac = q[2] - q[0], bd = q[3] - q[1];
  if (std::abs(cross2(ac, bd)) <= tol.eps_geom * ac.norm() * bd.norm()) {
    out.kind = QuadClassification::Kind::ParallelDiagonals;
    out.direction = ac.normalized();
    out.gap = std::abs(cross2(q[1] - q[0], out.direction));
    return out;
  }
  out.kind = QuadClassification::Kind::GenericConcentric;
  Eigen::Matrix2d m;
  m << ac[0], ac[1], bd[0], bd[1];
  const Eigen::Vector2d rhs(ac.dot(0.5 * (q[0] + q[2])), bd.dot(0.5 * (q[1] + q[3])));
  out.center = m.partialPivLu().solve(rhs);
  const double r_ac = (q[0] - out.center).norm(), r_bd = (q[1] - out.center).norm();
  out.r1 = std::max(r_ac, r_bd);
  out.r2 = std::min(r_ac, r_bd);
  return out;
}

Polygon ngon_construct(const NGonSpec& spec) {
  if (spec.n < 4 || spec.n % 2 != 0 || spec.k % 2 == 0 || spec.k < 1 || 2 * spec.k >= spec.n) {
    throw BicycleError(ErrorKind::InvalidPolygon, "need even n >= 4 and odd k with 1 <= k < n/2");
  }
  if (!(spec.r1 > 0) || !(spec.r2 > 0)) throw BicycleError(ErrorKind::InvalidPolygon, "radii must be positive");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    const double a = spec.phase + 2.0 * kPi * i / spec.n;
    const double r = i % 2 == 0 ? spec.r1 : spec.r2;
    out.push_back(make_vec({r * std::cos(a), r * std::sin(a)}));
  }
  return Polygon(std::move(out));
}

NGonReport ngon_verify_report(const Polygon& v, int k, const Tolerance& tol) {
  NGonReport rep;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  if (k < 1 || 2 * k >= n) return rep;
  auto spread = [](const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    return (*hi - *lo) / mean;
  };
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = (v[i + k] - v[i]).norm();
  rep.side_spread = spread(v.sides());
  rep.diagonal_spread = spread(diag);
  const double diam = v.diameter();
  rep.butterfly_residuals.resize(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double r = butterfly_residual(v[i], v[i + 1], v[i + k + 1], v[i + k]) / diam;
    rep.butterfly_residuals[static_cast<std::size_t>(i)] = r;
    if (!(r <= rep.worst_residual)) {
      rep.worst_residual = r;
      rep.worst_index = static_cast<std::size_t>(i);
    }
  }
  rep.ok = rep.side_spread <= tol.eps_geom && rep.diagonal_spread <= tol.eps_geom &&
           rep.worst_residual <= tol.eps_geom;
  return rep;
}

bool ngon_verify(const Polygon& v, int k, const Tolerance& tol) { return ngon_verify_report(v, k, tol).ok; }

bool is_regular(const Polygon& v, double tol) {
  Vec c = Vec::Zero(v.dim());
  for (const Vec& p : v.vertices()) c += p;
  c /= static_cast<double>(v.size());
  const double r0 = (v[0] - c).norm();
  const double step0 = signed_angle(v[0] - c, v[1] - c);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    if (std::abs((v[idx] - c).norm() - r0) > tol * r0) return false;
    if (std::abs(std::remainder(signed_angle(v[idx] - c, v[idx + 1] - c) - step0, 2.0 * kPi)) > tol) return false;
  }
  return true;
}

bool is_two_circle(const Polygon& v, double tol) {
  const auto fit = fit_concentric(v);
  if (!fit || fit->residual > tol) return false;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  const double step0 = signed_angle(v[0] - fit->center, v[2] - fit->center);
  const double step1 = signed_angle(v[1] - fit->center, v[3] - fit->center);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double s = signed_angle(v[i] - fit->center, v[i + 2] - fit->center);
    if (std::abs(std::remainder(s - (i % 2 == 0 ? step0 : step1), 2.0 * kPi)) > tol) return false;
  }
  return true;
}

bool rhombus_orbit_congruent(const Polygon& v, int k, double tol) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  if (n != 4 * k) return false;
  auto rhombus = [&](std::ptrdiff_t s) { return Polygon({v[s], v[s + k], v[s + 2 * k], v[s + 3 * k]}); };
  auto shape = [](const Polygon& r) {
    std::vector<double> s = r.sides();
    std::sort(s.begin(), s.end());
    std::vector<double> d = {(r[0] - r[2]).norm(), (r[1] - r[3]).norm()};
    std::sort(d.begin(), d.end());
    s.insert(s.end(), d.begin(), d.end());
    return s;
  };
  const double side = v.side(0);
  const double scale = v.diameter();
  for (std::ptrdiff_t s = 0; s < k; ++s) {
    const Polygon a = rhombus(s), b = rhombus(s + 1);
    if (correspondence_defect(a, b, side) > tol) return false;
    const auto sa = shape(a), sb = shape(b);
    for (std::size_t i = 0; i < sa.size(); ++i)
      if (std::abs(sa[i] - sb[i]) > tol * scale) return false;
  }
  return true;
}

namespace {

Polygon regular_polygon(int n) {
  std::vector<Vec> vs;
  vs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vs.push_back(make_vec({std::cos(2.0 * kPi * i / n), std::sin(2.0 * kPi * i / n)}));
  return Polygon(std::move(vs));
}

// V_0 = (0,0), V_1 = (1,0); the unknowns are the remaining coordinates.
Polygon unpack(const Eigen::VectorXd& x, int n) {
  std::vector<Vec> vs;
  vs.reserve(static_cast<std::size_t>(n));
  vs.push_back(make_vec({0.0, 0.0}));
  vs.push_back(make_vec({1.0, 0.0}));
  for (int i = 2; i < n; ++i) vs.push_back(make_vec({x[2 * (i - 2)], x[2 * (i - 2) + 1]}));
  return Polygon(std::move(vs));
}

Eigen::VectorXd pack(const Polygon& v) {
  const int n = static_cast<int>(v.size());
  Eigen::VectorXd x(2 * (n - 2));
  for (int i = 2; i < n; ++i) x.segment(2 * (i - 2), 2) = v[i];
  return x;
}

// Moves V_0 to the origin, V_1 to (1,0).
Polygon normalize(const Polygon& v) {
  const Vec d = v[1] - v[0];
  const double s = d.norm(), a = std::atan2(d[1], d[0]);
  std::vector<Vec> out;
  out.reserve(v.size());
  for (const Vec& p : v.vertices()) out.push_back(rotate2(p - v[0], -a, Vec::Zero(2)) / s);
  return Polygon(std::move(out));
}

Eigen::VectorXd ngon_residuals(const Eigen::VectorXd& x, int n, int k) {
  Eigen::VectorXd r(3 * n);
  std::vector<Vec> vs(static_cast<std::size_t>(n));
  vs[0] = make_vec({0.0, 0.0});
  vs[1] = make_vec({1.0, 0.0});
  for (int i = 2; i < n; ++i) vs[static_cast<std::size_t>(i)] = x.segment(2 * (i - 2), 2);
  auto at = [&](int i) -> const Vec& { return vs[static_cast<std::size_t>(((i % n) + n) % n)]; };
  for (int i = 0; i < n; ++i) {
    r[i] = (at(i + 1) - at(i)).norm() - 1.0;
    const Vec b = at(i + k) - perp_bisector_reflect(at(i + 1), at(i), at(i + k + 1), Tolerance{1e-14, 1e-8});
    r.segment(n + 2 * i, 2) = b;
  }
  return r;
}

}  // namespace

RigidTrial rigid_trial(const RigidSearch& search, int index) {
  RigidTrial out;
  const int k = search.k, n = 4 * k;
  std::seed_seq seq{search.seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(k)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> noise(0.0, search.noise);
  std::uniform_real_distribution<double> ratio(0.5, 1.0);

  const Polygon start = normalize(k % 2 == 0 ? regular_polygon(n) : ngon_construct({n, k, 1.0, ratio(rng), 0.0}));
  Eigen::VectorXd x = pack(start);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += noise(rng);

  try {
    Eigen::VectorXd r = ngon_residuals(x, n, k);
    double mu = 1e-3;
    const double h = 1e-7;
    Eigen::MatrixXd jac(r.size(), x.size());
    for (int it = 0; it < 100 && r.lpNorm<Eigen::Infinity>() > 1e-13; ++it) {
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        jac.col(j) = (ngon_residuals(xp, n, k) - ngon_residuals(xm, n, k)) / (2.0 * h);
      }
      const Eigen::MatrixXd a = jac.transpose() * jac;
      const Eigen::VectorXd g = jac.transpose() * r;
      bool accepted = false;
      for (int tries = 0; tries < 12 && !accepted; ++tries) {
        Eigen::MatrixXd damped = a;
        damped.diagonal().array() += mu * (1.0 + a.diagonal().array());
        const Eigen::VectorXd xn = x - damped.ldlt().solve(g);
        const Eigen::VectorXd rn = ngon_residuals(xn, n, k);
        if (rn.squaredNorm() < r.squaredNorm()) {
          x = xn;
          r = rn;
          mu = std::max(mu / 3.0, 1e-12);
          accepted = true;
        } else {
          mu *= 4.0;
        }
      }
      if (!accepted) break;
    }
    out.residual = r.lpNorm<Eigen::Infinity>();
    out.converged = out.residual < 1e-10;
    out.polygon = unpack(x, n);
  } catch (const BicycleError&) {
    return out;
  }
  const NGonReport rep = ngon_verify_report(*out.polygon, k, Tolerance{search.verify_threshold, 1e-8});
  out.verified = rep.ok;
  out.regular = is_regular(*out.polygon, 1e-6);
  out.two_circle = is_two_circle(*out.polygon, 1e-6);
  out.rhombi_congruent = rhombus_orbit_congruent(*out.polygon, k, 1e-6);
  return out;
}

RigidReport summarize_rigid(const RigidSearch& search, const std::vector<RigidTrial>& trials) {
  RigidReport rep;
  rep.k = search.k;
  rep.n = 4 * search.k;
  rep.trials = static_cast<int>(trials.size());
  for (const RigidTrial& t : trials) {
    rep.converged += t.converged;
    if (!t.verified) continue;
    ++rep.verified;
    rep.regular += t.regular;
    rep.two_circle += t.two_circle;
    rep.rhombus_failures += !t.rhombi_congruent;
    const bool allowed = search.k % 2 == 0 ? t.regular : t.two_circle;
    rep.counterexamples += !allowed;
  }
  return rep;
}

RigidReport rigid_check(int k, int trials, std::uint64_t seed) {
  RigidSearch search;
  search.k = k;
  search.trials = trials;
  search.seed = seed;
  return summarize_rigid(search, rigid_trials_parallel(search));
}

}  // namespace bicycle
