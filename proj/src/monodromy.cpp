#include "bicycle/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace bicycle {

std::string_view to_string(MonodromyClass c) {
  switch (c) {
    case MonodromyClass::Elliptic: return "elliptic";
    case MonodromyClass::Parabolic: return "parabolic";
    case MonodromyClass::Hyperbolic: return "hyperbolic";
    case MonodromyClass::Identity: return "identity";
    case MonodromyClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

double projective_distance(const Mobius2& a, const Mobius2& b) {
  Eigen::Index r = 0, c = 0;
  a.m.cwiseAbs().maxCoeff(&r, &c);
  const double pa = a.m(r, c);
  const double pb = b.m(r, c);
  if (pa == 0.0 || pb == 0.0) return std::numeric_limits<double>::infinity();
  return (a.m / pa - b.m / pb).cwiseAbs().maxCoeff();
}

double distance_from_identity(const Mobius2& a) { return projective_distance(a, Mobius2{}); }

Mobius2 edge_mobius(double ell, double a, double phi) {
  const double c = a * std::cos(phi), s = a * std::sin(phi);
  Mobius2 out;
  out.m << ell + c, -s, -s, ell - c;
  return out;
}

namespace {

void require_planar(const Polygon& v) {
  if (v.dim() != 2) {
    throw BicycleError(ErrorKind::DimensionMismatch, "planar polygon required, got dimension " +
                                                         std::to_string(v.dim()));
  }
}

}  // namespace

Mobius2 monodromy_product(const Polygon& v, double ell) {
  require_planar(v);
  Mobius2 m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec e = v.edge(static_cast<std::ptrdiff_t>(i));
    m = edge_mobius(ell, e.norm(), std::atan2(e[1], e[0])) * m;
  }
  return m;
}

double monodromy_tr2_over_det(const Polygon& v, double ell) {
  const double tr = monodromy_product(v, ell).trace();
  double det = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = v.edge(static_cast<std::ptrdiff_t>(i)).norm();
    det *= (ell - a) * (ell + a);
  }
  return tr * tr / det;
}

Mobius2 reverse_monodromy_product(const Polygon& v, double ell) {
  return monodromy_product(v.reversed(), ell);
}

Mobius2 polygon_monodromy(const Polygon& v, double ell, const Tolerance& tol) {
  const Mobius2 m = monodromy_product(v, ell);
  const double s = m.max_abs();
  if (s == 0.0 || std::abs(m.det()) < tol.eps_geom * s * s) {
    throw BicycleError(ErrorKind::DegenerateMonodromy,
                       "monodromy is singular at ell = " + std::to_string(ell) + " (a side has this length)");
  }
  return m;
}

double normalized_discriminant(const Mobius2& m) {
  const double tr = m.trace(), det = m.det();
  const double scale = std::max(tr * tr, 4.0 * std::abs(det));
  if (scale == 0.0) return 0.0;
  return (tr * tr - 4.0 * det) / scale;
}

MonodromyClass classify(const Mobius2& m, const Tolerance& tol) {
  const double s = m.max_abs();
  if (s == 0.0) return MonodromyClass::Degenerate;
  const auto& a = m.m;
  if (std::abs(a(0, 1)) <= tol.eps_geom * s && std::abs(a(1, 0)) <= tol.eps_geom * s &&
      std::abs(a(0, 0) - a(1, 1)) <= tol.eps_geom * s) {
    return MonodromyClass::Identity;
  }
  if (std::abs(m.det()) <= tol.eps_geom * s * s) return MonodromyClass::Degenerate;
  const double disc = normalized_discriminant(m);
  if (disc > tol.eps_class) return MonodromyClass::Hyperbolic;
  if (disc < -tol.eps_class) return MonodromyClass::Elliptic;
  return MonodromyClass::Parabolic;
}

double angle_of_homogeneous(const Eigen::Vector2d& h) {
  double alpha = 2.0 * std::atan2(h[0], h[1]);
  if (alpha <= -std::numbers::pi) alpha += 2.0 * std::numbers::pi;
  if (alpha > std::numbers::pi) alpha -= 2.0 * std::numbers::pi;
  return alpha;
}

Eigen::Vector2d homogeneous_of_angle(double alpha) { return {std::sin(alpha / 2), std::cos(alpha / 2)}; }

namespace {

// Null vector of m - mu I, taken from the better-conditioned row.
Eigen::Vector2d eigenvector(const Eigen::Matrix2d& m, double mu) {
  const Eigen::Matrix2d a = m - mu * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d r0 = a.row(0), r1 = a.row(1);
  const Eigen::Vector2d r = r0.squaredNorm() >= r1.squaredNorm() ? r0 : r1;
  if (r.squaredNorm() == 0.0) return {1.0, 0.0};
  return Eigen::Vector2d(-r[1], r[0]).normalized();
}

// Eigenvalues ordered by decreasing modulus, computed without cancellation.
std::pair<double, double> real_eigenvalues(double tr, double det, double disc) {
  const double root = std::sqrt(std::max(disc, 0.0));
  const double big = 0.5 * (tr + (tr >= 0 ? root : -root));
  if (big == 0.0) return {0.0, 0.0};
  return {big, det / big};
}

}  // namespace

FixedDirections fixed_directions(const Mobius2& m, const Tolerance& tol) {
  FixedDirections out;
  out.cls = classify(m, tol);
  const double tr = m.trace(), det = m.det();
  switch (out.cls) {
    case MonodromyClass::Identity:
      return out;
    case MonodromyClass::Elliptic:
      throw BicycleError(ErrorKind::NoRealFixedPoint, "elliptic monodromy has no real fixed direction");
    case MonodromyClass::Parabolic: {
      out.points.push_back({angle_of_homogeneous(eigenvector(m.m, 0.5 * tr)), 1.0});
      return out;
    }
    case MonodromyClass::Degenerate: {
      if (std::abs(tr) <= tol.eps_geom * m.max_abs()) {
        throw BicycleError(ErrorKind::DegenerateMonodromy, "nilpotent monodromy has no attracting direction");
      }
      out.points.push_back({angle_of_homogeneous(eigenvector(m.m, tr)), 0.0});
      out.points.push_back({angle_of_homogeneous(eigenvector(m.m, 0.0)), std::numeric_limits<double>::infinity()});
      return out;
    }
    case MonodromyClass::Hyperbolic: {
      const auto [big, small] = real_eigenvalues(tr, det, tr * tr - 4.0 * det);
      // The fixed point of the larger eigenvalue attracts with derivative small/big.
      out.points.push_back({angle_of_homogeneous(eigenvector(m.m, big)), small / big});
      out.points.push_back({angle_of_homogeneous(eigenvector(m.m, small)), big / small});
      return out;
    }
  }
  return out;
}

std::optional<double> attracting_direction(const Mobius2& m, const Tolerance& tol) {
  const MonodromyClass cls = classify(m, tol);
  if (cls == MonodromyClass::Elliptic || cls == MonodromyClass::Identity) return std::nullopt;
  const double tr = m.trace();
  if (cls == MonodromyClass::Degenerate) {
    if (std::abs(tr) <= tol.eps_geom * m.max_abs()) return std::nullopt;
    return angle_of_homogeneous(eigenvector(m.m, tr));
  }
  if (cls == MonodromyClass::Parabolic) return angle_of_homogeneous(eigenvector(m.m, 0.5 * tr));
  const auto [big, small] = real_eigenvalues(tr, m.det(), tr * tr - 4.0 * m.det());
  (void)small;
  return angle_of_homogeneous(eigenvector(m.m, big));
}

double TracePoly::evaluate(double ell) const {
  double acc = 0;
  for (double c : coeffs) acc = acc * ell + c;
  return acc;
}

TracePoly trace_polynomial(const Polygon& v) {
  require_planar(v);
  // terms[d] is the matrix coefficient of ell^d in the running product.
  std::vector<Eigen::Matrix2d> terms{Eigen::Matrix2d::Identity()};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec e = v.edge(static_cast<std::ptrdiff_t>(i));
    const double a = e.norm(), phi = std::atan2(e[1], e[0]);
    Eigen::Matrix2d side;
    side << std::cos(phi), -std::sin(phi), -std::sin(phi), -std::cos(phi);
    side *= a;
    std::vector<Eigen::Matrix2d> next(terms.size() + 1, Eigen::Matrix2d::Zero());
    for (std::size_t d = 0; d < terms.size(); ++d) {
      next[d + 1] += terms[d];
      next[d] += side * terms[d];
    }
    terms = std::move(next);
  }
  const std::size_t k = v.size();
  TracePoly poly;
  poly.coeffs.resize(k + 1);
  for (std::size_t j = 0; j <= k; ++j) poly.coeffs[j] = 0.5 * terms[k - j].trace();
  return poly;
}

Vec direction_step(const Vec& u, const Vec& x, double a, double ell, const Tolerance& tol) {
  require_same_dim(u, x);
  const double ux = u.dot(x);
  const double denom = ell * ell + a * a - 2.0 * a * ell * ux;  // |ell u - a x|^2
  if (denom <= tol.eps_geom * (ell * ell + a * a)) {
    throw BicycleError(ErrorKind::PoleAtEllEqualsA, "frame direction along a side of length ell");
  }
  const Vec num = (ell * ell - a * a) * u + (2.0 * a * a * ux - 2.0 * a * ell) * x;
  return num / denom;
}

namespace {

Eigen::MatrixXd lorentz_form(int n) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n + 1, n + 1);
  g(n, n) = -1.0;
  return g;
}

}  // namespace

double lorentz_defect(const LorentzMatrix& m) {
  const Eigen::MatrixXd g = lorentz_form(m.n());
  return (m.m.transpose() * g * m.m - g).cwiseAbs().maxCoeff();
}

LorentzMatrix edge_lorentz(double ell, double a, const Vec& x, const Tolerance& tol) {
  const double d = ell * ell - a * a;
  if (std::abs(d) <= tol.eps_geom * (ell * ell + a * a)) {
    throw BicycleError(ErrorKind::PoleAtEllEqualsA, "side length equals the frame length");
  }
  const int n = static_cast<int>(x.size());
  LorentzMatrix out = LorentzMatrix::identity(n);
  out.m.topLeftCorner(n, n) += (2.0 * a * a / d) * x * x.transpose();
  const Vec xi = -(2.0 * a * ell / d) * x;
  out.m.topRightCorner(n, 1) = xi;
  out.m.bottomLeftCorner(1, n) = xi.transpose();
  out.m(n, n) = (ell * ell + a * a) / d;
  return out;
}

Vec lorentz_action(const LorentzMatrix& m, const Vec& u, const Tolerance& tol) {
  const int n = m.n();
  if (u.size() != n) {
    throw BicycleError(ErrorKind::DimensionMismatch, "vector of dimension " + std::to_string(u.size()) +
                                                         " for a Lorentz matrix of order " + std::to_string(n + 1));
  }
  const Eigen::VectorXd image = m.m.topLeftCorner(n, n) * u + m.m.topRightCorner(n, 1);
  const double denom = m.m.bottomLeftCorner(1, n).row(0).dot(u) + m.m(n, n);
  if (std::abs(denom) <= tol.eps_geom * std::max(1.0, m.m.cwiseAbs().maxCoeff())) {
    throw BicycleError(ErrorKind::ProjectiveDenominatorZero, "projective action sends u to infinity");
  }
  return (image / denom).normalized();
}

LorentzMatrix lorentz_monodromy(const Polygon& v, double ell, const Tolerance& tol) {
  LorentzMatrix m = LorentzMatrix::identity(v.dim());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec e = v.edge(static_cast<std::ptrdiff_t>(i));
    const double a = e.norm();
    m = edge_lorentz(ell, a, e / a, tol) * m;
  }
  return m;
}

std::optional<Vec> lorentz_attracting_direction(const LorentzMatrix& m, const Tolerance& tol) {
  const int n = m.n();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m.m);
  if (solver.info() != Eigen::Success) return std::nullopt;
  const auto values = solver.eigenvalues();
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i].imag()) > 1e-9 * std::abs(values[i])) continue;
    if (best < 0 || std::abs(values[i]) > std::abs(values[best])) best = i;
  }
  if (best < 0) return std::nullopt;
  const Eigen::VectorXd v = solver.eigenvectors().col(best).real();
  if (std::abs(v[n]) <= tol.eps_geom * v.norm()) return std::nullopt;
  Vec u = v.head(n) / v[n];
  // Reject non-null eigenvectors (no fixed point on the sphere).
  if (std::abs(u.norm() - 1.0) > 1e-6) return std::nullopt;
  u.normalize();
  // Polish with a few rounds of the projective action; the point attracts.
  for (int it = 0; it < 8; ++it) u = lorentz_action(m, u, tol);
  return u;
}

}  // namespace bicycle
