#include "bicycle/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bicycle {

Bivector::Bivector(int n) : n_(n), upper_(static_cast<std::size_t>(n * (n - 1) / 2), 0.0) {}

std::size_t Bivector::slot(int i, int j) const {
  // i < j; rows of the strict upper triangle laid out one after another
  return static_cast<std::size_t>(i * (2 * n_ - i - 1) / 2 + (j - i - 1));
}

double Bivector::operator()(int i, int j) const {
  if (i == j) return 0.0;
  return i < j ? upper_[slot(i, j)] : -upper_[slot(j, i)];
}

void Bivector::add(int i, int j, double value) {
  if (i == j) return;
  if (i < j) {
    upper_[slot(i, j)] += value;
  } else {
    upper_[slot(j, i)] -= value;
  }
}

double Bivector::max_abs_diff(const Bivector& other) const {
  if (other.n_ != n_) throw BicycleError(ErrorKind::DimensionMismatch, "bivectors of different dimension");
  double d = 0;
  for (std::size_t s = 0; s < upper_.size(); ++s) d = std::max(d, std::abs(upper_[s] - other.upper_[s]));
  return d;
}

double Bivector::max_abs() const {
  double d = 0;
  for (double x : upper_) d = std::max(d, std::abs(x));
  return d;
}

Bivector area_bivector(const Polygon& v) {
  const int n = v.dim();
  Bivector a(n);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto idx = static_cast<std::ptrdiff_t>(k);
    const Vec& p = v[idx];
    const Vec& q = v[idx + 1];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) a.add(i, j, p[i] * q[j] - p[j] * q[i]);
  }
  return a;
}

Vec j_vector(const Polygon& v) {
  Vec j = Vec::Zero(v.dim());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    j += (v[i + 1].squaredNorm() - v[i - 1].squaredNorm()) * v[i];
  }
  return j;
}

Vec j_vector_alt(const Polygon& v) {
  Vec j = Vec::Zero(v.dim());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    j += v[i].squaredNorm() * (v[i - 1] - v[i + 1]);
  }
  return j;
}

namespace {

void require_planar(const Polygon& v) {
  if (v.dim() != 2) throw BicycleError(ErrorKind::DimensionMismatch, "planar polygon required");
}

Vec rot90(const Vec& p) {
  Vec r(2);
  r << -p[1], p[0];
  return r;
}

}  // namespace

Vec circumcenter_of_mass(const Polygon& v, const Tolerance& tol) {
  require_planar(v);
  const double a = area_bivector(v).scalar();
  const double d = v.diameter();
  if (std::abs(a) <= tol.eps_geom * d * d) {
    throw BicycleError(ErrorKind::ZeroArea, "circumcenter of mass undefined for zero signed area");
  }
  return rot90(j_vector(v)) / (2.0 * a);
}

Vec circumcenter(const Vec& a, const Vec& b, const Vec& c) {
  const Vec ab = b - a, ac = c - a;
  const double d = 2.0 * cross2(ab, ac);
  Vec o(2);
  o << ac[1] * ab.squaredNorm() - ab[1] * ac.squaredNorm(), ab[0] * ac.squaredNorm() - ac[0] * ab.squaredNorm();
  return a + o / d;
}

Vec ccm_triangulation_oracle(const Polygon& v, std::size_t apex) {
  require_planar(v);
  const auto k = static_cast<std::ptrdiff_t>(v.size());
  const auto a = static_cast<std::ptrdiff_t>(apex);
  const double d = v.diameter();
  Vec sum = Vec::Zero(2);
  double total = 0;
  for (std::ptrdiff_t s = 1; s + 1 < k; ++s) {
    const Vec& p = v[a];
    const Vec& q = v[a + s];
    const Vec& r = v[a + s + 1];
    const double area = 0.5 * cross2(q - p, r - p);
    total += area;
    if (std::abs(area) <= 1e-14 * d * d) continue;
    sum += area * circumcenter(p, q, r);
  }
  if (std::abs(total) <= 1e-12 * d * d) {
    throw BicycleError(ErrorKind::ZeroArea, "fan triangulation has zero total area");
  }
  return sum / total;
}

double ChainCircle::radius() const {
  return curvature == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / curvature;
}

RearTrack rear_track(const BicyclePair& pair, const Tolerance& tol) {
  if (pair.v.dim() != 2) {
    throw BicycleError(ErrorKind::DimensionMismatch, "the rear-track chain is built in the plane");
  }
  const std::size_t k = pair.v.size();
  const double L = pair.length;
  std::vector<Vec> e(k);
  RearTrack track;
  track.q.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    track.q[i] = 0.5 * (pair.v[idx] + pair.w[idx]);
    e[i] = (pair.v[idx] - pair.w[idx]) / L;
  }

  // Signed distance along e from Q to each center, and the center side seen
  // from the next tangency point.
  std::vector<double> signed_r(k);
  std::vector<Vec> centers(k);
  std::vector<bool> line(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t n = (j + 1) % k;
    const double c = cross2(e[j], e[n]);
    if (std::abs(c) <= tol.eps_geom) {
      line[j] = true;
      continue;
    }
    const Vec dq = track.q[n] - track.q[j];
    const double s = cross2(dq, e[n]) / c;  // Q_j + s e_j lies on line n
    signed_r[j] = s;
    centers[j] = track.q[j] + s * e[j];
  }

  for (std::size_t j = 0; j < k; ++j) {
    if (!line[j] && std::abs(signed_r[j]) <= tol.eps_geom * L) {
      throw BicycleError(ErrorKind::SignAssignmentFailure, "chain member " + std::to_string(j) + " has zero radius");
    }
  }
  const bool has_line = std::find(line.begin(), line.end(), true) != line.end();

  // Relative signs from the tangency type at each Q_i: centers on opposite
  // sides of Q_i (exterior tangency) keep the sign. Lines carry no sign, so
  // a chain containing one takes its signs from the frame orientation.
  std::vector<int> sign(k + 1, 1);
  if (!has_line) {
    auto side = [&](std::size_t j, std::size_t i) { return (centers[j] - track.q[i]).dot(e[i]) > 0 ? 1 : -1; };
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t i = j % k;
      const bool exterior = side(j - 1, i) != side(i, i);
      sign[j] = exterior ? sign[j - 1] : -sign[j - 1];
    }
    if (sign[k] != sign[0]) {
      throw BicycleError(ErrorKind::SignAssignmentFailure, "odd number of interior tangencies");
    }
  } else {
    for (std::size_t j = 0; j < k; ++j) sign[j] = line[j] || signed_r[j] > 0 ? 1 : -1;
  }
  int flip = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (line[j]) continue;
    flip = (signed_r[j] > 0) == (sign[j] > 0) ? 1 : -1;
    break;
  }
  track.circles.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const int s = sign[j] * flip;
    ChainCircle& c = track.circles[j];
    if (line[j]) {
      c.direction = s * e[j];
      continue;
    }
    if ((signed_r[j] > 0) != (s > 0)) {
      throw BicycleError(ErrorKind::SignAssignmentFailure,
                         "propagated sign disagrees with the frame orientation at member " + std::to_string(j));
    }
    c.center = centers[j];
    c.curvature = s / (centers[j] - track.q[j]).norm();
  }
  return track;
}

std::vector<Vec> reconstruct(const RearTrack& track, double ell) {
  const std::size_t k = track.q.size();
  std::vector<Vec> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    const ChainCircle& prev = track.circles[(i + k - 1) % k];
    const ChainCircle& next = track.circles[i];
    if (!prev.is_line() && !next.is_line()) {
      const double rp = prev.radius(), rn = next.radius();
      if (rp + rn == 0.0) throw BicycleError(ErrorKind::PoleOnChain, "coincident chain centers");
      out[i] = ((rn - ell) * *prev.center + (rp + ell) * *next.center) / (rp + rn);
    } else if (!next.is_line()) {
      out[i] = track.q[i] + ell * (*next.center - track.q[i]) / next.radius();
    } else if (!prev.is_line()) {
      out[i] = track.q[i] + ell * (track.q[i] - *prev.center) / prev.radius();
    } else {
      out[i] = track.q[i] + ell * next.direction;
    }
  }
  return out;
}

double chain_tangency_defect(const RearTrack& track) {
  const std::size_t k = track.circles.size();
  double worst = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const ChainCircle& a = track.circles[j];
    const ChainCircle& b = track.circles[(j + 1) % k];
    if (a.is_line() || b.is_line()) continue;
    worst = std::max(worst, std::abs((*a.center - *b.center).norm() - std::abs(a.radius() + b.radius())));
  }
  return worst;
}

EigenvalueProducts eigenvalue_products(const BicyclePair& pair, const RearTrack& track, const Tolerance& tol) {
  EigenvalueProducts out;
  const std::size_t k = pair.v.size();
  double log_vw = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    log_vw += std::log((pair.v[idx - 1] - pair.w[idx]).norm()) - std::log((pair.v[idx] - pair.w[idx - 1]).norm());
  }
  out.lambda_vw = std::exp(log_vw);

  const double ell = 0.5 * pair.length;
  const double scale = std::max(pair.length, pair.v.diameter());
  double log_chain = 0;
  for (const ChainCircle& c : track.circles) {
    if (c.is_line()) continue;
    const double r = c.radius();
    if (std::abs(ell - r) <= tol.eps_geom * scale || std::abs(ell + r) <= tol.eps_geom * scale) {
      throw BicycleError(ErrorKind::PoleOnChain, "chain radius equals the half frame length");
    }
    log_chain += std::log(std::abs(ell - r)) - std::log(std::abs(ell + r));
  }
  out.lambda_chain = std::exp(log_chain);
  return out;
}

}  // namespace bicycle
