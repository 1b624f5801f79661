#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bicycle/dynamics.hpp"
#include "bicycle/families.hpp"
#include "bicycle/invariants.hpp"
#include "bicycle/monodromy.hpp"
#include "bicycle/polygon_io.hpp"
#include "bicycle/svg.hpp"
#include "bicycle/sweep.hpp"

namespace {

using json = nlohmann::json;
using namespace bicycle;

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kInputError = 2;
constexpr double kDeg = std::numbers::pi / 180.0;

struct Globals {
  std::optional<double> tol;
  bool json = false;
  Tolerance t;
};

json vec_json(const Vec& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

json polygon_json(const Polygon& v) {
  json a = json::array();
  for (const Vec& p : v.vertices()) a.push_back(vec_json(p));
  return a;
}

json tol_json(const Tolerance& t) { return {{"eps_geom", t.eps_geom}, {"eps_class", t.eps_class}}; }

std::string vec_text(const Vec& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) s += fmt::format("{}{:.12g}", i ? ", " : "", p[i]);
  return s + ")";
}

void row(const std::string& key, const std::string& value) { fmt::print("{:<18}{}\n", key, value); }

void print_vertices(const Polygon& v) {
  for (std::size_t i = 0; i < v.size(); ++i) row(i == 0 ? "vertices" : "", vec_text(v.vertices()[i]));
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

PolygonFile load(const std::string& path) { return load_polygon(path); }

void require_planar(const Polygon& v, const std::string& what) {
  if (v.dim() != 2) {
    throw BicycleError(ErrorKind::DimensionMismatch, what + " needs a planar polygon, got dim " + std::to_string(v.dim()));
  }
}

// Human-readable description of the elliptic L-range containing L.
std::string elliptic_range(const Polygon& v, double L, const Tolerance& tol) {
  if (v.dim() != 2) return {};
  const CyclicInfo cyc = classify_cyclic(v, tol);
  if (cyc.is_cyclic_convex) return fmt::format("inscribed polygon: elliptic for L > d = {:.12g}", cyc.d);
  if (v.size() == 4) {
    const QuadClassification q = classify_quadrilateral(v, tol);
    if (q.kind == QuadClassification::Kind::GenericConcentric) {
      return fmt::format("quadrilateral: elliptic for L < r1 - r2 = {:.12g} and L > r1 + r2 = {:.12g}", q.r1 - q.r2,
                         q.r1 + q.r2);
    }
    if (q.kind == QuadClassification::Kind::ParallelDiagonals) {
      return fmt::format("parallel diagonals: elliptic for L < {:.12g}", q.gap);
    }
  }
  const double hi = std::max(2.0 * L, 2.0 * v.perimeter());
  const ScanResult scan = scan_parallel(v, 1e-6 * hi, hi, 4000, tol);
  std::optional<double> below, above;
  for (double b : scan.boundaries) {
    if (b < L) below = b;
    if (b > L && !above) above = b;
  }
  return fmt::format("elliptic on ({:.12g}, {}) by scan", below.value_or(0.0),
                     above ? fmt::format("{:.12g}", *above) : fmt::format("beyond {:.12g}", hi));
}

void write_polygon(const std::string& out, const Polygon& v, const std::string& name) {
  if (!out.empty()) save_polygon(out, v, name);
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
  std::string input, output, branch = "attracting";
  double L = 0;
  std::optional<double> seed_deg;
};

int cmd_transform(const TransformArgs& a, const Globals& g) {
  const PolygonFile in = load(a.input);
  const Polygon& v = in.polygon;
  json rep = {{"input", a.input}, {"L", a.L}, {"tolerance", tol_json(g.t)}};
  Polygon w;
  bool closes = true;
  double defect = 0;

  if (a.seed_deg) {
    Vec dir = Vec::Zero(v.dim());
    dir[0] = std::cos(*a.seed_deg * kDeg);
    dir[1] = std::sin(*a.seed_deg * kDeg);
    const PropagationResult run = propagate(v, v[0] + a.L * dir, g.t);
    defect = run.closure_defect;
    closes = defect <= g.t.eps_geom * v.perimeter();
    std::vector<Vec> pts(run.w.begin(), run.w.end() - 1);
    w = Polygon(std::move(pts));
    rep["seed_angle_deg"] = *a.seed_deg;
    rep["closes"] = closes;
  } else {
    const Branch b = a.branch == "repelling" ? Branch::Repelling : Branch::Attracting;
    TransformResult res;
    try {
      res = transform_detailed(v, a.L, b, g.t);
    } catch (const BicycleError& e) {
      if (e.kind() == ErrorKind::EllipticMonodromy) {
        throw BicycleError(e.kind(), fmt::format("no real bicycle partner at L = {:.12g}; {}", a.L,
                                                 elliptic_range(v, a.L, g.t)));
      }
      if (e.kind() == ErrorKind::IdentityMonodromy) {
        throw BicycleError(e.kind(), "every seed closes (Darboux butterfly or similar); pass --seed-angle");
      }
      throw;
    }
    w = res.w;
    defect = res.closure_defect;
    rep["branch"] = a.branch;
    rep["class"] = std::string(to_string(res.cls));
    rep["seed_angle_deg"] = res.seed_angle / kDeg;
    rep["eigenvalue"] = res.eigenvalue;
  }
  rep["closure_defect"] = defect;
  write_polygon(a.output, w, in.name.empty() ? "" : in.name + " transformed");

  if (g.json) {
    if (a.output.empty()) rep["w"] = polygon_json(w);
    print_json(rep);
  } else {
    row("input", fmt::format("{} ({} vertices, dim {})", a.input, v.size(), v.dim()));
    row("L", fmt::format("{:.12g}", a.L));
    if (a.seed_deg) {
      row("seed angle", fmt::format("{:.12g} deg", *a.seed_deg));
    } else {
      row("branch", a.branch);
      row("class", rep["class"].get<std::string>());
      row("seed angle", fmt::format("{:.12g} deg", rep["seed_angle_deg"].get<double>()));
      row("eigenvalue", fmt::format("{:.12g}", rep["eigenvalue"].get<double>()));
    }
    row("closure defect", fmt::format("{:.3e}", defect));
    row("tolerance", fmt::format("{:g}", g.t.eps_geom));
    if (a.output.empty()) {
      print_vertices(w);
    } else {
      row("written", a.output);
    }
  }
  if (!closes) {
    std::cerr << fmt::format("error: seed does not close (defect {:.3e})\n", defect);
    return kVerificationFailed;
  }
  return kOk;
}

// --------------------------------------------------------------- invariants

struct Invariants {
  Bivector A{2};
  Vec J;
  std::optional<Vec> ccm;
  std::string ccm_note;
  double perimeter = 0;
  std::vector<double> sides;
};

Invariants compute_invariants(const Polygon& v, const Tolerance& tol) {
  Invariants out{area_bivector(v), j_vector(v), std::nullopt, {}, v.perimeter(), v.sides()};
  if (v.dim() != 2) {
    out.ccm_note = "n/a (planar only)";
  } else {
    try {
      out.ccm = circumcenter_of_mass(v, tol);
    } catch (const BicycleError& e) {
      if (e.kind() != ErrorKind::ZeroArea) throw;
      out.ccm_note = "undefined (zero area)";
    }
  }
  return out;
}

json bivector_json(const Bivector& b) {
  json a = json::array();
  for (int i = 0; i < b.dim(); ++i)
    for (int j = i + 1; j < b.dim(); ++j) a.push_back({{"i", i}, {"j", j}, {"value", b(i, j)}});
  return a;
}

std::string bivector_text(const Bivector& b) {
  if (b.dim() == 2) return fmt::format("{:.12g}", b.scalar());
  std::string s;
  for (int i = 0; i < b.dim(); ++i)
    for (int j = i + 1; j < b.dim(); ++j) s += fmt::format("{}[{}{}] {:.12g}", s.empty() ? "" : "  ", i, j, b(i, j));
  return s;
}

struct InvariantsArgs {
  std::string input, other;
  std::vector<double> lengths;
};

int cmd_invariants(const InvariantsArgs& a, const Globals& g) {
  const PolygonFile in = load(a.input);
  const Polygon& v = in.polygon;
  const Invariants inv = compute_invariants(v, g.t);
  json rep = {{"input", a.input}, {"tolerance", tol_json(g.t)}, {"dim", v.dim()}, {"vertices", v.size()}};
  rep["A"] = bivector_json(inv.A);
  rep["J"] = vec_json(inv.J);
  rep["CCM"] = inv.ccm ? vec_json(*inv.ccm) : json(inv.ccm_note);
  rep["perimeter"] = inv.perimeter;
  rep["sides"] = inv.sides;
  std::optional<TracePoly> tp;
  if (v.dim() == 2) {
    tp = trace_polynomial(v);
    rep["trace_polynomial"] = tp->coeffs;
  }
  json mono = json::array();
  for (double L : a.lengths) {
    const ScanRow r = scan_point(v, L, g.t);
    json e = {{"L", L}, {"class", std::string(to_string(r.cls))}, {"tr2_over_det", r.tr2_over_det}};
    if (r.eig_attracting) e["eigenvalue"] = *r.eig_attracting;
    mono.push_back(e);
  }
  if (!a.lengths.empty()) rep["monodromy"] = mono;

  bool ok = true;
  json deltas;
  json pair_json;
  if (!a.other.empty()) {
    const Polygon w = load(a.other).polygon;
    if (w.dim() != v.dim() || w.size() != v.size()) {
      throw BicycleError(ErrorKind::DimensionMismatch, "the two polygons differ in size or dimension");
    }
    const Invariants iw = compute_invariants(w, g.t);
    const double d = std::max({1.0, v.diameter(), w.diameter()});
    auto check = [&](const std::string& key, double delta, double scale) {
      const bool pass = delta <= g.t.eps_geom * scale;
      ok = ok && pass;
      deltas[key] = {{"delta", delta}, {"bound", g.t.eps_geom * scale}, {"ok", pass}};
    };
    check("A", inv.A.max_abs_diff(iw.A), d * d);
    check("J", (inv.J - iw.J).lpNorm<Eigen::Infinity>(), d * d * d);
    if (inv.ccm && iw.ccm) check("CCM", (*inv.ccm - *iw.ccm).lpNorm<Eigen::Infinity>(), d);
    check("perimeter", std::abs(inv.perimeter - iw.perimeter), d);
    std::vector<double> sv = inv.sides, sw = iw.sides;
    std::sort(sv.begin(), sv.end());
    std::sort(sw.begin(), sw.end());
    double ds = 0;
    for (std::size_t i = 0; i < sv.size(); ++i) ds = std::max(ds, std::abs(sv[i] - sw[i]));
    check("sides", ds, d);

    const bool corr = correspondence_check(v, w, g.t);
    pair_json["bicycle_pair"] = corr;
    if (corr && v.dim() == 2) {
      const BicyclePair pair = BicyclePair::make(v, w, g.t);
      pair_json["L"] = pair.length;
      try {
        const RearTrack track = rear_track(pair, g.t);
        json radii = json::array();
        for (const ChainCircle& c : track.circles) radii.push_back(c.is_line() ? json("line") : json(c.radius()));
        pair_json["rear_track_radii"] = radii;
        const EigenvalueProducts e = eigenvalue_products(pair, track, g.t);
        pair_json["lambda_vw"] = e.lambda_vw;
        pair_json["lambda_chain"] = e.lambda_chain;
      } catch (const BicycleError& e) {
        pair_json["rear_track_error"] = e.what();
      }
    }
    rep["other"] = a.other;
    rep["deltas"] = deltas;
    rep["pair"] = pair_json;
  }

  if (g.json) {
    print_json(rep);
  } else {
    row("polygon", fmt::format("{} ({} vertices, dim {})", a.input, v.size(), v.dim()));
    row("tolerance", fmt::format("eps_geom {:g}, eps_class {:g}", g.t.eps_geom, g.t.eps_class));
    row("A", bivector_text(inv.A));
    row("J", vec_text(inv.J));
    row("CCM", inv.ccm ? vec_text(*inv.ccm) : inv.ccm_note);
    row("perimeter", fmt::format("{:.12g}", inv.perimeter));
    std::string sides;
    for (double s : inv.sides) sides += fmt::format("{}{:.12g}", sides.empty() ? "" : " ", s);
    row("sides", sides);
    if (tp) {
      for (std::size_t i = 0; i < tp->coeffs.size(); ++i) {
        row(i == 0 ? "trace poly" : "", fmt::format("c{} = {:.12g}", i, tp->coeffs[i]));
      }
    }
    for (const auto& e : mono) {
      row("monodromy", fmt::format("L = {:.12g}  {}  tr2/det = {:.12g}{}", e["L"].get<double>(),
                                   e["class"].get<std::string>(), e["tr2_over_det"].get<double>(),
                                   e.contains("eigenvalue") ? fmt::format("  eigenvalue = {:.12g}",
                                                                          e["eigenvalue"].get<double>())
                                                            : std::string()));
    }
    if (!a.other.empty()) {
      row("compared with", a.other);
      for (const auto& [key, d] : deltas.items()) {
        row("delta " + key, fmt::format("{:.3e}  (bound {:.1e})  {}", d["delta"].get<double>(),
                                        d["bound"].get<double>(), d["ok"].get<bool>() ? "ok" : "CHANGED"));
      }
      row("bicycle pair", pair_json["bicycle_pair"].get<bool>() ? "yes" : "no");
      if (pair_json.contains("L")) row("L", fmt::format("{:.12g}", pair_json["L"].get<double>()));
      if (pair_json.contains("rear_track_radii")) {
        std::string radii;
        for (const auto& r : pair_json["rear_track_radii"])
          radii += (radii.empty() ? "" : " ") + (r.is_string() ? r.get<std::string>() : fmt::format("{:.9g}", r.get<double>()));
        row("rear-track radii", radii);
      }
      if (pair_json.contains("lambda_vw")) {
        row("lambda_vw", fmt::format("{:.12g}", pair_json["lambda_vw"].get<double>()));
        row("lambda_chain", fmt::format("{:.12g}", pair_json["lambda_chain"].get<double>()));
      }
      if (pair_json.contains("rear_track_error")) row("eigenvalues", pair_json["rear_track_error"].get<std::string>());
    }
  }
  return ok ? kOk : kVerificationFailed;
}

// --------------------------------------------------------------------- scan

struct Grid {
  double lo = 0, hi = 0;
  int steps = 0;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  const auto a = text.find(':'), b = text.rfind(':');
  try {
    if (a == std::string::npos || a == b) throw std::invalid_argument(text);
    g.lo = std::stod(text.substr(0, a));
    g.hi = std::stod(text.substr(a + 1, b - a - 1));
    g.steps = std::stoi(text.substr(b + 1));
  } catch (const std::exception&) {
    throw BicycleError(ErrorKind::InvalidPolygon, "--grid expects min:max:steps, got '" + text + "'");
  }
  return g;
}

struct ScanArgs {
  std::string input;
  std::string grid;
};

int cmd_scan(const ScanArgs& a, const Globals& g) {
  const Polygon v = load(a.input).polygon;
  require_planar(v, "scan");
  Grid grid;
  if (a.grid.empty()) {
    grid = {1e-3 * v.diameter(), 2.0 * v.diameter(), 200};
  } else {
    grid = parse_grid(a.grid);
  }
  const ScanResult res = scan_parallel(v, grid.lo, grid.hi, grid.steps, g.t);

  json predicted = json::array();
  std::string family;
  const CyclicInfo cyc = classify_cyclic(v, g.t);
  if (cyc.is_cyclic_convex) {
    family = "inscribed convex";
    predicted.push_back(cyc.d);
  } else if (v.size() == 4) {
    const QuadClassification q = classify_quadrilateral(v, g.t);
    family = std::string(to_string(q.kind));
    if (q.kind == QuadClassification::Kind::GenericConcentric) predicted = {q.r1 - q.r2, q.r1 + q.r2};
    if (q.kind == QuadClassification::Kind::ParallelDiagonals) predicted = {q.gap};
  }

  if (g.json) {
    json rows = json::array();
    for (const ScanRow& r : res.rows) {
      json e = {{"L", r.L},
                {"class", std::string(to_string(r.cls))},
                {"tr2_over_det", r.tr2_over_det},
                {"discriminant", r.discriminant}};
      e["eigenvalue"] = r.eig_attracting ? json(*r.eig_attracting) : json(nullptr);
      rows.push_back(e);
    }
    json rep = {{"input", a.input}, {"tolerance", tol_json(g.t)}, {"rows", rows}, {"boundaries", res.boundaries}};
    if (!family.empty()) {
      rep["family"] = family;
      rep["predicted_boundaries"] = predicted;
    }
    print_json(rep);
    return kOk;
  }
  fmt::print("{:>16}  {:<11} {:>16} {:>14} {:>16}\n", "L", "class", "tr2/det", "discriminant", "eigenvalue");
  for (const ScanRow& r : res.rows) {
    fmt::print("{:>16.10g}  {:<11} {:>16.10g} {:>14.6e} {:>16}\n", r.L, to_string(r.cls), r.tr2_over_det,
               r.discriminant, r.eig_attracting ? fmt::format("{:.10g}", *r.eig_attracting) : "-");
  }
  fmt::print("\n");
  row("tolerance", fmt::format("eps_geom {:g}, eps_class {:g}", g.t.eps_geom, g.t.eps_class));
  std::string bs;
  for (double b : res.boundaries) bs += fmt::format("{}{:.15g}", bs.empty() ? "" : "  ", b);
  row("boundaries", bs.empty() ? "none" : bs);
  if (!family.empty()) {
    std::string ps;
    for (const auto& p : predicted) ps += fmt::format("{}{:.15g}", ps.empty() ? "" : "  ", p.get<double>());
    row("family", family);
    if (!ps.empty()) row("predicted", ps);
  }
  return kOk;
}

// ---------------------------------------------------------------------- svg

struct SvgArgs {
  std::vector<std::string> inputs;
  std::string output;
  bool rear = false;
  std::vector<double> ngon;
  std::optional<double> L;
  double scale = 120;
};

NGonSpec ngon_spec(const std::vector<double>& p) {
  if (p.size() < 2 || p.size() > 4) throw BicycleError(ErrorKind::InvalidPolygon, "ngon takes n k [r1 r2]");
  for (std::size_t i = 0; i < 2; ++i)
    if (p[i] != std::floor(p[i])) throw BicycleError(ErrorKind::InvalidPolygon, "n and k must be integers");
  NGonSpec s;
  s.n = static_cast<int>(p[0]);
  s.k = static_cast<int>(p[1]);
  if (p.size() > 2) s.r1 = p[2];
  if (p.size() > 3) s.r2 = p[3];
  return s;
}

int cmd_svg(const SvgArgs& a, const Globals& g) {
  static const char* palette[] = {"#1f4e79", "#b03a2e", "#1e8449", "#7d3c98"};
  SvgScene scene;
  std::vector<Polygon> polys;
  for (const std::string& path : a.inputs) {
    polys.push_back(load(path).polygon);
    require_planar(polys.back(), "svg");
  }
  for (std::size_t i = 0; i < polys.size(); ++i) scene.polygons.push_back({polys[i], palette[i % 4], i % 2 == 1});

  if (a.rear) {
    if (polys.size() != 2) throw BicycleError(ErrorKind::WrongArity, "--rear-track needs exactly two polygons V W");
    const BicyclePair pair = BicyclePair::make(polys[0], polys[1], g.t);
    const RearTrack track = rear_track(pair, g.t);
    scene.circles = track.circles;
    scene.points = track.q;
    for (std::size_t i = 0; i < polys[0].size(); ++i) scene.segments.push_back({polys[0].vertices()[i], polys[1].vertices()[i]});
  }
  if (!a.ngon.empty()) {
    const NGonSpec spec = ngon_spec(a.ngon);
    const Polygon v = ngon_construct(spec);
    scene.polygons.push_back({v, palette[scene.polygons.size() % 4], false});
    for (std::ptrdiff_t i = 0; i < spec.n; ++i) scene.segments.push_back({v[i], v[i + spec.k]});
    for (double r : {spec.r1, spec.r2}) {
      ChainCircle c;
      c.center = Vec::Zero(2);
      c.curvature = 1.0 / r;
      scene.circles.push_back(c);
    }
  }
  if (a.L) {
    if (polys.empty()) throw BicycleError(ErrorKind::WrongArity, "--ell arrows need an input polygon");
    const Polygon& v = polys[0];
    const Mobius2 m = monodromy_product(v, *a.L);
    if (classify(m, g.t) != MonodromyClass::Elliptic && classify(m, g.t) != MonodromyClass::Identity) {
      for (const FixedDirection& f : fixed_directions(m, g.t).points) {
        scene.arrows.push_back({v[0], v[0] + *a.L * make_vec({std::cos(f.angle), std::sin(f.angle)})});
      }
    }
  }
  if (scene.polygons.empty()) throw BicycleError(ErrorKind::WrongArity, "nothing to draw");

  SvgOptions opt;
  opt.pixels_per_unit = a.scale;
  const std::string doc = render_svg(scene, opt);
  if (a.output.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw BicycleError(ErrorKind::InvalidPolygon, "cannot write " + a.output);
    out << doc;
  }
  return kOk;
}

// --------------------------------------------------------------------- ngon

struct NGonArgs {
  std::vector<double> params;
  std::string verify, output;
  int k = 0;
  double phase_deg = 0;
};

int cmd_ngon(const NGonArgs& a, const Globals& g) {
  Polygon v;
  int k = a.k;
  std::string label;
  if (!a.verify.empty()) {
    if (k < 1) throw BicycleError(ErrorKind::InvalidPolygon, "--verify needs -k");
    v = load(a.verify).polygon;
    require_planar(v, "ngon");
    label = a.verify;
  } else {
    NGonSpec spec = ngon_spec(a.params);
    spec.phase = a.phase_deg * kDeg;
    v = ngon_construct(spec);
    k = spec.k;
    label = fmt::format("({}, {})-gon r1 = {:g} r2 = {:g}", spec.n, spec.k, spec.r1, spec.r2);
    write_polygon(a.output, v, fmt::format("bicycle ({},{})-gon", spec.n, spec.k));
  }
  const NGonReport rep = ngon_verify_report(v, k, g.t);
  if (g.json) {
    json j = {{"polygon", label},
              {"k", k},
              {"tolerance", tol_json(g.t)},
              {"ok", rep.ok},
              {"side_spread", rep.side_spread},
              {"diagonal_spread", rep.diagonal_spread},
              {"butterfly_residuals", rep.butterfly_residuals},
              {"worst_index", rep.worst_index},
              {"worst_residual", rep.worst_residual}};
    if (a.verify.empty() && a.output.empty()) j["vertices"] = polygon_json(v);
    print_json(j);
  } else {
    row("polygon", label);
    row("k", std::to_string(k));
    row("tolerance", fmt::format("{:g}", g.t.eps_geom));
    row("side spread", fmt::format("{:.3e}", rep.side_spread));
    row("diagonal spread", fmt::format("{:.3e}", rep.diagonal_spread));
    for (std::size_t i = 0; i < rep.butterfly_residuals.size(); ++i) {
      row(i == 0 ? "butterflies" : "", fmt::format("{:>3}  {:.3e}", i, rep.butterfly_residuals[i]));
    }
    row("worst", fmt::format("{:.3e} at {}", rep.worst_residual, rep.worst_index));
    row("verdict", rep.ok ? "bicycle polygon" : "NOT a bicycle polygon");
    if (a.verify.empty()) {
      if (a.output.empty()) {
        print_vertices(v);
      } else {
        row("written", a.output);
      }
    }
  }
  if (!rep.ok) {
    std::cerr << fmt::format("error: verification failed, worst butterfly residual {:.3e} at index {}\n",
                             rep.worst_residual, rep.worst_index);
    return kVerificationFailed;
  }
  return kOk;
}

// -------------------------------------------------------------------- recut

struct RecutArgs {
  std::string input, output;
  long index = 0;
  std::vector<double> lengths;
};

int cmd_recut(const RecutArgs& a, const Globals& g) {
  const PolygonFile in = load(a.input);
  const Polygon& v = in.polygon;
  const auto k = static_cast<long>(v.size());
  if (a.index < 0 || a.index >= k) {
    throw BicycleError(ErrorKind::InvalidPolygon, fmt::format("vertex index {} out of range 0..{}", a.index, k - 1));
  }
  const Polygon r = recut(v, a.index, g.t);
  write_polygon(a.output, r, in.name);
  json checks = json::array();
  bool ok = true;
  if (v.dim() == 2) {
    for (double L : a.lengths) {
      const double before = monodromy_tr2_over_det(v, L), after = monodromy_tr2_over_det(r, L);
      const bool pass = std::abs(before - after) <= 1e3 * g.t.eps_geom * std::max(1.0, std::abs(before));
      ok = ok && pass;
      checks.push_back({{"L", L}, {"before", before}, {"after", after}, {"ok", pass}});
    }
  }
  if (g.json) {
    json j = {{"input", a.input}, {"index", a.index}, {"tolerance", tol_json(g.t)}, {"tr2_over_det", checks}};
    if (a.output.empty()) j["vertices"] = polygon_json(r);
    print_json(j);
  } else {
    row("input", a.input);
    row("recut vertex", std::to_string(a.index));
    row("tolerance", fmt::format("{:g}", g.t.eps_geom));
    for (const auto& c : checks) {
      row("tr2/det", fmt::format("L = {:.12g}  {:.15g} -> {:.15g}  {}", c["L"].get<double>(), c["before"].get<double>(),
                                 c["after"].get<double>(), c["ok"].get<bool>() ? "ok" : "CHANGED"));
    }
    if (a.output.empty()) {
      print_vertices(r);
    } else {
      row("written", a.output);
    }
  }
  return ok ? kOk : kVerificationFailed;
}

// --------------------------------------------------------------- rear-track

struct PairArgs {
  std::string v, w;
};

int cmd_rear_track(const PairArgs& a, const Globals& g) {
  const Polygon v = load(a.v).polygon, w = load(a.w).polygon;
  require_planar(v, "rear-track");
  const BicyclePair pair = BicyclePair::make(v, w, g.t);
  const RearTrack track = rear_track(pair, g.t);
  const double defect = chain_tangency_defect(track);
  std::optional<EigenvalueProducts> eig;
  std::string eig_note;
  try {
    eig = eigenvalue_products(pair, track, g.t);
  } catch (const BicycleError& e) {
    eig_note = e.what();
  }
  const double bound = g.t.eps_geom * std::max(1.0, v.diameter());
  const bool ok = defect <= bound;

  if (g.json) {
    json circles = json::array();
    for (const ChainCircle& c : track.circles) {
      if (c.is_line()) {
        circles.push_back({{"line", true}, {"direction", vec_json(c.direction)}});
      } else {
        circles.push_back({{"center", vec_json(*c.center)}, {"radius", c.radius()}});
      }
    }
    json q = json::array();
    for (const Vec& p : track.q) q.push_back(vec_json(p));
    json j = {{"L", pair.length}, {"tolerance", tol_json(g.t)}, {"circles", circles}, {"tangency_points", q},
              {"tangency_defect", defect}};
    if (eig) {
      j["lambda_vw"] = eig->lambda_vw;
      j["lambda_chain"] = eig->lambda_chain;
    } else {
      j["eigenvalue_error"] = eig_note;
    }
    print_json(j);
  } else {
    row("L", fmt::format("{:.12g}", pair.length));
    row("tolerance", fmt::format("{:g}", g.t.eps_geom));
    for (std::size_t j = 0; j < track.circles.size(); ++j) {
      const ChainCircle& c = track.circles[j];
      row(j == 0 ? "circles" : "", c.is_line() ? fmt::format("{:>3}  line along {}", j, vec_text(c.direction))
                                               : fmt::format("{:>3}  center {}  radius {:.12g}", j,
                                                             vec_text(*c.center), c.radius()));
    }
    row("tangency defect", fmt::format("{:.3e}", defect));
    if (eig) {
      row("lambda_vw", fmt::format("{:.12g}", eig->lambda_vw));
      row("lambda_chain", fmt::format("{:.12g}", eig->lambda_chain));
    } else {
      row("eigenvalues", eig_note);
    }
  }
  return ok ? kOk : kVerificationFailed;
}

// ------------------------------------------------------------------ bianchi

struct BianchiArgs {
  std::string v, w, s, output;
};

int cmd_bianchi(const BianchiArgs& a, const Globals& g) {
  const Polygon v = load(a.v).polygon, w = load(a.w).polygon, s = load(a.s).polygon;
  if (!correspondence_check(v, w, g.t)) throw BicycleError(ErrorKind::InvalidPolygon, "V and W are not a bicycle pair");
  if (!correspondence_check(v, s, g.t)) throw BicycleError(ErrorKind::InvalidPolygon, "V and S are not a bicycle pair");
  const double l = (v[0] - w[0]).norm(), m = (v[0] - s[0]).norm();
  const Polygon t = bianchi_fourth_polygon(v, w, s, g.t);
  write_polygon(a.output, t, "bianchi fourth");
  const bool st = correspondence_check(s, t, g.t, l), wt = correspondence_check(w, t, g.t, m);
  const double dst = correspondence_defect(s, t, l), dwt = correspondence_defect(w, t, m);
  if (g.json) {
    json j = {{"l", l}, {"m", m}, {"tolerance", tol_json(g.t)}, {"S_T", {{"ok", st}, {"defect", dst}}},
              {"W_T", {{"ok", wt}, {"defect", dwt}}}};
    if (a.output.empty()) j["vertices"] = polygon_json(t);
    print_json(j);
  } else {
    row("l = |V1 W1|", fmt::format("{:.12g}", l));
    row("m = |V1 S1|", fmt::format("{:.12g}", m));
    row("tolerance", fmt::format("{:g}", g.t.eps_geom));
    row("S ~ T at l", fmt::format("{}  defect {:.3e}", st ? "yes" : "NO", dst));
    row("W ~ T at m", fmt::format("{}  defect {:.3e}", wt ? "yes" : "NO", dwt));
    if (a.output.empty()) {
      print_vertices(t);
    } else {
      row("written", a.output);
    }
  }
  return st && wt ? kOk : kVerificationFailed;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ClosureFailure:
    case ErrorKind::SignAssignmentFailure: return kVerificationFailed;
    default: return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete bicycle correspondence on closed polygons"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "geometric tolerance (overrides BICYCLE_TOL)")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "print reports as JSON");

  TransformArgs ta;
  auto* t = app.add_subcommand("transform", "bicycle transformation T_L(V)");
  t->add_option("input", ta.input, "polygon file")->required()->check(CLI::ExistingFile);
  t->add_option("-l,--ell", ta.L, "length L = |V_i W_i|")->required()->check(CLI::PositiveNumber);
  t->add_option("--branch", ta.branch, "attracting or repelling")
      ->check(CLI::IsMember({"attracting", "repelling"}));
  t->add_option("--seed-angle", ta.seed_deg, "propagate from this direction of V_1 W_1 (degrees)");
  t->add_option("-o,--output", ta.output, "write W here");

  InvariantsArgs ia;
  auto* inv = app.add_subcommand("invariants", "conserved quantities, optionally compared with a second polygon");
  inv->add_option("input", ia.input)->required()->check(CLI::ExistingFile);
  inv->add_option("other", ia.other, "second polygon for before/after deltas")->check(CLI::ExistingFile);
  inv->add_option("-l,--ell", ia.lengths, "report the monodromy at these L")->check(CLI::PositiveNumber);

  ScanArgs sa;
  auto* sc = app.add_subcommand("scan", "monodromy class over a grid of L");
  sc->add_option("input", sa.input)->required()->check(CLI::ExistingFile);
  sc->add_option("--grid", sa.grid, "min:max:steps");

  SvgArgs va;
  auto* sv = app.add_subcommand("svg", "static figure");
  sv->add_option("inputs", va.inputs, "polygon files")->check(CLI::ExistingFile);
  sv->add_flag("--rear-track", va.rear, "draw the rear-track chain of the pair V W");
  sv->add_option("--ngon", va.ngon, "draw the bicycle (n,k)-gon: n k [r1 r2]")->expected(2, 4);
  sv->add_option("-l,--ell", va.L, "draw the fixed directions of the first polygon at L")->check(CLI::PositiveNumber);
  sv->add_option("--scale", va.scale, "pixels per unit")->check(CLI::PositiveNumber);
  sv->add_option("-o,--output", va.output);

  NGonArgs na;
  auto* ng = app.add_subcommand("ngon", "construct or verify bicycle (n,k)-gons");
  ng->add_option("params", na.params, "n k [r1 r2]")->expected(0, 4);
  ng->add_option("--verify", na.verify, "verify this polygon instead")->check(CLI::ExistingFile);
  ng->add_option("-k", na.k, "diagonal step for --verify");
  ng->add_option("--phase", na.phase_deg, "angle of the first vertex (degrees)");
  ng->add_option("-o,--output", na.output);

  RecutArgs ra;
  auto* rc = app.add_subcommand("recut", "reflect one vertex in the bisector of its neighbours");
  rc->add_option("input", ra.input)->required()->check(CLI::ExistingFile);
  rc->add_option("-i,--index", ra.index, "vertex index (0-based)")->required();
  rc->add_option("-l,--ell", ra.lengths, "compare Tr^2/det at these L")->check(CLI::PositiveNumber);
  rc->add_option("-o,--output", ra.output);

  PairArgs pa;
  auto* rt = app.add_subcommand("rear-track", "chain of circles of a bicycle pair");
  rt->add_option("v", pa.v)->required()->check(CLI::ExistingFile);
  rt->add_option("w", pa.w)->required()->check(CLI::ExistingFile);

  BianchiArgs ba;
  auto* bi = app.add_subcommand("bianchi", "fourth polygon T from pairs (V, W) and (V, S)");
  bi->add_option("v", ba.v)->required()->check(CLI::ExistingFile);
  bi->add_option("w", ba.w)->required()->check(CLI::ExistingFile);
  bi->add_option("s", ba.s)->required()->check(CLI::ExistingFile);
  bi->add_option("-o,--output", ba.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  g.t = Tolerance::from_env();
  if (g.tol) g.t.eps_geom = *g.tol;

  try {
    if (*t) return cmd_transform(ta, g);
    if (*inv) return cmd_invariants(ia, g);
    if (*sc) return cmd_scan(sa, g);
    if (*sv) return cmd_svg(va, g);
    if (*ng) return cmd_ngon(na, g);
    if (*rc) return cmd_recut(ra, g);
    if (*rt) return cmd_rear_track(pa, g);
    if (*bi) return cmd_bianchi(ba, g);
  } catch (const BicycleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
