#include "planedyn/map_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace planedyn {

const char* to_string(FixedKind k) {
  switch (k) {
    case FixedKind::repelling: return "repelling";
    case FixedKind::attracting: return "attracting";
    case FixedKind::parabolic: return "parabolic";
    case FixedKind::neutral_other: return "neutral-other";
    case FixedKind::unknown: return "unknown";
  }
  return "unknown";
}

OrientationReport orientation_class(const PlaneMap& f, int trials, uint32_t seed,
                                    const Tols& tols) {
  if (trials < 1) throw Error(ErrorCode::input_error, "trials must be >= 1");
  OrientationReport rep;
  rep.note = "sampled necessary condition only; undetermined is a value";
  std::mt19937 gen(seed);
  Box domain = f.is_polynomial() ? Box{-1.6, -1.6, 1.6, 1.6} : f.domain_box();
  std::uniform_real_distribution<double> ux(domain.x0, domain.x1);
  std::uniform_real_distribution<double> uy(domain.y0, domain.y1);
  std::uniform_real_distribution<double> ur(0.2, 0.45);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double scale = std::max(domain.diameter(), 1.0);
  double eps = tols.membership_rel * scale;

  int attempts = 0;
  while (rep.valid_trials < trials && attempts < trials * 20) {
    ++attempts;
    Point c{ux(gen), uy(gen)};
    double r = ur(gen) * std::min(domain.width(), domain.height());
    if (!domain.contains({c.x - r, c.y - r}) || !domain.contains({c.x + r, c.y + r})) continue;
    PlaneCurve S = PlaneCurve::circle(c, r, 48);
    double rho = r * std::sqrt(u01(gen));
    double ang = 2 * M_PI * u01(gen);
    Point x{c.x + rho * std::cos(ang), c.y + rho * std::sin(ang)};
    Complex w = f(x.to_complex());
    int deg;
    try {
      deg = degree_along_curve(f.fn(), S, w, eps);
    } catch (const Error&) {
      continue;  // w too close to f(S); resample
    }
    ++rep.valid_trials;
    if (deg > 0)
      ++rep.positive_degrees;
    else if (deg < 0)
      ++rep.negative_degrees;
    else
      ++rep.zero_degrees;
  }
  if (rep.valid_trials > 0 && rep.positive_degrees == rep.valid_trials)
    rep.result = OrientationClass::positive;
  else if (rep.valid_trials > 0 && rep.negative_degrees == rep.valid_trials)
    rep.result = OrientationClass::negative;
  else
    rep.result = OrientationClass::undetermined;
  return rep;
}

int local_index(const PlaneMap& f, Point p, double probe_radius, const Tols& tols) {
  double r = probe_radius;
  std::optional<int> prev;
  for (int halvings = 0; halvings < 40; ++halvings) {
    int idx;
    try {
      idx = fixed_point_index(f, PlaneCurve::circle(p, r, 48), tols);
    } catch (const Error&) {
      r *= 0.5;  // another fixed point sits on this circle
      prev.reset();
      continue;
    }
    if (prev && *prev == idx) return idx;
    prev = idx;
    r *= 0.5;
    if (r < 1e-12 * std::max(1.0, probe_radius)) break;
  }
  throw Error(ErrorCode::not_isolated, "local index did not stabilize under radius halving");
}

FixedKind kind_from_multiplier(Complex lambda) {
  const double tol_mod = 1e-8;
  double m = std::abs(lambda);
  if (m > 1 + tol_mod) return FixedKind::repelling;
  if (m < 1 - tol_mod) return FixedKind::attracting;
  Complex pw = 1;
  for (int q = 1; q <= 64; ++q) {
    pw *= lambda;
    if (std::abs(pw - Complex(1, 0)) < 1e-6) return FixedKind::parabolic;
  }
  return FixedKind::neutral_other;
}

namespace {

struct Cell {
  Box box;
  int depth;
};

}  // namespace

std::vector<FixedPointRecord> locate_fixed_points(const PlaneMap& f, const Box& box,
                                                  const Tols& tols) {
  double scale = std::max(box.diameter(), 1.0);
  double eps_fix = tols.eps_fix_rel * scale;
  double stop = std::max(eps_fix * 16, scale * 1e-7);

  auto boundary_index = [&](Box b) -> int {
    // Deterministic jitter sequence when a fixed point sits on the boundary.
    const double dx[8] = {0, 1, -1, 0, 0, 1, -1, 1};
    const double dy[8] = {0, 0, 0, 1, -1, 1, 1, -1};
    for (int k = 0; k < 8; ++k) {
      Box j = b;
      j.x0 += 3 * eps_fix * dx[k];
      j.x1 += 3 * eps_fix * dx[k];
      j.y0 += 3 * eps_fix * dy[k];
      j.y1 += 3 * eps_fix * dy[k];
      try {
        return fixed_point_index(f, PlaneCurve::rectangle(j), tols);
      } catch (const Error&) {
        continue;
      }
    }
    throw Error(ErrorCode::boundary_fixed_point, "fixed point on cell boundary after 8 jitters");
  };

  std::vector<Point> raw;
  std::vector<Cell> stack{{box, 0}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    int idx = boundary_index(c.box);
    if (idx == 0) continue;
    if (c.box.diameter() <= stop || c.depth >= 48) {
      raw.push_back(c.box.center());
      continue;
    }
    if (f.is_polynomial() && c.depth >= 6) {
      // Try a Newton landing inside this cell to finish early.
      std::vector<Complex> g = f.coefficients();
      if (g.size() < 2) g.resize(2, 0.0);
      g[1] -= 1.0;
      try {
        Complex root = poly_newton(g, 0.0, c.box.center().to_complex(), eps_fix * 1e-3);
        Point rp{root.real(), root.imag()};
        Box inner = c.box.inflated(-0.05 * c.box.diameter());
        if (inner.contains(rp)) {
          // Accept once a tiny circle around the refined root carries the
          // full cell index (isolated, nothing else in the cell).
          double r_iso = c.box.diameter() * 0.02;
          try {
            int small = fixed_point_index(f, PlaneCurve::circle(rp, r_iso, 32), tols);
            if (small == idx) {
              raw.push_back(rp);
              continue;
            }
          } catch (const Error&) {
          }
        }
      } catch (const Error&) {
      }
    }
    double mx = (c.box.x0 + c.box.x1) / 2;
    double my = (c.box.y0 + c.box.y1) / 2;
    stack.push_back({{c.box.x0, c.box.y0, mx, my}, c.depth + 1});
    stack.push_back({{mx, c.box.y0, c.box.x1, my}, c.depth + 1});
    stack.push_back({{c.box.x0, my, mx, c.box.y1}, c.depth + 1});
    stack.push_back({{mx, my, c.box.x1, c.box.y1}, c.depth + 1});
  }

  // Merge duplicates found from neighboring cells.
  std::vector<Point> roots;
  for (const Point& p : raw) {
    bool dup = false;
    for (const Point& q : roots)
      if (distance(p, q) < std::max(stop * 4, 1e-6 * scale)) dup = true;
    if (!dup) roots.push_back(p);
  }
  std::sort(roots.begin(), roots.end(),
            [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });

  std::vector<FixedPointRecord> out;
  for (const Point& p : roots) {
    FixedPointRecord rec;
    rec.location = p;
    if (f.is_polynomial()) {
      std::vector<Complex> g = f.coefficients();
      if (g.size() < 2) g.resize(2, 0.0);
      g[1] -= 1.0;
      try {
        Complex refined = poly_newton(g, 0.0, p.to_complex(), eps_fix * 1e-3);
        rec.location = Point(refined);
        rec.multiplier = f.derivative(refined);
        rec.kind = kind_from_multiplier(*rec.multiplier);
      } catch (const Error&) {
        rec.kind = FixedKind::unknown;
      }
    }
    double nearest = scale;
    for (const Point& q : roots)
      if (distance(p, q) > 0) nearest = std::min(nearest, distance(p, q));
    try {
      rec.index = local_index(f, rec.location, std::max(nearest / 4, stop * 8), tols);
    } catch (const Error&) {
      rec.index = 0;
    }
    out.push_back(rec);
  }
  return out;
}

TopoType topological_type(const PlaneMap& f, Point p, double probe_radius, const Tols& tols) {
  if (f.is_polynomial()) {
    Complex lambda = f.derivative(p.to_complex());
    FixedKind k = kind_from_multiplier(lambda);
    if (k == FixedKind::repelling) return TopoType::repelling;
    if (k == FixedKind::attracting) return TopoType::attracting;
    // Fall through to the nesting search for neutral multipliers.
  }
  double eps = tols.eps_geom_rel * std::max(1.0, probe_radius);
  int repel_certs = 0, attract_certs = 0;
  for (double r : {probe_radius, probe_radius / 2, probe_radius / 4}) {
    PlaneCurve S = PlaneCurve::circle(p, r, 64);
    std::vector<Point> img;
    bool ok = true;
    for (int k = 0; k <= 128; ++k) {
      try {
        img.push_back(f(S.at(k / 128.0)));
      } catch (const Error&) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // Attracting certificate: image strictly inside the circle.
    bool attract = true;
    for (const Point& q : img)
      if (distance(q, p) >= r - 16 * eps) attract = false;
    if (attract) {
      ++attract_certs;
      continue;
    }
    // Repelling certificate: the circle strictly inside the image hull
    // (nonzero winding of the image polyline is a sufficient inside test).
    PlaneCurve imgc;
    imgc.kind = CurveKind::closed_curve;
    for (const Point& q : img)
      if (imgc.vertices.empty() || distance(imgc.vertices.back(), q) > 1e-14)
        imgc.vertices.push_back(q);
    while (imgc.vertices.size() > 3 &&
           distance(imgc.vertices.front(), imgc.vertices.back()) <= 1e-14)
      imgc.vertices.pop_back();
    if (imgc.vertices.size() < 3) continue;
    bool repel = true;
    for (int k = 0; k < 32 && repel; ++k) {
      Point q = S.at(k / 32.0);
      try {
        if (winding_number(imgc, q, 1e-12) == 0) repel = false;
      } catch (const Error&) {
        repel = false;
      }
    }
    if (repel) ++repel_certs;
  }
  if (repel_certs == 3) return TopoType::repelling;
  if (attract_certs == 3) return TopoType::attracting;
  return TopoType::unknown;
}

ScrambleReport scramble_check(const PlaneMap& f, const ScrambleConfig& cfg, const Tols& tols) {
  double scale = std::max(cfg.X.diameter(), 1.0);
  for (const auto& [Z, K] : cfg.exits) scale = std::max(scale, Z.diameter());
  double mem = tols.membership_rel * scale;
  double pitch = scale / 96;

  ScrambleReport rep;
  rep.membership_tol = mem;

  // Structural invariants.
  for (size_t i = 0; i < cfg.exits.size(); ++i) {
    const auto& [Zi, Ki] = cfg.exits[i];
    if (Ki.sample_points(pitch).empty())
      throw Error(ErrorCode::config_invalid, "exit continuum K is empty");
    if (!Ki.is_connected_raster())
      throw Error(ErrorCode::config_invalid, "exit continuum K is disconnected");
    for (const Point& k : Ki.sample_points(pitch)) {
      if (!Zi.contains(k, mem) || !cfg.X.contains(k, mem))
        throw Error(ErrorCode::config_invalid, "K_i must equal Z_i cap X");
    }
    for (const Point& z : Zi.sample_points(pitch))
      if (cfg.X.contains(z, 0.0) && !Ki.contains(z, mem))
        throw Error(ErrorCode::config_invalid, "Z_i cap X exceeds K_i");
    for (size_t j = i + 1; j < cfg.exits.size(); ++j)
      for (const Point& z : cfg.exits[j].first.sample_points(pitch))
        if (Zi.contains(z, 0.0))
          throw Error(ErrorCode::config_invalid, "exit regions Z_i overlap");
  }

  // Invariant X short-circuits to strongly scrambling.
  auto xs = cfg.X.sample_points(pitch);
  bool invariant = true;
  for (const Point& x : xs) {
    if (!cfg.X.contains(f(x), mem)) {
      invariant = false;
      break;
    }
  }
  if (invariant) {
    rep.result = ScrambleResult::strongly;
    rep.invariant_shortcut = true;
    rep.detail = "f(X) stays in X; exits vacuous";
    return rep;
  }

  // (1) f(X) \ X inside the union of the Z_i.
  for (const Point& x : xs) {
    Point fx = f(x);
    if (cfg.X.contains(fx, mem)) continue;
    bool covered = false;
    for (const auto& [Zi, Ki] : cfg.exits)
      if (Zi.contains(fx, mem)) covered = true;
    if (!covered) {
      rep.result = ScrambleResult::none;
      rep.violated_clause = 1;
      rep.detail = "image point escapes X outside every Z_i";
      return rep;
    }
  }

  // (3) f(K_i) misses Z_i \ K_i.
  for (const auto& [Zi, Ki] : cfg.exits) {
    for (const Point& k : Ki.sample_points(pitch)) {
      Point fk = f(k);
      if (Zi.contains(fk, mem) && !Ki.contains(fk, mem)) {
        rep.result = ScrambleResult::none;
        rep.violated_clause = 3;
        rep.detail = "f(K_i) meets Z_i away from K_i";
        return rep;
      }
    }
  }
  rep.result = ScrambleResult::scrambles;

  // (3a) strongly: f(K_i) inside K_i, or off Z_i entirely.
  bool strong = true;
  for (const auto& [Zi, Ki] : cfg.exits) {
    bool all_in_k = true, none_in_z = true;
    for (const Point& k : Ki.sample_points(pitch)) {
      Point fk = f(k);
      if (!Ki.contains(fk, mem)) all_in_k = false;
      if (Zi.contains(fk, mem)) none_in_z = false;
    }
    if (!all_in_k && !none_in_z) strong = false;
  }
  if (strong) rep.result = ScrambleResult::strongly;
  return rep;
}

RepelWitness repels_outside_witness(const PlaneMap& f, const Region& X, Point p,
                                    const PlaneCurve& ray_to_landing, double disk_radius,
                                    const Tols& tols) {
  double scale = std::max({X.diameter(), 1.0, 4 * disk_radius});
  double eps = tols.eps_geom_rel * scale;
  double mem = tols.membership_rel * scale;

  if (distance(f(p), p) > mem)
    throw Error(ErrorCode::precondition_violated, "p is not fixed");
  if (distance(ray_to_landing.back(), p) > mem)
    throw Error(ErrorCode::precondition_violated, "ray does not land at p");

  // (1) Local injectivity on a neighborhood disk, and local X-invariance.
  double r_u = 2 * disk_radius;
  {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(-r_u, r_u);
    for (int k = 0; k < 256; ++k) {
      Point a{p.x + u(gen), p.y + u(gen)};
      Point b{p.x + u(gen), p.y + u(gen)};
      if (distance(a, p) > r_u || distance(b, p) > r_u) continue;
      double d = distance(a, b);
      if (d < 1e-6 * scale) continue;
      if (distance(f(a), f(b)) <= mem)
        throw Error(ErrorCode::hypothesis_failed, "f is not injective on the probe disk", 1);
    }
    for (const Point& x : X.sample_points(scale / 128)) {
      if (distance(x, p) > r_u) continue;
      if (!X.contains(f(x), mem))
        throw Error(ErrorCode::hypothesis_failed, "f(U cap X) leaves X", 1);
    }
  }

  // (2) f(bd D) misses D; bd D \ X has at least two components.
  int n = 256;
  std::vector<bool> in_x(n);
  for (int k = 0; k < n; ++k) {
    double a = 2 * M_PI * k / n;
    Point z{p.x + disk_radius * std::cos(a), p.y + disk_radius * std::sin(a)};
    if (distance(f(z), p) <= disk_radius + eps)
      throw Error(ErrorCode::hypothesis_failed, "f(bd D) meets D", 2);
    in_x[k] = X.contains(z, mem);
  }
  int components = 0;
  for (int k = 0; k < n; ++k) {
    bool prev = in_x[(k + n - 1) % n];
    if (!in_x[k] && prev) ++components;
  }
  bool any_off = std::any_of(in_x.begin(), in_x.end(), [](bool b) { return !b; });
  if (components == 0 && any_off) components = 1;  // circle misses X entirely
  if (components < 2)
    throw Error(ErrorCode::hypothesis_failed, "bd D \\ X has fewer than two components", 2);

  // (3) f moves ray points toward infinity along the ray.
  {
    double L = ray_to_landing.length();
    auto param_on_ray = [&](Point q) {
      // Arc-length position measured from the landing end.
      double best = std::numeric_limits<double>::infinity();
      double best_s = 0;
      double acc = 0;
      for (size_t i = 0; i < ray_to_landing.segment_count(); ++i) {
        auto [a, b] = ray_to_landing.segment(i);
        double seg = distance(a, b);
        Point ab = b - a;
        double t = seg > 0 ? std::clamp(dot(q - a, ab) / (seg * seg), 0.0, 1.0) : 0;
        Point proj = a + t * ab;
        double d = distance(q, proj);
        if (d < best) {
          best = d;
          best_s = L - (acc + t * seg);
        }
        acc += seg;
      }
      return std::pair<double, double>{best_s, best};
    };
    int checked = 0;
    for (int k = 1; k <= 24; ++k) {
      double s = 1.0 - (double)k / 64.0;  // fractions near the landing end
      Point x = ray_to_landing.at(s);
      double sx = L * (1.0 - s);
      if (sx > L / 2) break;
      Point fx = f(x);
      auto [sf, off] = param_on_ray(fx);
      if (off > scale * 1e-3)
        throw Error(ErrorCode::hypothesis_failed, "f does not map the ray into itself", 3);
      if (sf <= sx + eps)
        throw Error(ErrorCode::hypothesis_failed, "f moves ray points toward p", 3);
      ++checked;
    }
    if (checked == 0) throw Error(ErrorCode::hypothesis_failed, "ray too short to test", 3);
  }

  // The component of bd D \ X meeting the ray, as a crosscut arc.
  double band = disk_radius / 8;
  int start = -1;
  for (int k = 0; k < n; ++k) {
    if (in_x[k]) continue;
    double a = 2 * M_PI * k / n;
    Point z{p.x + disk_radius * std::cos(a), p.y + disk_radius * std::sin(a)};
    if (point_curve_distance(z, ray_to_landing) < band) {
      start = k;
      break;
    }
  }
  if (start < 0)
    throw Error(ErrorCode::hypothesis_failed, "no component of bd D \\ X meets the ray", 3);
  int lo = start, hi = start;
  while (!in_x[((lo - 1) % n + n) % n] && hi - lo < n) --lo;
  while (!in_x[((hi + 1) % n + n) % n] && hi - lo < n) ++hi;
  // Extend one sample on each side so the endpoints land in X.
  --lo;
  ++hi;
  std::vector<Point> arc;
  for (int k = lo; k <= hi; ++k) {
    double a = 2 * M_PI * (((k % n) + n) % n) / n;
    arc.push_back({p.x + disk_radius * std::cos(a), p.y + disk_radius * std::sin(a)});
  }
  RepelWitness w;
  w.crosscut = PlaneCurve::open(arc);
  w.disk_radius = disk_radius;
  w.variation = variation(f, w.crosscut, X, std::nullopt, tols);
  return w;
}

FixptCheckResult fixpt_theorem_check(const PlaneMap& f, const ScrambleConfig& cfg,
                                     const Tols& tols) {
  FixptCheckResult res;
  res.scramble = scramble_check(f, cfg, tols);
  if (res.scramble.result != ScrambleResult::strongly) return res;
  res.applicable = true;
  double scale = std::max(cfg.X.diameter(), 1.0);
  double mem = tols.membership_rel * scale;
  Box b = cfg.X.bbox().inflated(0.05 * scale);
  auto records = locate_fixed_points(f, b, tols);
  for (const auto& rec : records) {
    if (cfg.X.contains(rec.location, std::max(mem, 0.02 * scale))) {
      res.fixed_point = rec.location;
      return res;
    }
  }
  res.numerical_fault = true;  // the theorem guarantees one; report, not refute
  return res;
}

bool locrot_alarm(bool certified, double x_diameter, double resolution) {
  return certified && x_diameter > resolution;
}

LocrotReport locrot_check(const PlaneMap& f, const LocrotInstance& inst, const Tols& tols) {
  LocrotReport rep;
  double scale = std::max(inst.cfg.X.diameter(), 1.0);
  double mem = tols.membership_rel * scale;

  ScrambleReport sc;
  try {
    sc = scramble_check(f, inst.cfg, tols);
    rep.scramble_ok = sc.result != ScrambleResult::none;
    if (!rep.scramble_ok) rep.detail = "scramble: " + sc.detail;
  } catch (const Error& e) {
    rep.scramble_ok = false;
    rep.detail = e.what();
  }

  // Clause (2): f(K_i) misses Z_i, or a K_i neighborhood stays X-invariant.
  rep.clause2_ok = true;
  double pitch = scale / 96;
  for (const auto& [Zi, Ki] : inst.cfg.exits) {
    bool miss = true;
    for (const Point& k : Ki.sample_points(pitch))
      if (Zi.contains(f(k), mem)) miss = false;
    if (miss) continue;
    bool invariant_nbhd = true;
    for (const Point& x : inst.cfg.X.sample_points(pitch)) {
      if (Ki.distance_to(x) > 0.05 * scale) continue;
      if (!inst.cfg.X.contains(f(x), mem)) invariant_nbhd = false;
    }
    if (!invariant_nbhd) {
      rep.clause2_ok = false;
      if (rep.detail.empty()) rep.detail = "clause (2) fails at an exit continuum";
    }
  }

  rep.all_indices_one = true;
  rep.all_witnessed = true;
  for (size_t i = 0; i < inst.fixed_points.size(); ++i) {
    try {
      if (local_index(f, inst.fixed_points[i], inst.disk_radius, tols) != 1)
        rep.all_indices_one = false;
    } catch (const Error&) {
      rep.all_indices_one = false;
    }
    try {
      repels_outside_witness(f, inst.cfg.X, inst.fixed_points[i], inst.rays[i],
                             inst.disk_radius, tols);
    } catch (const Error& e) {
      rep.all_witnessed = false;
      if (rep.detail.empty()) rep.detail = std::string("repel witness failed: ") + e.what();
    }
  }

  rep.certified = rep.scramble_ok && rep.clause2_ok && rep.all_indices_one && rep.all_witnessed;
  rep.x_diameter = inst.cfg.X.diameter();
  rep.resolution = tols.raster_rel * scale;
  rep.contradiction_alarm = locrot_alarm(rep.certified, rep.x_diameter, rep.resolution);
  return rep;
}

}  // namespace planedyn
