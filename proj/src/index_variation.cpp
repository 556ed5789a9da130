#include "planedyn/index_variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace planedyn {

double signed_area(const PlaneCurve& S) {
  double a = 0;
  for (size_t i = 0; i < S.segment_count(); ++i) {
    auto [p, q] = S.segment(i);
    a += cross(p, q);
  }
  return a / 2;
}

PlaneCurve ccw_normalized(const PlaneCurve& S) {
  return signed_area(S) >= 0 ? S : S.reversed();
}

int map_degree(const PlaneMap& f, const PlaneCurve& S, Point w, const Tols& tols) {
  double eps = tols.eps_geom_rel * std::max(S.diameter(), 1.0);
  return degree_along_curve(f.fn(), S, w.to_complex(), eps, ErrorCode::image_hits_basepoint);
}

int fixed_point_index(const PlaneMap& f, const PlaneCurve& S, const Tols& tols) {
  double eps = tols.eps_fix_rel * std::max(S.diameter(), 1.0);
  return degree_along_curve(f.displacement(), S, Complex(0, 0), eps,
                            ErrorCode::fixed_point_on_curve);
}

namespace {

struct ArcSample {
  double t;
  Point z;
  Point fz;
};

// Adaptive image sampling of f along the arc: consecutive image points are
// brought within `max_img_step` so no junction crossing is skipped.
std::vector<ArcSample> sample_arc_images(const PlaneMap& f, const PlaneCurve& A,
                                         double max_img_step, int max_depth = 26) {
  auto eval = [&](double t) {
    Point z = A.at(t);
    return ArcSample{t, z, f(z)};
  };
  std::vector<ArcSample> out;
  size_t n = std::max<size_t>(A.segment_count() * 2, 16);
  std::vector<ArcSample> seed;
  for (size_t i = 0; i <= n; ++i) seed.push_back(eval((double)i / n));
  for (size_t i = 0; i + 1 < seed.size(); ++i) {
    std::vector<std::pair<ArcSample, int>> stack;
    stack.push_back({seed[i + 1], 0});
    ArcSample cur = seed[i];
    out.push_back(cur);
    while (!stack.empty()) {
      auto [next, depth] = stack.back();
      bool fine = distance(cur.fz, next.fz) <= max_img_step || depth >= max_depth ||
                  distance(cur.z, next.z) < 1e-13;
      if (fine) {
        out.push_back(next);
        cur = next;
        stack.pop_back();
      } else {
        stack.back().second = depth + 1;
        stack.push_back({eval(0.5 * (cur.t + next.t)), depth + 1});
      }
    }
  }
  return out;
}

// Pick a junction vertex/heading for a bumping arc: a point of A far from X
// (mid-arc when A lies on the boundary of X), heading outward.
struct Anchor {
  double t;
  Point v;
  double heading;
};

Anchor pick_anchor(const PlaneCurve& A, const Region& X, double t_shift = 0.0) {
  double scale = std::max({A.diameter(), X.diameter(), 1e-9});
  int n = 128;
  double best_d = -1;
  double best_t = 0.5;
  for (int i = 1; i < n; ++i) {
    double t = (double)i / n;
    double d = X.distance_to(A.at(t));
    if (d > best_d + 1e-12 * scale) {
      best_d = d;
      best_t = t;
    }
  }
  if (best_d <= 1e-9 * scale) best_t = 0.5;  // arc on the boundary of X
  double t = std::clamp(best_t + t_shift, 0.02, 0.98);
  Point v = A.at(t);

  // Outward normal probe: pick the side where a short probe leaves X.
  double dt = 0.01;
  Point tangent = A.at(std::min(t + dt, 1.0)) - A.at(std::max(t - dt, 0.0));
  double tl = norm(tangent);
  if (tl < 1e-15) tangent = Point{1, 0}, tl = 1;
  Point nrm{-tangent.y / tl, tangent.x / tl};
  double heading = 0;
  bool found = false;
  for (double probe = scale / 64; probe <= scale && !found; probe *= 2) {
    double d1 = X.distance_to(v + probe * nrm);
    double d2 = X.distance_to(v - probe * nrm);
    if (d1 > d2 && d1 > 0) {
      heading = std::atan2(nrm.y, nrm.x);
      found = true;
    } else if (d2 > d1 && d2 > 0) {
      heading = std::atan2(-nrm.y, -nrm.x);
      found = true;
    }
  }
  if (!found) heading = std::atan2(nrm.y, nrm.x);
  return {t, v, heading};
}

bool junction_keeps_x_in_u(const Junction& j, const Region& X, double exclude_near_vertex) {
  double pitch = std::max(X.diameter(), 1e-6) / 48;
  for (const Point& q : X.sample_points(pitch)) {
    if (distance(q, j.vertex) <= exclude_near_vertex) continue;
    if (!j.u_face_contains(q)) return false;
  }
  return true;
}

Junction junction_for_arc(const PlaneMap& f, const PlaneCurve& A, const Region& X,
                          bool avoid_arc, const Tols& tols, bool* perturbed) {
  double scale = std::max({A.diameter(), X.diameter(), 1.0});
  double eps = tols.eps_geom_rel * scale;
  Point fa = f(A.front());
  Point fb = f(A.back());
  const double shifts[] = {0.0, 0.03, -0.03, 0.08, -0.08, 0.15, -0.15, 0.25};
  const double turns[] = {0.0, M_PI / 6, -M_PI / 6, M_PI / 3, -M_PI / 3, M_PI / 2, -M_PI / 2};
  for (double shift : shifts) {
    Anchor anchor = pick_anchor(A, X, shift);
    for (double turn : turns) {
      ObstacleSet obstacles;
      obstacles.regions.push_back(X);
      if (avoid_arc) obstacles.curves.push_back(A);
      Junction j;
      try {
        j = build_junction(anchor.v, anchor.heading + turn, obstacles);
      } catch (const Error&) {
        continue;
      }
      if (!junction_keeps_x_in_u(j, X, 8 * eps)) continue;
      // Images of the endpoints must be off the junction (else perturb).
      double guard = 10 * eps;
      if (j.distance_to(fa) <= guard || j.distance_to(fb) <= guard) continue;
      if (perturbed) *perturbed = (shift != 0.0 || turn != 0.0);
      return j;
    }
  }
  throw Error(ErrorCode::junction_touches_image,
              "no junction placement keeps endpoint images off the rays");
}

}  // namespace

VariationReport variation(const PlaneMap& f, const PlaneCurve& A, const Region& X,
                          std::optional<Junction> junction, const Tols& tols,
                          const std::optional<Region>& junction_region) {
  if (A.kind != CurveKind::open_arc)
    throw Error(ErrorCode::precondition_violated, "bumping arc must be an open curve");
  double scale = std::max({A.diameter(), X.diameter(), 1.0});
  double eps = tols.eps_geom_rel * scale;
  double mem = tols.membership_rel * scale;

  Point a = A.front(), b = A.back();
  if (!X.contains(a, mem) || !X.contains(b, mem))
    throw Error(ErrorCode::precondition_violated, "arc endpoints must lie in X");
  Point fa = f(a), fb = f(b);
  if (!X.contains(fa, mem) || !X.contains(fb, mem))
    throw Error(ErrorCode::precondition_violated, "endpoint images must lie in X");

  // f(A) and A must be disjoint; measure the separation for refinement.
  auto coarse = sample_arc_images(f, A, std::numeric_limits<double>::infinity());
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& s : coarse) sep = std::min(sep, point_curve_distance(s.fz, A));
  if (sep <= eps)
    throw Error(ErrorCode::precondition_violated, "f(A) meets A within eps_geom");

  VariationReport rep;
  rep.link = A;
  rep.eps_geom = eps;
  rep.membership_tol = mem;
  if (junction) {
    rep.junction = *junction;
  } else {
    rep.junction = junction_for_arc(f, A, junction_region.value_or(X), /*avoid_arc=*/false,
                                    tols, &rep.vertex_perturbed);
  }
  const Junction& J = rep.junction;

  // The image never approaches the vertex closer than its separation from A.
  double rho = 0.5 * sep;
  double feature = std::min(J.min_feature(rho), sep);
  double step = std::max(feature / 3.0, 1e-12);

  auto samples = sample_arc_images(f, A, step);
  const PlaneCurve* rays[3] = {&J.ray_plus, &J.ray_i, &J.ray_minus};
  const RayId ids[3] = {RayId::plus, RayId::i, RayId::minus};
  std::vector<VariationEvent> events;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    Point g1 = samples[i].fz, g2 = samples[i + 1].fz;
    for (int r = 0; r < 3; ++r) {
      for (size_t s = 0; s < rays[r]->segment_count(); ++s) {
        auto [c, d] = rays[r]->segment(s);
        if (auto u = segment_intersection_param(g1, g2, c, d)) {
          double t = samples[i].t + *u * (samples[i + 1].t - samples[i].t);
          events.push_back({t, ids[r]});
        }
      }
    }
  }
  std::sort(events.begin(), events.end(),
            [](const VariationEvent& x, const VariationEvent& y) { return x.t < y.t; });
  // Merge duplicate detections of one crossing (shared sample endpoints).
  std::vector<VariationEvent> merged;
  for (const auto& e : events) {
    if (!merged.empty() && merged.back().ray == e.ray && e.t - merged.back().t < 1e-12) continue;
    merged.push_back(e);
  }
  rep.events = merged;
  for (size_t i = 0; i + 1 < merged.size(); ++i) {
    if (merged[i].ray == RayId::plus && merged[i + 1].ray == RayId::i)
      rep.crossings.push_back(+1);
    else if (merged[i].ray == RayId::i && merged[i + 1].ray == RayId::plus)
      rep.crossings.push_back(-1);
  }
  rep.total = 0;
  for (int c : rep.crossings) rep.total += c;
  return rep;
}

int variation_oracle(const PlaneMap& f, const PlaneCurve& A, const Region& X, const Tols& tols) {
  double scale = std::max({A.diameter(), X.diameter(), 1.0});
  double eps = tols.eps_geom_rel * scale;
  double mem = tols.membership_rel * scale;
  Point a = A.front(), b = A.back();
  if (!X.contains(a, mem) || !X.contains(b, mem))
    throw Error(ErrorCode::precondition_violated, "arc endpoints must lie in X");

  bool perturbed = false;
  Junction J = junction_for_arc(f, A, X, /*avoid_arc=*/true, tols, &perturbed);

  // Lemma hypothesis: f(X) stays off the junction (vertex contact allowed).
  double pitch = std::max(X.diameter(), 1e-6) / 96;
  for (const Point& q : X.sample_points(pitch)) {
    Point fq = f(q);
    if (distance(fq, J.vertex) <= 8 * eps) continue;
    if (J.distance_to(fq) <= eps)
      throw Error(ErrorCode::cannot_close_arc, "f(X) meets the junction away from its vertex");
  }

  double d = std::max(X.diameter(), A.diameter());
  for (double beta : {d / 12, d / 24, d / 48, d / 96}) {
    PlaneCurve loop;
    try {
      loop = X.offset_loop(beta);
    } catch (const Error&) {
      break;
    }
    // Indices of loop vertices nearest to the arc endpoints.
    auto nearest_idx = [&](Point p) {
      size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < loop.vertices.size(); ++i) {
        double dd = distance(loop.vertices[i], p);
        if (dd < bd) {
          bd = dd;
          best = i;
        }
      }
      return best;
    };
    size_t ib = nearest_idx(b), ia = nearest_idx(a);
    if (ib == ia) continue;
    for (int direction = 0; direction < 2; ++direction) {
      std::vector<Point> ipts;
      ipts.push_back(b);
      size_t n = loop.vertices.size();
      if (direction == 0) {
        for (size_t k = ib;; k = (k + 1) % n) {
          ipts.push_back(loop.vertices[k]);
          if (k == ia) break;
        }
      } else {
        for (size_t k = ib;; k = (k + n - 1) % n) {
          ipts.push_back(loop.vertices[k]);
          if (k == ia) break;
        }
      }
      ipts.push_back(a);
      std::vector<Point> sv = A.vertices;
      for (size_t k = 1; k + 1 < ipts.size(); ++k) sv.push_back(ipts[k]);
      PlaneCurve S;
      try {
        S = PlaneCurve::closed(sv);
      } catch (const Error&) {
        continue;
      }
      if (!S.is_simple()) continue;
      // X inside T(S) (skip points too close to S, e.g. the endpoints).
      bool inside = true;
      for (const Point& q : X.sample_points(pitch)) {
        if (point_curve_distance(q, S) <= 2 * beta + 4 * eps) continue;
        try {
          if (winding_number(S, q) == 0) {
            inside = false;
            break;
          }
        } catch (const Error&) {
        }
      }
      if (!inside) continue;
      // The return arc must stay off the junction, and its image too.
      PlaneCurve I = PlaneCurve::open(ipts);
      bool clear = true;
      const PlaneCurve* rays[3] = {&J.ray_plus, &J.ray_i, &J.ray_minus};
      for (int r = 0; r < 3 && clear; ++r)
        if (curve_curve_distance(I, *rays[r]) <= eps) clear = false;
      if (!clear) continue;
      int m = std::max<int>(64, (int)I.segment_count() * 4);
      for (int k = 0; k <= m && clear; ++k) {
        Point fi = f(I.at((double)k / m));
        if (J.distance_to(fi) <= eps) clear = false;
      }
      if (!clear) continue;
      return map_degree(f, S, J.vertex, tols);
    }
  }
  throw Error(ErrorCode::cannot_close_arc, "no tight return arc avoids the junction");
}

AllowablePartition find_allowable_partition(const PlaneMap& f, const PlaneCurve& S_in,
                                            const Region& X, const Tols& tols, int max_depth) {
  PlaneCurve S = ccw_normalized(S_in);
  if (!S.is_simple()) throw Error(ErrorCode::not_simple, "bumping curve must be simple");
  double scale = std::max(S.diameter(), 1.0);
  double eps_fix = tols.eps_fix_rel * scale;
  double mem = tols.membership_rel * scale;

  {  // no fixed points on S
    int n = 256;
    for (int i = 0; i < n; ++i) {
      Point z = S.at((double)i / n);
      if (distance(f(z), z) <= eps_fix)
        throw Error(ErrorCode::fixed_point_on_curve, "fixed point on the bumping curve");
    }
  }

  auto anchor_ok = [&](double t) {
    Point p = S.at(t);
    return X.contains(p, mem) && X.contains(f(p), mem);
  };
  auto link_ok = [&](double t0, double t1) {
    // The link and its image polyline must be disjoint: polyline-polyline
    // distance catches transversal crossings regardless of sample density.
    int m = 160;
    std::vector<Point> pts, img;
    for (int k = 0; k <= m; ++k) {
      double t = t0 + (t1 - t0) * k / m;
      Point z = S.at(t >= 1.0 ? t - 1.0 : t);
      pts.push_back(z);
      img.push_back(f(z));
    }
    PlaneCurve link_poly, img_poly;
    link_poly.kind = img_poly.kind = CurveKind::open_arc;
    for (const Point& p : pts)
      if (link_poly.vertices.empty() || distance(link_poly.vertices.back(), p) > 1e-14)
        link_poly.vertices.push_back(p);
    for (const Point& p : img)
      if (img_poly.vertices.empty() || distance(img_poly.vertices.back(), p) > 1e-14)
        img_poly.vertices.push_back(p);
    if (link_poly.vertices.size() < 2 || img_poly.vertices.size() < 2) return false;
    return curve_curve_distance(link_poly, img_poly) > eps_fix;
  };

  // Vertex parameters are natural anchor candidates (touch points of a
  // bumping curve are vertices); a refining dyadic net covers the rest.
  std::vector<double> vertex_params;
  {
    double L = S.length(), acc = 0;
    for (size_t i = 0; i < S.segment_count(); ++i) {
      vertex_params.push_back(acc / L);
      auto [p, q] = S.segment(i);
      acc += distance(p, q);
    }
  }
  int base = 8;
  std::vector<double> anchors;
  for (double t : vertex_params)
    if (anchor_ok(t)) anchors.push_back(t);
  for (int i = 0; i < base; ++i) {
    double t = (double)i / base;
    if (anchor_ok(t)) anchors.push_back(t);
  }
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                anchors.end());
  int depth = 0;
  int net = base;
  while (anchors.empty() && depth < max_depth) {
    net *= 2;
    ++depth;
    for (int i = 0; i < net; i += 2) {
      double t = (double)i / net + 1.0 / net;
      if (anchor_ok(t)) anchors.push_back(t);
    }
    std::sort(anchors.begin(), anchors.end());
  }
  if (anchors.empty())
    throw Error(ErrorCode::no_partition, "no anchor points with images in X");

  for (; depth <= max_depth; ++depth) {
    bool all_ok = true;
    size_t n = anchors.size();
    for (size_t i = 0; i < n && all_ok; ++i) {
      double t0 = anchors[i];
      double t1 = (i + 1 < n) ? anchors[i + 1] : anchors[0] + 1.0;
      if (!link_ok(t0, t1)) {
        // Insert the valid candidate nearest the midpoint of this link.
        double mid = 0.5 * (t0 + t1);
        bool inserted = false;
        int fine = base << std::min(depth + 1, 24);
        double bestd = std::numeric_limits<double>::infinity();
        double bestt = 0;
        auto try_candidate = [&](double t) {
          double tt = t < t0 ? t + 1.0 : t;
          if (tt <= t0 + 1e-12 || tt >= t1 - 1e-12) return;
          if (!anchor_ok(t)) return;
          double dd = std::abs(tt - mid);
          if (dd < bestd) {
            bestd = dd;
            bestt = t;
            inserted = true;
          }
        };
        for (double t : vertex_params) try_candidate(t);
        for (int k = 0; k < fine; ++k) try_candidate((double)k / fine);
        if (!inserted) throw Error(ErrorCode::no_partition, "link cannot be split further");
        anchors.push_back(bestt);
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end(),
                                  [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                      anchors.end());
        all_ok = false;
      }
    }
    if (all_ok) {
      AllowablePartition out;
      out.curve = S;
      out.params = anchors;
      for (double t : anchors) out.points.push_back(S.at(t));
      out.membership_tol = mem;
      return out;
    }
  }
  throw Error(ErrorCode::no_partition, "partition refinement exceeded max depth");
}

PlaneCurve partition_link(const AllowablePartition& p, size_t i, int samples_per_link) {
  size_t n = p.params.size();
  double t0 = p.params[i % n];
  double t1 = (i + 1 < n) ? p.params[i + 1] : p.params[0] + 1.0;
  std::vector<Point> pts;
  for (int k = 0; k <= samples_per_link; ++k) {
    double t = t0 + (t1 - t0) * k / samples_per_link;
    pts.push_back(p.curve.at(t >= 1.0 ? t - 1.0 : t));
  }
  std::vector<Point> cleaned;
  for (const Point& q : pts)
    if (cleaned.empty() || distance(cleaned.back(), q) > 1e-14) cleaned.push_back(q);
  return PlaneCurve::open(std::move(cleaned));
}

FmotResult fmot_verify(const PlaneMap& f, const PlaneCurve& S, const Region& X,
                       const Tols& tols) {
  FmotResult res;
  res.partition = find_allowable_partition(f, S, X, tols);
  // The identity concerns the hull of S: junctions keep the whole filled
  // curve on their U side, which also covers the (smaller) continuum X.
  Region hull = Region::polygon(res.partition.curve);
  size_t n = res.partition.params.size();
  for (size_t i = 0; i < n; ++i) {
    PlaneCurve link = partition_link(res.partition, i, n == 1 ? 160 : 64);
    res.links.push_back(variation(f, link, X, std::nullopt, tols, hull));
  }
  res.variation_sum = 0;
  for (const auto& l : res.links) res.variation_sum += l.total;
  res.index = fixed_point_index(f, res.partition.curve, tols);
  res.holds = (res.index == res.variation_sum + 1);
  return res;
}

}  // namespace planedyn
