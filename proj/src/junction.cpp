#include "planedyn/junction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace planedyn {

Box ObstacleSet::bbox() const {
  bool first = true;
  Box b;
  auto add = [&](const Box& bb) {
    if (first) {
      b = bb;
      first = false;
    } else {
      b.include(bb);
    }
  };
  for (const auto& c : curves) add(c.bbox());
  for (const auto& r : regions) add(r.bbox());
  if (first) b = Box{0, 0, 0, 0};
  return b;
}

double ObstacleSet::diameter() const { return std::max(bbox().diameter(), 1e-9); }

double ObstacleSet::segment_clearance(Point a, Point b, Point near, double ignore_near) const {
  double best = std::numeric_limits<double>::infinity();
  auto consider_seg = [&](Point c, Point d) {
    // If segments intersect, the contact point must be near the vertex.
    if (auto t = segment_intersection_param(a, b, c, d)) {
      Point at = a + *t * (b - a);
      if (distance(at, near) > ignore_near) {
        best = 0.0;
        return;
      }
      // Contact at the vertex is permitted; measure the rest by clipping away
      // from `near` along [a,b].
    }
    double d0 = segment_segment_distance(a, b, c, d);
    if (d0 > 0) {
      best = std::min(best, d0);
      return;
    }
    // Touching near the vertex: sample [a,b] outside the ignore ball.
    int steps = 64;
    double local = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= steps; ++s) {
      Point p = a + ((double)s / steps) * (b - a);
      if (distance(p, near) <= ignore_near) continue;
      local = std::min(local, segment_distance(p, c, d));
    }
    best = std::min(best, local);
  };
  for (const auto& cv : curves)
    for (size_t i = 0; i < cv.segment_count(); ++i) {
      auto [c, d] = cv.segment(i);
      consider_seg(c, d);
      if (best == 0.0) return 0.0;
    }
  for (const auto& r : regions) {
    switch (r.kind()) {
      case RegionKind::path:
        for (size_t i = 0; i < r.curve().segment_count(); ++i) {
          auto [c, d] = r.curve().segment(i);
          consider_seg(c, d);
        }
        break;
      case RegionKind::point: {
        double d0 = segment_distance(r.disk_center(), a, b);
        if (distance(r.disk_center(), near) > ignore_near) best = std::min(best, d0);
        break;
      }
      case RegionKind::disk: {
        double d0 = segment_distance(r.disk_center(), a, b) - r.disk_radius();
        if (d0 <= 0) {
          // Entering the disk: allowed only right at the vertex.
          if (distance(near, r.disk_center()) > r.disk_radius() + ignore_near) return 0.0;
          int steps = 64;
          for (int s = 0; s <= steps; ++s) {
            Point p = a + ((double)s / steps) * (b - a);
            if (distance(p, near) <= ignore_near) continue;
            best = std::min(best, std::max(0.0, distance(p, r.disk_center()) - r.disk_radius()));
          }
        } else {
          best = std::min(best, d0);
        }
        break;
      }
      case RegionKind::polygon: {
        for (size_t i = 0; i < r.curve().segment_count(); ++i) {
          auto [c, d] = r.curve().segment(i);
          consider_seg(c, d);
        }
        if (r.contains(a, 0.0) && distance(a, near) > ignore_near) return 0.0;
        if (r.contains(b, 0.0) && distance(b, near) > ignore_near) return 0.0;
        break;
      }
      case RegionKind::raster: {
        const Raster& g = r.grid();
        for (const Point& c : g.occupied_centers()) {
          double d0 = segment_distance(c, a, b) - g.h * 0.71;
          if (distance(c, near) <= ignore_near) continue;
          best = std::min(best, std::max(0.0, d0));
        }
        break;
      }
    }
    if (best == 0.0) return 0.0;
  }
  return best;
}

bool ObstacleSet::encloses(Point v, double cell) const {
  Box b = bbox();
  b.include(v);
  b = b.inflated(std::max(cell * 4, diameter() * 0.1));
  Raster g(b, cell);
  for (const auto& c : curves) g.mark_curve(c);
  for (const auto& r : regions) r.stamp(g);
  auto reach = flood_from_border(g);
  auto [i, j] = g.cell_of(v);
  if (!g.occupied(i, j)) return !reach[g.idx(i, j)];
  // v on the obstacle: enclosed only if no nearby free cell sees the border.
  for (int r = 1; r <= 2; ++r)
    for (int dj = -r; dj <= r; ++dj)
      for (int di = -r; di <= r; ++di) {
        int ni = i + di, nj = j + dj;
        if (g.in_range(ni, nj) && !g.occupied(ni, nj) && reach[g.idx(ni, nj)]) return false;
      }
  return true;
}

std::vector<Point> ObstacleSet::sample_points(double pitch) const {
  std::vector<Point> out;
  for (const auto& c : curves) {
    int n = std::max(2, (int)std::ceil(c.length() / pitch));
    for (int i = 0; i <= n; ++i) out.push_back(c.at((double)i / n));
  }
  for (const auto& r : regions) {
    auto s = r.sample_points(pitch);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

const PlaneCurve& Junction::ray(RayId id) const {
  switch (id) {
    case RayId::plus: return ray_plus;
    case RayId::i: return ray_i;
    case RayId::minus: return ray_minus;
  }
  return ray_i;
}

std::optional<RayId> Junction::hit(Point p, double tol) const {
  double dp = point_curve_distance(p, ray_plus);
  double di = point_curve_distance(p, ray_i);
  double dm = point_curve_distance(p, ray_minus);
  double best = std::min({dp, di, dm});
  if (best > tol) return std::nullopt;
  if (best == di) return RayId::i;  // vertex ties resolve to Ri
  if (best == dp) return RayId::plus;
  return RayId::minus;
}

double Junction::distance_to(Point p) const {
  return std::min({point_curve_distance(p, ray_plus), point_curve_distance(p, ray_i),
                   point_curve_distance(p, ray_minus)});
}

double Junction::min_feature(double rho) const {
  const PlaneCurve* rays[3] = {&ray_plus, &ray_i, &ray_minus};
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const PlaneCurve& A = *rays[a];
      const PlaneCurve& B = *rays[b];
      double pitch = std::max(escape_box.diameter() / 512.0, 1e-9);
      int na = std::max(2, (int)std::ceil(A.length() / pitch));
      for (int i = 0; i <= na; ++i) {
        Point p = A.at((double)i / na);
        if (distance(p, vertex) <= rho) continue;
        double d = point_curve_distance(p, B);
        best = std::min(best, d);
      }
      int nb = std::max(2, (int)std::ceil(B.length() / pitch));
      for (int i = 0; i <= nb; ++i) {
        Point p = B.at((double)i / nb);
        if (distance(p, vertex) <= rho) continue;
        best = std::min(best, point_curve_distance(p, A));
      }
    }
  return best;
}

namespace {

// Closed polygon bounding the complementary face between `first` and `second`
// (counterclockwise from first to second at infinity).
PlaneCurve face_polygon(const Junction& j, const PlaneCurve& first, const PlaneCurve& second) {
  Point c = j.escape_box.center();
  double R = j.escape_box.diameter() * 2.0 + 1.0;
  auto extended_end = [&](const PlaneCurve& ray) {
    Point e = ray.back();
    Point d = e - c;
    double l = norm(d);
    if (l < 1e-12) d = Point{1, 0}, l = 1;
    return c + (R / l) * d;
  };
  std::vector<Point> poly;
  poly.push_back(j.vertex);
  for (size_t i = 1; i < first.vertices.size(); ++i) poly.push_back(first.vertices[i]);
  Point e1 = extended_end(first);
  Point e2 = extended_end(second);
  poly.push_back(e1);
  double a1 = std::atan2(e1.y - c.y, e1.x - c.x);
  double a2 = std::atan2(e2.y - c.y, e2.x - c.x);
  while (a2 <= a1) a2 += 2 * M_PI;
  int steps = std::max(8, (int)std::ceil((a2 - a1) / (M_PI / 90)));
  for (int s = 1; s < steps; ++s) {
    double a = a1 + (a2 - a1) * s / steps;
    poly.push_back({c.x + R * std::cos(a), c.y + R * std::sin(a)});
  }
  poly.push_back(e2);
  for (size_t i = second.vertices.size(); i-- > 1;) poly.push_back(second.vertices[i]);
  std::vector<Point> cleaned;
  for (const Point& p : poly)
    if (cleaned.empty() || distance(cleaned.back(), p) > 1e-12) cleaned.push_back(p);
  while (cleaned.size() > 3 && distance(cleaned.front(), cleaned.back()) <= 1e-12)
    cleaned.pop_back();
  return PlaneCurve::closed(std::move(cleaned));
}

}  // namespace

bool Junction::u_face_contains(Point q) const {
  PlaneCurve face = face_polygon(*this, ray_minus, ray_plus);
  try {
    return winding_number(face, q, 1e-12) != 0;
  } catch (const Error&) {
    return true;  // on the face boundary: treat as inside (vertex contact)
  }
}

namespace {

struct Router {
  const ObstacleSet& obs;
  Box grid_box;
  double h;
  double clear_tol;
  Point v;

  Raster base;  // obstacle cells (undilated)

  Router(const ObstacleSet& o, Point vertex, const JunctionOptions& opt) : obs(o), v(vertex) {
    Box b = o.bbox();
    b.include(vertex);
    double m = std::max(b.diameter() * 0.3, 0.5);
    grid_box = b.inflated(m);
    h = grid_box.diameter() / opt.grid_cells;
    clear_tol = opt.clear_tol_rel * std::max(b.diameter(), 1.0);
    base = Raster(grid_box, h);
    for (const auto& c : o.curves) base.mark_curve(c);
    for (const auto& r : o.regions) r.stamp(base);
  }

  static Raster dilated(const Raster& src, int k) {
    Raster out = src;
    for (int pass = 0; pass < k; ++pass) {
      Raster next = out;
      for (int j = 0; j < out.ny; ++j)
        for (int i = 0; i < out.nx; ++i)
          if (out.occupied(i, j)) {
            next.set(i + 1, j);
            next.set(i - 1, j);
            next.set(i, j + 1);
            next.set(i, j - 1);
          }
      out = next;
    }
    return out;
  }

  // Route one ray. `blocked` carries obstacle plus previously routed rays.
  std::optional<PlaneCurve> route(double dir_angle, const Raster& blocked,
                                  const std::vector<PlaneCurve>& other_rays) {
    Point dir{std::cos(dir_angle), std::sin(dir_angle)};
    // Initial stub leaving the vertex.
    Point start;
    bool ok = false;
    for (double mult : {3.0, 5.0, 8.0, 12.0, 20.0}) {
      Point cand = v + (mult * h) * dir;
      auto [ci, cj] = blocked.cell_of(cand);
      if (!blocked.in_range(ci, cj) || blocked.occupied(ci, cj)) continue;
      if (obs.segment_clearance(v, cand, v, 4 * clear_tol) <= 0.0) continue;
      bool clear_other = true;
      for (const auto& r : other_rays) {
        // Other rays also start at v; ignore the shared vertex.
        PlaneCurve tail = r;
        tail.vertices[0] = r.at(std::min(0.5, (2 * h) / std::max(r.length(), 1e-12)));
        for (size_t i = 0; i < tail.segment_count(); ++i) {
          auto [c, d] = tail.segment(i);
          if (segment_segment_distance(v + (0.05 * mult * h) * dir, cand, c, d) <= clear_tol)
            clear_other = false;
        }
      }
      if (!clear_other) continue;
      start = cand;
      ok = true;
      break;
    }
    if (!ok) return std::nullopt;

    // Grid BFS to the border.
    auto [si, sj] = blocked.cell_of(start);
    std::vector<int> parent((size_t)blocked.nx * blocked.ny, -2);
    std::deque<int> q;
    parent[blocked.idx(si, sj)] = -1;
    q.push_back(blocked.idx(si, sj));
    int goal = -1;
    while (!q.empty() && goal < 0) {
      int cur = q.front();
      q.pop_front();
      int ci = cur % blocked.nx, cj = cur / blocked.nx;
      if (ci == 0 || cj == 0 || ci == blocked.nx - 1 || cj == blocked.ny - 1) {
        goal = cur;
        break;
      }
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int ni = ci + di[k], nj = cj + dj[k];
        if (!blocked.in_range(ni, nj) || blocked.occupied(ni, nj)) continue;
        int id = blocked.idx(ni, nj);
        if (parent[id] != -2) continue;
        parent[id] = cur;
        q.push_back(id);
      }
    }
    if (goal < 0) return std::nullopt;

    std::vector<Point> cells;
    for (int cur = goal; cur != -1; cur = parent[cur])
      cells.push_back(blocked.cell_center(cur % blocked.nx, cur / blocked.nx));
    std::reverse(cells.begin(), cells.end());

    std::vector<Point> path;
    path.push_back(v);
    path.push_back(start);
    for (const Point& p : cells) path.push_back(p);
    // Radial escape well beyond the box.
    {
      Point c = grid_box.center();
      Point last = path.back();
      Point d = last - c;
      double l = std::max(norm(d), 1e-9);
      path.push_back(c + ((grid_box.diameter() * 0.75 + l) / l) * d);
    }

    // Greedy line-of-sight smoothing (keeps the stub).
    auto clear_segment = [&](Point a, Point b) {
      if (obs.segment_clearance(a, b, v, 4 * clear_tol) <= clear_tol * 0.5) return false;
      for (const auto& r : other_rays) {
        for (size_t i = 0; i < r.segment_count(); ++i) {
          auto [c, d] = r.segment(i);
          double dist_ab = segment_segment_distance(a, b, c, d);
          if (dist_ab <= 2 * h * 0.49) {
            // Contact near the shared vertex is fine.
            if (distance(a, v) < 1e-12 && distance(c, v) < 1e-9) continue;
            return false;
          }
        }
      }
      return true;
    };
    std::vector<Point> smooth;
    smooth.push_back(path[0]);
    smooth.push_back(path[1]);
    size_t i = 1;
    while (i + 1 < path.size()) {
      size_t j = path.size() - 1;
      while (j > i + 1 && !clear_segment(path[i], path[j])) --j;
      smooth.push_back(path[j]);
      i = j;
    }
    std::vector<Point> cleaned;
    for (const Point& p : smooth)
      if (cleaned.empty() || distance(cleaned.back(), p) > 1e-12) cleaned.push_back(p);
    if (cleaned.size() < 2) return std::nullopt;
    return PlaneCurve::open(std::move(cleaned));
  }
};

}  // namespace

Junction build_junction(Point v, double heading, const ObstacleSet& obstacles,
                        const JunctionOptions& opt) {
  Router router(obstacles, v, opt);
  if (obstacles.encloses(v, router.h))
    throw Error(ErrorCode::no_escape, "vertex is enclosed by the obstacle union");

  // CCW order (R+, Ri, R-) around the vertex.
  const double tilts[4] = {0.0, M_PI / 12, -M_PI / 12, M_PI / 6};
  for (int attempt = 0; attempt < 4; ++attempt) {
    double tilt = opt.allow_side_ray_tilt ? tilts[attempt] : 0.0;
    for (int dil = 1; dil <= 3; ++dil) {
      Raster blocked = Router::dilated(router.base, dil);
      std::vector<PlaneCurve> done;
      auto ri = router.route(heading, blocked, done);
      if (!ri) continue;
      done.push_back(*ri);
      auto rp = router.route(heading - M_PI_2 - tilt, blocked, done);
      if (!rp) continue;
      done.push_back(*rp);
      auto rm = router.route(heading + M_PI_2 + tilt, blocked, done);
      if (!rm) continue;

      Junction j;
      j.vertex = v;
      j.ray_plus = *rp;
      j.ray_i = *ri;
      j.ray_minus = *rm;
      j.escape_box = router.grid_box;
      // Disjointness outside the vertex.
      if (j.min_feature(4 * router.h) <= 0.0) continue;
      return j;
    }
    if (!opt.allow_side_ray_tilt) break;
  }
  throw Error(ErrorCode::no_escape, "could not route three disjoint escaping rays");
}

Junction build_junction(Point v, double heading, const std::vector<PlaneCurve>& obstacles,
                        const JunctionOptions& opt) {
  ObstacleSet set;
  set.curves = obstacles;
  return build_junction(v, heading, set, opt);
}

Region shadow(const Region& X, const PlaneCurve& A, double h) {
  if (A.kind != CurveKind::open_arc)
    throw Error(ErrorCode::input_error, "shadow arc must be open");
  Box b = X.bbox();
  b.include(A.bbox());
  if (h <= 0) h = std::max(b.diameter(), 1e-9) / 512.0;

  // The arc may not cross into the interior of X.
  if (X.kind() == RegionKind::polygon || X.kind() == RegionKind::disk) {
    int n = std::max(16, (int)std::ceil(A.length() / h));
    auto boundary = X.boundary_polygon();
    for (int i = 1; i < n; ++i) {
      Point p = A.at((double)i / n);
      if (!X.contains(p, 0.0)) continue;
      double k = boundary ? point_curve_distance(p, *boundary) : 0.0;
      if (k > 2 * h) throw Error(ErrorCode::arc_enters_interior, "arc crosses into interior of X");
    }
  }

  Raster g(b.inflated(4 * h), h);
  X.stamp(g);
  g.mark_curve(A);
  return Region::raster(bounded_complement(g));
}

bool essential_cross(const Region& X, const PlaneCurve& A, const PlaneCurve& ray_to_landing,
                     double h) {
  Box b = X.bbox();
  b.include(A.bbox());
  if (h <= 0) h = std::max(b.diameter(), 1e-9) / 512.0;
  Region sh = shadow(X, A, h);
  if (sh.grid().empty()) return false;
  // Walk outward from the landing point; an initial run inside the shadow
  // longer than a few cells is an essential crossing.
  const PlaneCurve& R = ray_to_landing;
  double L = R.length();
  int n = std::max(16, (int)std::ceil(L / (h / 2)));
  int run = 0;
  for (int i = 1; i <= n; ++i) {
    Point p = R.at(1.0 - (double)i / n);  // from the landing end backwards
    if (sh.grid().contains(p)) {
      ++run;
      if (run >= 3) return true;
    } else if (run > 0) {
      break;
    }
  }
  return false;
}

}  // namespace planedyn
