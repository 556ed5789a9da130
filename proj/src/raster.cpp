#include "planedyn/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace planedyn {

Raster::Raster(const Box& b, double cell) {
  h = cell;
  x0 = b.x0;
  y0 = b.y0;
  nx = std::max(1, (int)std::ceil(b.width() / h));
  ny = std::max(1, (int)std::ceil(b.height() / h));
  cells.assign((size_t)nx * ny, 0);
}

std::pair<int, int> Raster::cell_of(Point p) const {
  return {(int)std::floor((p.x - x0) / h), (int)std::floor((p.y - y0) / h)};
}

Point Raster::cell_center(int i, int j) const {
  return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h};
}

bool Raster::contains(Point p) const {
  auto [i, j] = cell_of(p);
  return occupied(i, j);
}

bool Raster::empty() const { return occupied_count() == 0; }

size_t Raster::occupied_count() const {
  size_t n = 0;
  for (uint8_t c : cells) n += (c != 0);
  return n;
}

double Raster::occupied_diameter() const {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  bool any = false;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (occupied(i, j)) {
        any = true;
        Point c = cell_center(i, j);
        lo_x = std::min(lo_x, c.x);
        lo_y = std::min(lo_y, c.y);
        hi_x = std::max(hi_x, c.x);
        hi_y = std::max(hi_y, c.y);
      }
  if (!any) return 0.0;
  return std::hypot(hi_x - lo_x, hi_y - lo_y) + h;
}

std::vector<Point> Raster::occupied_centers() const {
  std::vector<Point> out;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (occupied(i, j)) out.push_back(cell_center(i, j));
  return out;
}

void Raster::mark_segment(Point a, Point b, uint8_t v) {
  double len = distance(a, b);
  int steps = std::max(2, (int)std::ceil(len / (h * 0.45)));
  for (int s = 0; s <= steps; ++s) {
    Point p = a + ((double)s / steps) * (b - a);
    auto [i, j] = cell_of(p);
    set(i, j, v);
  }
}

void Raster::mark_curve(const PlaneCurve& c, uint8_t v) {
  for (size_t i = 0; i < c.segment_count(); ++i) {
    auto [a, b] = c.segment(i);
    mark_segment(a, b, v);
  }
}

void Raster::mark_disk(Point c, double r, uint8_t v) {
  auto [i0, j0] = cell_of({c.x - r, c.y - r});
  auto [i1, j1] = cell_of({c.x + r, c.y + r});
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (in_range(i, j) && distance(cell_center(i, j), c) <= r) set(i, j, v);
}

std::vector<int> Raster::occupied_components(int* count) const {
  std::vector<int> label((size_t)nx * ny, -1);
  int next = 0;
  std::deque<std::pair<int, int>> q;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!occupied(i, j) || label[idx(i, j)] >= 0) continue;
      label[idx(i, j)] = next;
      q.push_back({i, j});
      while (!q.empty()) {
        auto [ci, cj] = q.front();
        q.pop_front();
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int ni = ci + di[k], nj = cj + dj[k];
          if (occupied(ni, nj) && label[idx(ni, nj)] < 0) {
            label[idx(ni, nj)] = next;
            q.push_back({ni, nj});
          }
        }
      }
      ++next;
    }
  if (count) *count = next;
  return label;
}

std::vector<uint8_t> flood_from_border(const Raster& grid) {
  std::vector<uint8_t> seen((size_t)grid.nx * grid.ny, 0);
  std::deque<std::pair<int, int>> q;
  auto push = [&](int i, int j) {
    if (!grid.in_range(i, j) || grid.occupied(i, j) || seen[grid.idx(i, j)]) return;
    seen[grid.idx(i, j)] = 1;
    q.push_back({i, j});
  };
  for (int i = 0; i < grid.nx; ++i) {
    push(i, 0);
    push(i, grid.ny - 1);
  }
  for (int j = 0; j < grid.ny; ++j) {
    push(0, j);
    push(grid.nx - 1, j);
  }
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    push(i + 1, j);
    push(i - 1, j);
    push(i, j + 1);
    push(i, j - 1);
  }
  return seen;
}

Raster bounded_complement(const Raster& obstacles) {
  Raster out = obstacles;
  std::fill(out.cells.begin(), out.cells.end(), 0);
  auto reach = flood_from_border(obstacles);
  for (int j = 0; j < obstacles.ny; ++j)
    for (int i = 0; i < obstacles.nx; ++i)
      if (!obstacles.occupied(i, j) && !reach[obstacles.idx(i, j)]) out.set(i, j);
  return out;
}

Region Region::polygon(PlaneCurve boundary) {
  if (boundary.kind != CurveKind::closed_curve)
    throw Error(ErrorCode::input_error, "polygon region needs a closed boundary");
  if (!boundary.is_simple()) throw Error(ErrorCode::not_simple, "polygon boundary self-intersects");
  Region r;
  r.kind_ = RegionKind::polygon;
  r.curve_ = std::move(boundary);
  return r;
}

Region Region::path(PlaneCurve arc) {
  Region r;
  r.kind_ = RegionKind::path;
  r.curve_ = std::move(arc);
  return r;
}

Region Region::segment(Point a, Point b) { return path(PlaneCurve::open({a, b})); }

Region Region::disk(Point center, double radius) {
  Region r;
  r.kind_ = RegionKind::disk;
  r.center_ = center;
  r.radius_ = radius;
  return r;
}

Region Region::point(Point p) {
  Region r;
  r.kind_ = RegionKind::point;
  r.center_ = p;
  return r;
}

Region Region::raster(Raster g) {
  Region r;
  r.kind_ = RegionKind::raster;
  r.raster_ = std::move(g);
  return r;
}

Box Region::bbox() const {
  switch (kind_) {
    case RegionKind::polygon:
    case RegionKind::path: return curve_.bbox();
    case RegionKind::disk:
      return {center_.x - radius_, center_.y - radius_, center_.x + radius_, center_.y + radius_};
    case RegionKind::point: return {center_.x, center_.y, center_.x, center_.y};
    case RegionKind::raster: {
      Box full = raster_.bbox();
      Box b{full.x1, full.y1, full.x0, full.y0};
      bool any = false;
      for (int j = 0; j < raster_.ny; ++j)
        for (int i = 0; i < raster_.nx; ++i)
          if (raster_.occupied(i, j)) {
            Point c = raster_.cell_center(i, j);
            b.include(Point{c.x - raster_.h / 2, c.y - raster_.h / 2});
            b.include(Point{c.x + raster_.h / 2, c.y + raster_.h / 2});
            any = true;
          }
      return any ? b : Box{full.center().x, full.center().y, full.center().x, full.center().y};
    }
  }
  return {};
}

double Region::diameter() const {
  if (kind_ == RegionKind::point) return 0.0;
  if (kind_ == RegionKind::raster) return raster_.occupied_diameter();
  return bbox().diameter();
}

double Region::distance_to(Point p) const {
  switch (kind_) {
    case RegionKind::polygon: {
      double d = point_curve_distance(p, curve_);
      if (winding_is_inside(p)) return 0.0;
      return d;
    }
    case RegionKind::path: return point_curve_distance(p, curve_);
    case RegionKind::disk: return std::max(0.0, distance(p, center_) - radius_);
    case RegionKind::point: return distance(p, center_);
    case RegionKind::raster: {
      if (raster_.contains(p)) return 0.0;
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < raster_.ny; ++j)
        for (int i = 0; i < raster_.nx; ++i)
          if (raster_.occupied(i, j))
            best = std::min(best, distance(p, raster_.cell_center(i, j)));
      return best;
    }
  }
  return std::numeric_limits<double>::infinity();
}

bool Region::contains(Point p, double tol) const { return distance_to(p) <= tol; }

bool Region::is_connected_raster() const {
  if (kind_ != RegionKind::raster) return true;
  int count = 0;
  raster_.occupied_components(&count);
  return count <= 1;
}

std::vector<Point> Region::sample_points(double pitch) const {
  std::vector<Point> out;
  switch (kind_) {
    case RegionKind::point: out.push_back(center_); break;
    case RegionKind::path: {
      double L = curve_.length();
      int n = std::max(2, (int)std::ceil(L / pitch));
      for (int i = 0; i <= n; ++i) out.push_back(curve_.at((double)i / n));
      break;
    }
    case RegionKind::disk: {
      int rings = std::max(1, (int)std::ceil(radius_ / pitch));
      out.push_back(center_);
      for (int r = 1; r <= rings; ++r) {
        double rad = radius_ * r / rings;
        int m = std::max(8, (int)std::ceil(2 * M_PI * rad / pitch));
        for (int k = 0; k < m; ++k) {
          double a = 2 * M_PI * k / m;
          out.push_back({center_.x + rad * std::cos(a), center_.y + rad * std::sin(a)});
        }
      }
      break;
    }
    case RegionKind::polygon: {
      double L = curve_.length();
      int n = std::max(4, (int)std::ceil(L / pitch));
      for (int i = 0; i < n; ++i) out.push_back(curve_.at((double)i / n));
      Box b = curve_.bbox();
      for (double y = b.y0 + pitch / 2; y < b.y1; y += pitch)
        for (double x = b.x0 + pitch / 2; x < b.x1; x += pitch)
          if (winding_is_inside({x, y})) out.push_back({x, y});
      break;
    }
    case RegionKind::raster:
      out = raster_.occupied_centers();
      break;
  }
  return out;
}

bool Region::winding_is_inside(Point p) const {
  if (kind_ != RegionKind::polygon) return false;
  if (point_curve_distance(p, curve_) == 0.0) return true;
  try {
    return winding_number(curve_, p, 1e-12) != 0;
  } catch (const Error&) {
    return true;  // on the boundary within tolerance
  }
}

std::optional<PlaneCurve> Region::boundary_polygon(int segments_per_unit) const {
  switch (kind_) {
    case RegionKind::polygon: return curve_;
    case RegionKind::disk: return PlaneCurve::circle(center_, radius_, segments_per_unit);
    default: return std::nullopt;
  }
}

PlaneCurve Region::offset_loop(double beta, int arc_steps) const {
  switch (kind_) {
    case RegionKind::disk: return PlaneCurve::circle(center_, radius_ + beta, 4 * arc_steps);
    case RegionKind::point: return PlaneCurve::circle(center_, beta, 4 * arc_steps);
    case RegionKind::path: {
      // Stadium around the polyline: offset on both sides with round joins
      // and end caps.
      const auto& v = curve_.vertices;
      auto normal = [](Point a, Point b) {
        Point d = b - a;
        double l = norm(d);
        return Point{-d.y / l, d.x / l};
      };
      std::vector<Point> loop;
      auto add_arc = [&](Point c, double a0, double a1) {
        for (int s = 0; s <= arc_steps; ++s) {
          double a = a0 + (a1 - a0) * s / arc_steps;
          loop.push_back({c.x + beta * std::cos(a), c.y + beta * std::sin(a)});
        }
      };
      auto ang = [](Point d) { return std::atan2(d.y, d.x); };
      // Left side forward.
      for (size_t i = 0; i + 1 < v.size(); ++i) {
        Point nrm = normal(v[i], v[i + 1]);
        loop.push_back(v[i] + beta * nrm);
        loop.push_back(v[i + 1] + beta * nrm);
        if (i + 2 < v.size()) {
          double a0 = ang(normal(v[i], v[i + 1]));
          double a1 = ang(normal(v[i + 1], v[i + 2]));
          while (a1 < a0) a1 += 2 * M_PI;
          if (a1 - a0 < M_PI) add_arc(v[i + 1], a0, a1);
        }
      }
      // End cap at the last vertex.
      {
        Point nrm = normal(v[v.size() - 2], v.back());
        add_arc(v.back(), ang(nrm), ang(nrm) + M_PI);
      }
      // Right side backward.
      for (size_t i = v.size() - 1; i >= 1; --i) {
        Point nrm = normal(v[i], v[i - 1]);
        loop.push_back(v[i] + beta * nrm);
        loop.push_back(v[i - 1] + beta * nrm);
        if (i >= 2) {
          double a0 = ang(normal(v[i], v[i - 1]));
          double a1 = ang(normal(v[i - 1], v[i - 2]));
          while (a1 < a0) a1 += 2 * M_PI;
          if (a1 - a0 < M_PI) add_arc(v[i - 1], a0, a1);
        }
      }
      // End cap back to the start of the left side.
      {
        Point nrm = normal(v[1], v[0]);
        add_arc(v[0], ang(nrm), ang(nrm) + M_PI);
      }
      // Drop near-duplicate consecutive points before closing.
      std::vector<Point> cleaned;
      for (const Point& p : loop)
        if (cleaned.empty() || distance(cleaned.back(), p) > 1e-12) cleaned.push_back(p);
      while (cleaned.size() > 3 && distance(cleaned.front(), cleaned.back()) <= 1e-12)
        cleaned.pop_back();
      return PlaneCurve::closed(std::move(cleaned));
    }
    case RegionKind::polygon: {
      // Outward vertex offset; adequate for convex boundaries.
      const auto& v = curve_.vertices;
      size_t n = v.size();
      double area2 = 0;
      for (size_t i = 0; i < n; ++i) area2 += cross(v[i], v[(i + 1) % n]);
      double orient = area2 >= 0 ? 1.0 : -1.0;
      std::vector<Point> out;
      for (size_t i = 0; i < n; ++i) {
        Point prev = v[(i + n - 1) % n], cur = v[i], next = v[(i + 1) % n];
        Point d1 = cur - prev, d2 = next - cur;
        Point n1{orient * d1.y / norm(d1), -orient * d1.x / norm(d1)};
        Point n2{orient * d2.y / norm(d2), -orient * d2.x / norm(d2)};
        Point nsum = n1 + n2;
        double l = norm(nsum);
        if (l < 1e-9) {
          nsum = n1;
          l = 1.0;
        }
        double miter = beta / std::max(0.2, std::sqrt((1.0 + dot(n1, n2)) / 2.0));
        out.push_back(cur + (miter / l) * nsum);
      }
      return PlaneCurve::closed(std::move(out));
    }
    case RegionKind::raster:
      throw Error(ErrorCode::cannot_close_arc, "offset loop unsupported for raster regions");
  }
  throw Error(ErrorCode::internal_fault, "unreachable");
}

Raster Region::rasterize(double h, double inflate) const {
  Raster g(bbox().inflated(std::max(inflate, 2 * h)), h);
  stamp(g);
  return g;
}

void Region::stamp(Raster& grid, uint8_t v) const {
  switch (kind_) {
    case RegionKind::path: grid.mark_curve(curve_, v); break;
    case RegionKind::point: {
      auto [i, j] = grid.cell_of(center_);
      grid.set(i, j, v);
      break;
    }
    case RegionKind::disk: grid.mark_disk(center_, radius_, v); break;
    case RegionKind::polygon: {
      grid.mark_curve(curve_, v);
      Box b = curve_.bbox();
      auto [i0, j0] = grid.cell_of({b.x0, b.y0});
      auto [i1, j1] = grid.cell_of({b.x1, b.y1});
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
          if (grid.in_range(i, j) && winding_is_inside(grid.cell_center(i, j)))
            grid.set(i, j, v);
      break;
    }
    case RegionKind::raster:
      for (int j = 0; j < raster_.ny; ++j)
        for (int i = 0; i < raster_.nx; ++i)
          if (raster_.occupied(i, j)) {
            auto [gi, gj] = grid.cell_of(raster_.cell_center(i, j));
            grid.set(gi, gj, v);
          }
      break;
  }
}

}  // namespace planedyn
