#pragma once

#include <memory>
#include <vector>

#include "planedyn/geometry.hpp"

namespace planedyn {

// Occupancy grid over an axis-aligned box, cell size h.
struct Raster {
  double x0 = 0, y0 = 0, h = 1;
  int nx = 0, ny = 0;
  std::vector<uint8_t> cells;

  Raster() = default;
  Raster(const Box& b, double cell);

  int idx(int i, int j) const { return j * nx + i; }
  bool in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
  bool occupied(int i, int j) const { return in_range(i, j) && cells[idx(i, j)] != 0; }
  void set(int i, int j, uint8_t v = 1) { if (in_range(i, j)) cells[idx(i, j)] = v; }
  std::pair<int, int> cell_of(Point p) const;
  Point cell_center(int i, int j) const;
  Box bbox() const { return {x0, y0, x0 + nx * h, y0 + ny * h}; }

  bool contains(Point p) const;
  bool empty() const;
  size_t occupied_count() const;
  double occupied_diameter() const;
  std::vector<Point> occupied_centers() const;

  void mark_segment(Point a, Point b, uint8_t v = 1);
  void mark_curve(const PlaneCurve& c, uint8_t v = 1);
  void mark_disk(Point c, double r, uint8_t v = 1);

  // 4-connected component labels for occupied cells; -1 elsewhere.
  std::vector<int> occupied_components(int* count) const;
};

// Cells of `grid` reachable from the border through unoccupied cells
// (4-connectivity). Returned mask is 1 on reachable cells.
std::vector<uint8_t> flood_from_border(const Raster& grid);

// Bounded complementary cells: neither occupied nor reachable from the border.
Raster bounded_complement(const Raster& obstacles);

enum class RegionKind { polygon, path, disk, point, raster };

// A plane continuum in one of several concrete forms. Membership tests carry
// an absolute tolerance; paths and points are zero-area continua.
class Region {
 public:
  static Region polygon(PlaneCurve boundary);
  static Region path(PlaneCurve arc);
  static Region segment(Point a, Point b);
  static Region disk(Point center, double radius);
  static Region point(Point p);
  static Region raster(Raster r);

  RegionKind kind() const { return kind_; }
  const PlaneCurve& curve() const { return curve_; }
  Point disk_center() const { return center_; }
  double disk_radius() const { return radius_; }
  const Raster& grid() const { return raster_; }

  Box bbox() const;
  double diameter() const;
  bool contains(Point p, double tol) const;
  double distance_to(Point p) const;  // 0 inside
  bool is_connected_raster() const;

  // Points covering the region for image-sampling checks: boundary plus an
  // interior net of pitch `pitch`.
  std::vector<Point> sample_points(double pitch) const;
  // Boundary polygon (closed) for regions with area; paths/points have none.
  std::optional<PlaneCurve> boundary_polygon(int segments_per_unit = 64) const;
  // A simple closed loop at offset beta outside the region, enclosing it.
  PlaneCurve offset_loop(double beta, int arc_steps = 16) const;

  Raster rasterize(double h, double inflate = 0.0) const;
  void stamp(Raster& grid, uint8_t v = 1) const;

 private:
  bool winding_is_inside(Point p) const;

  RegionKind kind_ = RegionKind::point;
  PlaneCurve curve_;          // polygon boundary or path
  Point center_;              // disk / point
  double radius_ = 0;         // disk
  Raster raster_;
};

}  // namespace planedyn
