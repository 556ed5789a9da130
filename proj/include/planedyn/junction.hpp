#pragma once

#include "planedyn/raster.hpp"

namespace planedyn {

// Obstacles a junction must avoid (meeting them only at its vertex).
struct ObstacleSet {
  std::vector<PlaneCurve> curves;
  std::vector<Region> regions;

  Box bbox() const;
  double diameter() const;
  // Distance from the segment [a,b] to the obstacle union, ignoring contact
  // within `ignore_near` of the point `near`.
  double segment_clearance(Point a, Point b, Point near, double ignore_near) const;
  bool encloses(Point v, double cell) const;  // v not connected to infinity
  std::vector<Point> sample_points(double pitch) const;
};

enum class RayId { plus, i, minus };

// Orientation-preserving image of the standard junction: three disjoint
// polygonal rays from `vertex`, in counterclockwise order (R+, Ri, R-), each
// escaping the obstacle bounding box.
struct Junction {
  Point vertex;
  PlaneCurve ray_plus, ray_i, ray_minus;
  Box escape_box;

  const PlaneCurve& ray(RayId id) const;
  // Nearest ray within tol, if any.
  std::optional<RayId> hit(Point p, double tol) const;
  double distance_to(Point p) const;
  // Minimal distance between distinct rays outside the ball B(vertex, rho).
  double min_feature(double rho) const;
  // True if q lies in the complementary face bounded by R- and R+ (the image
  // of the lower half-plane U of the standard junction).
  bool u_face_contains(Point q) const;
};

struct JunctionOptions {
  double clear_tol_rel = 1e-7;  // required clearance relative to diameter
  int grid_cells = 192;         // router grid resolution per axis
  bool allow_side_ray_tilt = true;
};

Junction build_junction(Point v, double heading, const ObstacleSet& obstacles,
                        const JunctionOptions& opt = {});

// Spec surface: obstacles given as plain curves.
Junction build_junction(Point v, double heading, const std::vector<PlaneCurve>& obstacles,
                        const JunctionOptions& opt = {});

// Union of bounded components of the complement of X and the arc A; empty
// raster allowed. A must meet the interior of X only at its endpoints.
Region shadow(const Region& X, const PlaneCurve& A, double h = 0.0);

// Crosscut/ray essential crossing: some initial subarc of the ray from its
// landing point lies in the shadow of A.
bool essential_cross(const Region& X, const PlaneCurve& A, const PlaneCurve& ray_to_landing,
                     double h = 0.0);

}  // namespace planedyn
