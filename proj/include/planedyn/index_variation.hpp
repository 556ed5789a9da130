#pragma once

#include "planedyn/junction.hpp"
#include "planedyn/plane_map.hpp"

namespace planedyn {

// Tolerance knobs shared by the plane-topology operations. Relative values
// scale with the instance diameter; reports carry the absolute values used.
struct Tols {
  double eps_geom_rel = 1e-9;
  double eps_fix_rel = 1e-9;
  double membership_rel = 1e-6;  // region membership is tolerance-dependent
  double raster_rel = 1.0 / 512;
};

// Degree of f restricted to S about w (winding number of f|S about w).
int map_degree(const PlaneMap& f, const PlaneCurve& S, Point w, const Tols& tols = {});

// Degree of the normalized displacement (f(z)-z)/|f(z)-z| along S.
int fixed_point_index(const PlaneMap& f, const PlaneCurve& S, const Tols& tols = {});

struct VariationEvent {
  double t;   // arc-length fraction along the link
  RayId ray;  // which ray the image meets
};

struct VariationReport {
  PlaneCurve link;
  Junction junction;
  std::vector<VariationEvent> events;  // ordered image hits on the junction
  std::vector<int> crossings;          // counted transitions: +1 R+->Ri, -1 Ri->R+
  int total = 0;
  double eps_geom = 0;
  double membership_tol = 0;
  bool vertex_perturbed = false;
};

// Bell variation of f on the bumping arc A of X, by the crossing algorithm.
// A junction may be supplied; otherwise one is constructed at a point of A
// far from X, heading outward, and verified to keep X on its U side.
// junction_region, when given, is the (larger) continuum the junction must
// avoid and keep on its U side; defaults to X.
VariationReport variation(const PlaneMap& f, const PlaneCurve& A, const Region& X,
                          std::optional<Junction> junction = std::nullopt,
                          const Tols& tols = {},
                          const std::optional<Region>& junction_region = std::nullopt);

// Independent route to the same number: complete A to a bumping simple
// closed curve S = A + I with a tight return arc I hugging X and
// f(I) disjoint from the junction; then win(f, S, v) equals var(f, A).
int variation_oracle(const PlaneMap& f, const PlaneCurve& A, const Region& X,
                     const Tols& tols = {});

struct AllowablePartition {
  PlaneCurve curve;            // CCW-normalized bumping curve
  std::vector<double> params;  // anchor arc-length fractions, increasing
  std::vector<Point> points;
  double membership_tol = 0;
};

// Greedy refinement: anchors on S with f-images in X, links split until each
// moves off itself.
AllowablePartition find_allowable_partition(const PlaneMap& f, const PlaneCurve& S,
                                            const Region& X, const Tols& tols = {},
                                            int max_depth = 20);

// Extract the i-th link of a partition as an open arc.
PlaneCurve partition_link(const AllowablePartition& p, size_t i, int samples_per_link = 64);

struct FmotResult {
  int index = 0;
  int variation_sum = 0;
  bool holds = false;
  std::vector<VariationReport> links;
  AllowablePartition partition;
};

// Index-variation identity check: ind(f,S) and sum of link variations are
// computed independently; holds means ind == sum + 1. A false result is a
// numerical fault by the theory and is reported as such by callers.
FmotResult fmot_verify(const PlaneMap& f, const PlaneCurve& S, const Region& X,
                       const Tols& tols = {});

// CCW-orient a closed curve (positive signed area).
PlaneCurve ccw_normalized(const PlaneCurve& S);
double signed_area(const PlaneCurve& S);

}  // namespace planedyn
