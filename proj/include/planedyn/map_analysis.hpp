#pragma once

#include <optional>

#include "planedyn/index_variation.hpp"

namespace planedyn {

enum class OrientationClass { positive, negative, undetermined };

// Sampling is a necessary-condition check only, never a proof.
struct OrientationReport {
  OrientationClass result = OrientationClass::undetermined;
  int valid_trials = 0;
  int positive_degrees = 0;
  int negative_degrees = 0;
  int zero_degrees = 0;
  std::string note;
};

OrientationReport orientation_class(const PlaneMap& f, int trials, uint32_t seed,
                                    const Tols& tols = {});

// Fixed-point index on shrinking circles until two consecutive radii agree.
int local_index(const PlaneMap& f, Point p, double probe_radius = 0.25, const Tols& tols = {});

enum class FixedKind { repelling, attracting, parabolic, neutral_other, unknown };
const char* to_string(FixedKind k);

struct FixedPointRecord {
  Point location;
  int index = 0;
  std::optional<Complex> multiplier;
  FixedKind kind = FixedKind::unknown;
};

// Quadtree subdivision by boundary index; cells with fixed points on their
// boundary are jittered deterministically.
std::vector<FixedPointRecord> locate_fixed_points(const PlaneMap& f, const Box& box,
                                                  const Tols& tols = {});

FixedKind kind_from_multiplier(Complex lambda);

enum class TopoType { repelling, attracting, unknown };

// Certificate search for topological repulsion/attraction via hull nesting of
// small circles and their images, at three scales.
TopoType topological_type(const PlaneMap& f, Point p, double probe_radius = 0.1,
                          const Tols& tols = {});

struct ScrambleConfig {
  Region X;
  std::vector<std::pair<Region, Region>> exits;  // (Z_i, K_i = Z_i cap X)
};

enum class ScrambleResult { none, scrambles, strongly };

struct ScrambleReport {
  ScrambleResult result = ScrambleResult::none;
  int violated_clause = 0;  // 1, 2, 3; 0 when none
  std::string detail;
  double membership_tol = 0;
  bool invariant_shortcut = false;
};

ScrambleReport scramble_check(const PlaneMap& f, const ScrambleConfig& cfg,
                              const Tols& tols = {});

struct RepelWitness {
  PlaneCurve crosscut;
  VariationReport variation;  // computed as +1 on success
  double disk_radius = 0;
};

// Numerical check of the repelling-crosscut sufficient condition: local
// injectivity with local X-invariance, a disk whose boundary leaves X in at
// least two pieces and maps off itself, and a landing ray moved outward.
// Throws hypothesis_failed with detail = 1, 2 or 3.
RepelWitness repels_outside_witness(const PlaneMap& f, const Region& X, Point p,
                                    const PlaneCurve& ray_to_landing, double disk_radius,
                                    const Tols& tols = {});

struct FixptCheckResult {
  bool applicable = false;
  std::optional<Point> fixed_point;
  bool numerical_fault = false;  // strongly scrambles yet no fixed point found
  ScrambleReport scramble;
};

FixptCheckResult fixpt_theorem_check(const PlaneMap& f, const ScrambleConfig& cfg,
                                     const Tols& tols = {});

struct LocrotInstance {
  ScrambleConfig cfg;
  std::vector<Point> fixed_points;
  std::vector<PlaneCurve> rays;  // one landing ray per fixed point
  double disk_radius = 0.25;
};

struct LocrotReport {
  bool scramble_ok = false;
  bool clause2_ok = false;
  bool all_indices_one = false;
  bool all_witnessed = false;
  bool certified = false;
  double x_diameter = 0;
  double resolution = 0;
  bool contradiction_alarm = false;
  std::string detail;
};

// The degeneracy checker: when every hypothesis is certified on an X fatter
// than the raster resolution, the theory says X must be a point, so the
// report raises a contradiction alarm (a numerical fault, not a refutation).
LocrotReport locrot_check(const PlaneMap& f, const LocrotInstance& inst, const Tols& tols = {});
bool locrot_alarm(bool certified, double x_diameter, double resolution);

}  // namespace planedyn
