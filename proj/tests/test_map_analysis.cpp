#include "doctest.h"
#include "oracles.hpp"
#include "planedyn/map_analysis.hpp"

using namespace planedyn;

namespace {

PlaneMap poly(std::initializer_list<Complex> c) { return PlaneMap::polynomial(c); }

PlaneMap grid_conj() {
  return PlaneMap::sampled({-2, -2, 2, 2}, 81, 81, [](Complex z) { return std::conj(z); });
}

PlaneMap grid_modsq() {
  return PlaneMap::sampled({-2, -2, 2, 2}, 81, 81,
                           [](Complex z) { return Complex(std::norm(z), 0.0); });
}

}  // namespace

TEST_CASE("orientation classification") {
  CHECK(orientation_class(poly({0, 0, 1}), 12, 7).result == OrientationClass::positive);
  CHECK(orientation_class(grid_conj(), 12, 7).result == OrientationClass::negative);
  OrientationReport r = orientation_class(grid_modsq(), 12, 7);
  CHECK(r.result == OrientationClass::undetermined);
  CHECK(r.note.find("necessary") != std::string::npos);
}

TEST_CASE("local index values and multiplicity oracle") {
  CHECK(local_index(poly({0, 2}), {0, 0}) == 1);
  CHECK(local_index(poly({0, 0.5}), {0, 0}) == 1);
  CHECK(local_index(poly({0, 1, 1}), {0, 0}) == 2);
  CHECK(local_index(poly({0, 1, 0, 1}), {0, 0}) == 3);
  CHECK(local_index(poly({0, 1, 0, 0, 1}), {0, 0}) == 4);

  // Independent root-multiplicity oracle: count displacement roots in a tiny
  // disk around the origin (a k-fold root yields a cluster of k).
  for (int k = 2; k <= 4; ++k) {
    std::vector<Complex> disp(k + 1, 0.0);
    disp[k] = 1.0;  // f(z)-z = z^k
    CHECK(oracles::roots_inside_circle(disp, {0, 0}, 0.5) == k);
  }
}

TEST_CASE("fixed point localization for polynomials") {
  SUBCASE("z^2 finds 0 and 1") {
    auto recs = locate_fixed_points(poly({0, 0, 1}), {-2, -2, 2, 2});
    REQUIRE(recs.size() == 2);
    CHECK(distance(recs[0].location, {0, 0}) < 1e-7);
    CHECK(recs[0].kind == FixedKind::attracting);
    CHECK(recs[0].index == 1);
    CHECK(distance(recs[1].location, {1, 0}) < 1e-7);
    CHECK(recs[1].kind == FixedKind::repelling);
    CHECK(std::abs(*recs[1].multiplier - Complex(2, 0)) < 1e-7);
    CHECK(recs[1].index == 1);
  }
  SUBCASE("z+1 has none") {
    CHECK(locate_fixed_points(poly({1, 1}), {-2, -2, 2, 2}).empty());
  }
  SUBCASE("z^2-1 finds the golden pair") {
    auto recs = locate_fixed_points(poly({-1, 0, 1}), {-2, -2, 2, 2});
    REQUIRE(recs.size() == 2);
    double phi = (1 + std::sqrt(5.0)) / 2;
    CHECK(distance(recs[0].location, {1 - phi, 0}) < 1e-7);
    CHECK(distance(recs[1].location, {phi, 0}) < 1e-7);
    CHECK(recs[0].index == 1);
    CHECK(recs[1].index == 1);
  }
}

TEST_CASE("argument principle at desk scale") {
  // Sum of local indices equals the boundary index, for a few polynomials.
  std::vector<std::vector<Complex>> polys = {
      {0, 0, 1}, {-1, 0, 1}, {0.2, -0.5, 0, 1}, {0, 1, 1}};
  for (const auto& c : polys) {
    PlaneMap f = PlaneMap::polynomial(c);
    Box box{-2.1, -2.1, 2.1, 2.1};
    auto recs = locate_fixed_points(f, box);
    int sum = 0;
    for (const auto& r : recs) sum += r.index;
    CHECK(sum == fixed_point_index(f, PlaneCurve::rectangle(box)));
  }
}

TEST_CASE("topological type") {
  CHECK(topological_type(poly({0, 2}), {0, 0}) == TopoType::repelling);
  CHECK(topological_type(poly({0, 0.5}), {0, 0}) == TopoType::attracting);
  CHECK(topological_type(poly({0, 1, 1}), {0, 0}) == TopoType::unknown);
  // Grid maps use the nesting certificate.
  PlaneMap g2 = PlaneMap::sampled({-2, -2, 2, 2}, 81, 81, [](Complex z) { return 2.0 * z; });
  CHECK(topological_type(g2, {0, 0}, 0.2) == TopoType::repelling);
  PlaneMap gh = PlaneMap::sampled({-2, -2, 2, 2}, 81, 81, [](Complex z) { return 0.5 * z; });
  CHECK(topological_type(gh, {0, 0}, 0.2) == TopoType::attracting);
}

namespace {

ScrambleConfig minus2z_config() {
  ScrambleConfig cfg;
  cfg.X = Region::segment({-1, 0}, {1, 0});
  cfg.exits.push_back({Region::segment({-2, 0}, {-1, 0}), Region::point({-1, 0})});
  cfg.exits.push_back({Region::segment({1, 0}, {2, 0}), Region::point({1, 0})});
  return cfg;
}

}  // namespace

TEST_CASE("scramble checks") {
  SUBCASE("invariant disk is strongly scrambled") {
    ScrambleConfig cfg;
    cfg.X = Region::disk({0, 0}, 1.0);
    ScrambleReport r = scramble_check(poly({0, 0.5}), cfg);
    CHECK(r.result == ScrambleResult::strongly);
    CHECK(r.invariant_shortcut);
  }
  SUBCASE("-2z on the segment with two exit pads") {
    ScrambleReport r = scramble_check(poly({0, -2}), minus2z_config());
    CHECK(r.result == ScrambleResult::strongly);
  }
  SUBCASE("2z fails clause 3") {
    ScrambleConfig cfg;
    cfg.X = Region::segment({-1, 0}, {1, 0});
    cfg.exits.push_back({Region::segment({1, 0}, {2, 0}), Region::point({1, 0})});
    cfg.exits.push_back({Region::segment({-2, 0}, {-1, 0}), Region::point({-1, 0})});
    ScrambleReport r = scramble_check(poly({0, 2}), cfg);
    CHECK(r.result == ScrambleResult::none);
    CHECK(r.violated_clause == 3);
  }
}

TEST_CASE("repelling witness on the model instance") {
  PlaneMap f = poly({0, 2});
  Region X = Region::segment({-1, 0}, {1, 0});
  PlaneCurve ray = PlaneCurve::open({{0, 40}, {0, 0}});
  RepelWitness w = repels_outside_witness(f, X, {0, 0}, ray, 0.5);
  CHECK(w.variation.total == 1);
  // The crosscut is the upper semicircle of radius 1/2.
  CHECK(std::abs(point_curve_distance({0, 0.5}, w.crosscut)) < 0.05);
  CHECK(w.crosscut.front().y < 0.05);
  CHECK(w.crosscut.back().y < 0.05);
  // Cross-check by the independent winding oracle.
  CHECK(variation_oracle(f, w.crosscut, X) == 1);
}

TEST_CASE("repelling witness hypothesis failures") {
  Region X = Region::segment({-1, 0}, {1, 0});
  PlaneCurve ray = PlaneCurve::open({{0, 40}, {0, 0}});
  try {
    repels_outside_witness(poly({0, 0.5}), X, {0, 0}, ray, 0.5);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_failed);
    CHECK(e.detail() == 3);
  }
  // D of radius 1/4 around the endpoint of X=[0,1]: bd D \ X is one arc.
  Region X2 = Region::segment({0, 0}, {1, 0});
  // Map fixing 0 and expanding outward so hypotheses (1) and (3) hold there.
  try {
    repels_outside_witness(poly({0, 2}), X2, {0, 0}, ray, 0.25);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_failed);
    CHECK(e.detail() == 2);
  }
}

TEST_CASE("fixed point theorem check") {
  SUBCASE("-2z with exit pads") {
    FixptCheckResult r = fixpt_theorem_check(poly({0, -2}), minus2z_config());
    CHECK(r.applicable);
    REQUIRE(r.fixed_point.has_value());
    CHECK(distance(*r.fixed_point, {0, 0}) < 1e-4);
    CHECK_FALSE(r.numerical_fault);
  }
  SUBCASE("contraction on the disk") {
    ScrambleConfig cfg;
    cfg.X = Region::disk({0, 0}, 1.0);
    FixptCheckResult r = fixpt_theorem_check(poly({0, 0.5}), cfg);
    CHECK(r.applicable);
    REQUIRE(r.fixed_point.has_value());
    CHECK(distance(*r.fixed_point, {0, 0}) < 1e-4);
  }
  SUBCASE("translation never applies") {
    ScrambleConfig cfg;
    cfg.X = Region::disk({0, 0}, 1.0);
    FixptCheckResult r = fixpt_theorem_check(poly({5, 1}), cfg);
    CHECK_FALSE(r.applicable);
    CHECK(r.scramble.violated_clause == 1);
  }
}

TEST_CASE("degeneracy harness never certifies a fat X") {
  // 2z on the segment: the scramble clause fails, so no certification and no
  // alarm, exactly as the theory demands for a fat X.
  LocrotInstance inst;
  inst.cfg.X = Region::segment({-1, 0}, {1, 0});
  inst.cfg.exits.push_back({Region::segment({1, 0}, {2, 0}), Region::point({1, 0})});
  inst.cfg.exits.push_back({Region::segment({-2, 0}, {-1, 0}), Region::point({-1, 0})});
  inst.fixed_points = {{0, 0}};
  inst.rays = {PlaneCurve::open({{0, 40}, {0, 0}})};
  inst.disk_radius = 0.5;
  LocrotReport r = locrot_check(poly({0, 2}), inst);
  CHECK_FALSE(r.certified);
  CHECK_FALSE(r.contradiction_alarm);

  // -2z strongly scrambles but the witness hypothesis (3) fails at 0 (the
  // ray is not mapped into itself), so again no certification.
  LocrotInstance inst2;
  inst2.cfg = minus2z_config();
  inst2.fixed_points = {{0, 0}};
  inst2.rays = {PlaneCurve::open({{0, 40}, {0, 0}})};
  inst2.disk_radius = 0.5;
  LocrotReport r2 = locrot_check(poly({0, -2}), inst2);
  CHECK(r2.scramble_ok);
  CHECK_FALSE(r2.certified);
  CHECK_FALSE(r2.contradiction_alarm);

  // The alarm branch itself: a fabricated full certification on a fat X is a
  // contradiction; on a point-sized X it is consistent.
  CHECK(locrot_alarm(true, 1.0, 1e-3));
  CHECK_FALSE(locrot_alarm(true, 1e-9, 1e-3));
  CHECK_FALSE(locrot_alarm(false, 1.0, 1e-3));
}
