#include "planedyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace planedyn {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::point_on_curve: return "PointOnCurve";
    case ErrorCode::not_simple: return "NotSimple";
    case ErrorCode::no_escape: return "NoEscape";
    case ErrorCode::arc_enters_interior: return "ArcEntersInterior";
    case ErrorCode::image_hits_basepoint: return "ImageHitsBasepoint";
    case ErrorCode::fixed_point_on_curve: return "FixedPointOnCurve";
    case ErrorCode::precondition_violated: return "PreconditionViolated";
    case ErrorCode::junction_touches_image: return "JunctionTouchesImageOfEndpoints";
    case ErrorCode::cannot_close_arc: return "CannotCloseArc";
    case ErrorCode::no_partition: return "NoPartition";
    case ErrorCode::not_isolated: return "NotIsolated";
    case ErrorCode::boundary_fixed_point: return "BoundaryFixedPoint";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::hypothesis_failed: return "HypothesisFailed";
    case ErrorCode::eval_outside_grid: return "EvalOutsideGrid";
    case ErrorCode::not_disjoint: return "NotDisjoint";
    case ErrorCode::no_valid_pairing: return "NoValidPairing";
    case ErrorCode::not_compatible: return "NotCompatible";
    case ErrorCode::not_fixed: return "NotFixed";
    case ErrorCode::newton_divergence: return "NewtonDivergence";
    case ErrorCode::angle_not_rational: return "AngleNotRational";
    case ErrorCode::ray_unresolved: return "RayUnresolved";
    case ErrorCode::condition_failed: return "ConditionFailed";
    case ErrorCode::non_isolated: return "NonIsolated";
    case ErrorCode::input_error: return "InputError";
    case ErrorCode::internal_fault: return "InternalFault";
  }
  return "UnknownError";
}

bool Point::finite() const { return std::isfinite(x) && std::isfinite(y); }

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }
double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double Box::diameter() const { return std::hypot(width(), height()); }

bool Box::contains(Point p) const {
  return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
}

void Box::include(Point p) {
  x0 = std::min(x0, p.x);
  y0 = std::min(y0, p.y);
  x1 = std::max(x1, p.x);
  y1 = std::max(y1, p.y);
}

void Box::include(const Box& b) {
  include(Point{b.x0, b.y0});
  include(Point{b.x1, b.y1});
}

double segment_distance(Point p, Point a, Point b) {
  Point ab = b - a;
  double l2 = dot(ab, ab);
  if (l2 == 0.0) return distance(p, a);
  double t = std::clamp(dot(p - a, ab) / l2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

std::optional<double> segment_intersection_param(Point a, Point b, Point c, Point d) {
  Point r = b - a;
  Point s = d - c;
  double denom = cross(r, s);
  Point qp = c - a;
  if (denom == 0.0) {
    // Parallel: overlap counts as intersection at the first shared point.
    if (cross(qp, r) != 0.0) return std::nullopt;
    double rr = dot(r, r);
    if (rr == 0.0) {
      if (segment_distance(a, c, d) == 0.0) return 0.0;
      return std::nullopt;
    }
    double t0 = dot(qp, r) / rr;
    double t1 = dot(d - a, r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    if (t1 < 0.0 || t0 > 1.0) return std::nullopt;
    return std::clamp(t0, 0.0, 1.0);
  }
  double t = cross(qp, s) / denom;
  double u = cross(qp, r) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (segment_intersection_param(a, b, c, d)) return 0.0;
  return std::min(std::min(segment_distance(a, c, d), segment_distance(b, c, d)),
                  std::min(segment_distance(c, a, b), segment_distance(d, a, b)));
}

PlaneCurve PlaneCurve::open(std::vector<Point> v) {
  PlaneCurve c{std::move(v), CurveKind::open_arc};
  c.validate();
  return c;
}

PlaneCurve PlaneCurve::closed(std::vector<Point> v) {
  if (v.size() >= 2 && distance(v.front(), v.back()) == 0.0) v.pop_back();
  PlaneCurve c{std::move(v), CurveKind::closed_curve};
  c.validate();
  return c;
}

PlaneCurve PlaneCurve::circle(Point center, double radius, int n) {
  std::vector<Point> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * M_PI * i / n;
    v.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return closed(std::move(v));
}

PlaneCurve PlaneCurve::rectangle(const Box& b) {
  return closed({{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}});
}

PlaneCurve PlaneCurve::arc(Point center, double radius, double a0, double a1, int n) {
  std::vector<Point> v;
  v.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double a = a0 + (a1 - a0) * i / n;
    v.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return open(std::move(v));
}

size_t PlaneCurve::segment_count() const {
  if (vertices.size() < 2) return 0;
  return kind == CurveKind::closed_curve ? vertices.size() : vertices.size() - 1;
}

std::pair<Point, Point> PlaneCurve::segment(size_t i) const {
  size_t j = (i + 1) % vertices.size();
  return {vertices[i], vertices[j]};
}

double PlaneCurve::length() const {
  double L = 0;
  for (size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    L += distance(a, b);
  }
  return L;
}

Box PlaneCurve::bbox() const {
  Box b{vertices.front().x, vertices.front().y, vertices.front().x, vertices.front().y};
  for (const Point& p : vertices) b.include(p);
  return b;
}

PlaneCurve PlaneCurve::reversed() const {
  PlaneCurve c = *this;
  std::reverse(c.vertices.begin(), c.vertices.end());
  return c;
}

PlaneCurve PlaneCurve::refined() const {
  PlaneCurve c;
  c.kind = kind;
  for (size_t i = 0; i < vertices.size(); ++i) {
    c.vertices.push_back(vertices[i]);
    if (i + 1 < vertices.size() || kind == CurveKind::closed_curve) {
      auto [a, b] = segment(i);
      c.vertices.push_back(0.5 * (a + b));
    }
  }
  return c;
}

Point PlaneCurve::at(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  double target = t * length();
  double acc = 0;
  for (size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    double l = distance(a, b);
    if (acc + l >= target || i + 1 == segment_count()) {
      double s = l > 0 ? (target - acc) / l : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      return a + s * (b - a);
    }
    acc += l;
  }
  return vertices.back();
}

void PlaneCurve::validate() const {
  size_t minv = kind == CurveKind::closed_curve ? 3 : 2;
  if (vertices.size() < minv)
    throw Error(ErrorCode::input_error, "curve needs at least " + std::to_string(minv) + " vertices");
  for (const Point& p : vertices)
    if (!p.finite()) throw Error(ErrorCode::input_error, "non-finite curve vertex");
  for (size_t i = 0; i < segment_count(); ++i) {
    auto [a, b] = segment(i);
    if (distance(a, b) == 0.0)
      throw Error(ErrorCode::input_error, "repeated consecutive curve vertices");
  }
}

bool PlaneCurve::is_simple() const {
  if (kind != CurveKind::closed_curve) return true;
  size_t n = segment_count();
  for (size_t i = 0; i < n; ++i) {
    auto [a, b] = segment(i);
    for (size_t j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      auto [c, d] = segment(j);
      auto hit = segment_intersection_param(a, b, c, d);
      if (!hit) continue;
      if (adjacent) {
        // Sharing the common vertex is fine; anything more is not.
        Point shared = (j == i + 1) ? b : a;
        Point at = a + *hit * (b - a);
        double scale = std::max(distance(a, b), distance(c, d));
        if (distance(at, shared) > 1e-12 * std::max(1.0, scale)) return false;
        // Also reject overlapping collinear adjacency.
        if (cross(b - a, d - c) == 0.0 && dot(b - a, d - c) < 0.0) {
          if (segment_distance(j == i + 1 ? a : b, c, d) == 0.0) return false;
        }
        continue;
      }
      return false;
    }
  }
  return true;
}

double point_curve_distance(Point p, const PlaneCurve& c) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < c.segment_count(); ++i) {
    auto [a, b] = c.segment(i);
    best = std::min(best, segment_distance(p, a, b));
  }
  return best;
}

double curve_curve_distance(const PlaneCurve& a, const PlaneCurve& b) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < a.segment_count(); ++i) {
    auto [p, q] = a.segment(i);
    for (size_t j = 0; j < b.segment_count(); ++j) {
      auto [r, s] = b.segment(j);
      best = std::min(best, segment_segment_distance(p, q, r, s));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

namespace {

// Turning of z - w along the straight segment [a,b]; w off the segment.
// The direction sweeps monotonically on a straight segment, so the chord
// angle is the exact increment. Bisect per the contract until < pi/2.
double segment_turning(Point a, Point b, Point w, int depth = 0) {
  Point u = a - w;
  Point v = b - w;
  double ang = std::atan2(cross(u, v), dot(u, v));
  if (std::abs(ang) < M_PI_2 || depth > 48) return ang;
  Point m = 0.5 * (a + b);
  return segment_turning(a, m, w, depth + 1) + segment_turning(m, b, w, depth + 1);
}

}  // namespace

int winding_number(const PlaneCurve& curve, Point w, double eps_rel) {
  if (curve.kind != CurveKind::closed_curve)
    throw Error(ErrorCode::input_error, "winding number needs a closed curve");
  double eps = eps_rel * std::max(curve.diameter(), 1e-300);
  if (point_curve_distance(w, curve) <= eps)
    throw Error(ErrorCode::point_on_curve, "query point within eps_geom of curve");
  double total = 0;
  for (size_t i = 0; i < curve.segment_count(); ++i) {
    auto [a, b] = curve.segment(i);
    total += segment_turning(a, b, w);
  }
  return (int)std::lround(total / (2.0 * M_PI));
}

bool in_hull(const PlaneCurve& curve, Point p, double eps_rel) {
  if (!curve.is_simple()) throw Error(ErrorCode::not_simple, "curve self-intersects");
  double eps = eps_rel * std::max(curve.diameter(), 1e-300);
  if (point_curve_distance(p, curve) <= eps) return true;
  return winding_number(curve, p, eps_rel) != 0;
}

int degree_along_curve(const std::function<Complex(Complex)>& fn, const PlaneCurve& curve,
                       Complex w, double eps_abs, ErrorCode code) {
  if (curve.kind != CurveKind::closed_curve)
    throw Error(ErrorCode::input_error, "degree needs a closed curve");
  struct Node {
    double t;
    Complex g;  // fn(z(t)) - w
  };
  auto eval = [&](double t) {
    Complex g = fn(curve.at(t).to_complex()) - w;
    if (std::abs(g) <= eps_abs)
      throw Error(code, "map value within tolerance of the base point on the curve");
    return Node{t, g};
  };
  size_t n = std::max<size_t>(curve.segment_count(), 8);
  std::vector<Node> nodes;
  nodes.reserve(2 * n + 1);
  for (size_t i = 0; i <= n; ++i) nodes.push_back(eval((double)i / n));

  auto increment = [](const Node& a, const Node& b) {
    return std::arg(b.g / a.g);
  };

  double total = 0;
  const int max_splits_per_span = 52;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    // Refine the span [i, i+1] with a local stack until each increment < pi/2.
    std::vector<std::pair<Node, int>> stack;
    stack.push_back({nodes[i + 1], 0});
    Node cur = nodes[i];
    while (!stack.empty()) {
      auto [next, depth] = stack.back();
      double inc = increment(cur, next);
      if (std::abs(inc) < M_PI_2 || depth >= max_splits_per_span) {
        if (depth >= max_splits_per_span && std::abs(inc) >= M_PI_2)
          throw Error(code, "angle accumulation failed to converge under refinement");
        total += inc;
        cur = next;
        stack.pop_back();
      } else {
        stack.back().second = depth + 1;
        stack.push_back({eval(0.5 * (cur.t + next.t)), depth + 1});
      }
    }
  }
  return (int)std::lround(total / (2.0 * M_PI));
}

}  // namespace planedyn
