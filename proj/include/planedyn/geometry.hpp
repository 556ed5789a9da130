#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "planedyn/errors.hpp"

namespace planedyn {

using Complex = std::complex<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point() = default;
  Point(double px, double py) : x(px), y(py) {}
  explicit Point(Complex z) : x(z.real()), y(z.imag()) {}

  Complex to_complex() const { return Complex(x, y); }
  bool finite() const;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point a);
double distance(Point a, Point b);

struct Box {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double diameter() const;
  Point center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  bool contains(Point p) const;
  Box inflated(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
  void include(Point p);
  void include(const Box& b);
};

double segment_distance(Point p, Point a, Point b);
// Smallest distance between two closed segments.
double segment_segment_distance(Point a, Point b, Point c, Point d);
// Proper or touching intersection of segments [a,b] and [c,d]; the parameter
// of the intersection along [a,b] is returned when one exists.
std::optional<double> segment_intersection_param(Point a, Point b, Point c, Point d);

enum class CurveKind { open_arc, closed_curve };

// Ordered polygonal curve. Closed curves do not repeat the first vertex; the
// closing edge is implicit.
struct PlaneCurve {
  std::vector<Point> vertices;
  CurveKind kind = CurveKind::open_arc;

  static PlaneCurve open(std::vector<Point> v);
  static PlaneCurve closed(std::vector<Point> v);
  static PlaneCurve circle(Point center, double radius, int n = 64);
  static PlaneCurve rectangle(const Box& b);
  static PlaneCurve arc(Point center, double radius, double a0, double a1, int n = 32);

  size_t segment_count() const;
  std::pair<Point, Point> segment(size_t i) const;
  Point front() const { return vertices.front(); }
  Point back() const { return vertices.back(); }
  double length() const;
  Box bbox() const;
  double diameter() const { return bbox().diameter(); }
  PlaneCurve reversed() const;
  PlaneCurve refined() const;  // insert segment midpoints
  // Point at arc-length fraction t in [0,1].
  Point at(double t) const;
  void validate() const;
  bool is_simple() const;  // closed curves: no self-intersection scan
};

double point_curve_distance(Point p, const PlaneCurve& c);
double curve_curve_distance(const PlaneCurve& a, const PlaneCurve& b);

// Degree of the identity map on a closed curve about w: total turning of
// z - w, accumulated per segment and bisected until each increment is below
// pi/2. Throws point_on_curve when w is closer than eps to the curve.
int winding_number(const PlaneCurve& curve, Point w, double eps_rel = 1e-9);

// Point-in-topological-hull test for a simple closed curve.
bool in_hull(const PlaneCurve& curve, Point p, double eps_rel = 1e-9);

// Total turning of fn along the curve about w, with adaptive parameter
// refinement (each angular increment < pi/2). fn is sampled on curve points.
// Throws `code` when |fn - w| stays below eps after max refinement.
int degree_along_curve(const std::function<Complex(Complex)>& fn, const PlaneCurve& curve,
                       Complex w, double eps_abs, ErrorCode code = ErrorCode::image_hits_basepoint);

}  // namespace planedyn
