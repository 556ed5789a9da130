#pragma once

#include <vector>

#include "planedyn/geometry.hpp"
#include "planedyn/raster.hpp"

namespace planedyn {

// Complex polynomial helpers (coefficients c0..cd, ascending).
Complex poly_eval(const std::vector<Complex>& c, Complex z);
std::vector<Complex> poly_derivative(const std::vector<Complex>& c);
// Damped Newton for p(z) = w. Throws newton_divergence on failure.
Complex poly_newton(const std::vector<Complex>& c, Complex w, Complex z0, double tol,
                    int max_iter = 50, double damping = 0.5);

// A continuous self-map of the plane: either an exact polynomial or a
// grid-sampled vector field with bilinear interpolation over its box.
// Grid maps are restricted to their box; evaluating outside is an error.
class PlaneMap {
 public:
  static PlaneMap polynomial(std::vector<Complex> coeffs);
  static PlaneMap grid(Box box, int nx, int ny, std::vector<Complex> samples);
  // Sample fn on an (nx x ny) lattice over box.
  static PlaneMap sampled(Box box, int nx, int ny, const std::function<Complex(Complex)>& fn);

  Complex operator()(Complex z) const;
  Point operator()(Point p) const { return Point((*this)(p.to_complex())); }

  bool is_polynomial() const { return is_poly_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  int degree() const { return (int)coeffs_.size() - 1; }
  Complex derivative(Complex z) const;  // symbolic for polynomials
  const Box& domain_box() const { return box_; }

  std::function<Complex(Complex)> fn() const {
    return [m = *this](Complex z) { return m(z); };
  }
  // The displacement map z -> f(z) - z.
  std::function<Complex(Complex)> displacement() const {
    return [m = *this](Complex z) { return m(z) - z; };
  }

 private:
  bool is_poly_ = true;
  std::vector<Complex> coeffs_;
  Box box_;
  int nx_ = 0, ny_ = 0;
  std::vector<Complex> samples_;
};

}  // namespace planedyn
