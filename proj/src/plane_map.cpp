#include "planedyn/plane_map.hpp"

#include <cmath>

namespace planedyn {

Complex poly_eval(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

std::vector<Complex> poly_derivative(const std::vector<Complex>& c) {
  std::vector<Complex> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back((double)i * c[i]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

Complex poly_newton(const std::vector<Complex>& c, Complex w, Complex z0, double tol,
                    int max_iter, double damping) {
  std::vector<Complex> d = poly_derivative(c);
  Complex z = z0;
  double r0 = std::abs(poly_eval(c, z) - w);
  for (int it = 0; it < max_iter; ++it) {
    Complex r = poly_eval(c, z) - w;
    if (std::abs(r) <= tol) return z;
    Complex dp = poly_eval(d, z);
    if (std::abs(dp) < 1e-300)
      throw Error(ErrorCode::newton_divergence, "vanishing derivative in Newton step");
    Complex step = r / dp;
    // Damp until the residual decreases.
    double lambda = 1.0;
    for (int k = 0; k < 20; ++k) {
      Complex zn = z - lambda * step;
      if (std::abs(poly_eval(c, zn) - w) < std::abs(r)) {
        z = zn;
        break;
      }
      lambda *= damping;
      if (k == 19) z = z - lambda * step;
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::newton_divergence, "Newton iterate left the finite plane");
  }
  double r = std::abs(poly_eval(c, z) - w);
  if (r <= std::max(tol, 1e-12 * (1 + r0))) return z;
  throw Error(ErrorCode::newton_divergence, "Newton failed to reach tolerance");
}

PlaneMap PlaneMap::polynomial(std::vector<Complex> coeffs) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  for (Complex c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::input_error, "non-finite polynomial coefficient");
  PlaneMap m;
  m.is_poly_ = true;
  m.coeffs_ = std::move(coeffs);
  return m;
}

PlaneMap PlaneMap::grid(Box box, int nx, int ny, std::vector<Complex> samples) {
  if (nx < 2 || ny < 2 || (size_t)nx * ny != samples.size())
    throw Error(ErrorCode::input_error, "grid map needs nx*ny samples with nx,ny >= 2");
  for (Complex c : samples)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::input_error, "non-finite grid sample");
  PlaneMap m;
  m.is_poly_ = false;
  m.box_ = box;
  m.nx_ = nx;
  m.ny_ = ny;
  m.samples_ = std::move(samples);
  return m;
}

PlaneMap PlaneMap::sampled(Box box, int nx, int ny, const std::function<Complex(Complex)>& fn) {
  std::vector<Complex> s;
  s.reserve((size_t)nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x = box.x0 + box.width() * i / (nx - 1);
      double y = box.y0 + box.height() * j / (ny - 1);
      s.push_back(fn(Complex(x, y)));
    }
  return grid(box, nx, ny, std::move(s));
}

Complex PlaneMap::operator()(Complex z) const {
  if (is_poly_) return poly_eval(coeffs_, z);
  double fx = (z.real() - box_.x0) / box_.width() * (nx_ - 1);
  double fy = (z.imag() - box_.y0) / box_.height() * (ny_ - 1);
  const double slack = 1e-9;
  if (fx < -slack || fy < -slack || fx > nx_ - 1 + slack || fy > ny_ - 1 + slack)
    throw Error(ErrorCode::eval_outside_grid, "grid map evaluated outside its box");
  fx = std::clamp(fx, 0.0, (double)(nx_ - 1));
  fy = std::clamp(fy, 0.0, (double)(ny_ - 1));
  int i = std::min((int)fx, nx_ - 2);
  int j = std::min((int)fy, ny_ - 2);
  double u = fx - i, v = fy - j;
  Complex s00 = samples_[(size_t)j * nx_ + i];
  Complex s10 = samples_[(size_t)j * nx_ + i + 1];
  Complex s01 = samples_[(size_t)(j + 1) * nx_ + i];
  Complex s11 = samples_[(size_t)(j + 1) * nx_ + i + 1];
  return (1 - u) * (1 - v) * s00 + u * (1 - v) * s10 + (1 - u) * v * s01 + u * v * s11;
}

Complex PlaneMap::derivative(Complex z) const {
  if (is_poly_) return poly_eval(poly_derivative(coeffs_), z);
  double h = std::max(box_.width(), box_.height()) / std::max(nx_, ny_) * 0.25;
  return ((*this)(z + h) - (*this)(z - h)) / (2 * h);
}

}  // namespace planedyn
