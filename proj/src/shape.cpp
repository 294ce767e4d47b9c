#include "steklov/shape.hpp"

#include <cmath>

namespace steklov {

double FourierSeries::eval(double theta) const {
  double v = a0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    v += cos_coeffs[k] * std::cos(double(k + 1) * theta);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    v += sin_coeffs[k] * std::sin(double(k + 1) * theta);
  return v;
}

double FourierSeries::deriv(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    const double m = double(k + 1);
    v -= cos_coeffs[k] * m * std::sin(m * theta);
  }
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    const double m = double(k + 1);
    v += sin_coeffs[k] * m * std::cos(m * theta);
  }
  return v;
}

double FourierSeries::deriv2(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    const double m = double(k + 1);
    v -= cos_coeffs[k] * m * m * std::cos(m * theta);
  }
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    const double m = double(k + 1);
    v -= sin_coeffs[k] * m * m * std::sin(m * theta);
  }
  return v;
}

ShapeSpec ShapeSpec::scaled(double c) const {
  ShapeSpec s = *this;
  s.rho0 *= c;
  for (double& a : s.cos_coeffs) a *= c;
  for (double& b : s.sin_coeffs) b *= c;
  return s;
}

ShapeSpec perturbed(const ShapeSpec& shape, const PerturbSpec& pert, double eps) {
  ShapeSpec s = shape;
  s.rho0 += eps * pert.eta0;
  if (s.cos_coeffs.size() < pert.cos_coeffs.size())
    s.cos_coeffs.resize(pert.cos_coeffs.size(), 0.0);
  if (s.sin_coeffs.size() < pert.sin_coeffs.size())
    s.sin_coeffs.resize(pert.sin_coeffs.size(), 0.0);
  for (std::size_t k = 0; k < pert.cos_coeffs.size(); ++k)
    s.cos_coeffs[k] += eps * pert.cos_coeffs[k];
  for (std::size_t k = 0; k < pert.sin_coeffs.size(); ++k)
    s.sin_coeffs[k] += eps * pert.sin_coeffs[k];
  return s;
}

}  // namespace steklov
