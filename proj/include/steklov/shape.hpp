#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace steklov {

/// Truncated real Fourier series a0 + Σ a_k cos kθ + Σ b_k sin kθ.
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double eval(double theta) const;
  double deriv(double theta) const;   // d/dθ
  double deriv2(double theta) const;  // d²/dθ²

  int max_mode() const {
    return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size()));
  }
};

/// Fourier description of a star-shaped boundary radius ρ(θ) together with
/// the radius s₀ where the interior blend of the induced disk map begins.
struct ShapeSpec {
  double rho0 = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double blend_start = 0.3;

  FourierSeries radius() const { return {rho0, cos_coeffs, sin_coeffs}; }
  int max_mode() const { return radius().max_mode(); }

  /// Uniformly rescaled shape cρ (all Fourier coefficients scale).
  ShapeSpec scaled(double c) const;
};

/// Boundary perturbation amplitude η(θ); same Fourier structure as a shape
/// radius but without a positivity constraint. Induces the interior field
/// ψ(x) = χ(|x|) η(θ(x)) x once paired with a map's blend profile.
struct PerturbSpec {
  double eta0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  FourierSeries amplitude() const { return {eta0, cos_coeffs, sin_coeffs}; }
};

/// Shape with radius ρ + ε·η (coefficient arrays padded to common length).
ShapeSpec perturbed(const ShapeSpec& shape, const PerturbSpec& pert, double eps);

}  // namespace steklov
