#pragma once

#include <Eigen/Dense>
#include <functional>

#include "steklov/shape.hpp"

namespace steklov {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Quintic smoothstep profile: 0 on [0, s0], 1 on [s1, ∞), C² monotone
/// between, with s1 = (1+s0)/2.
struct Blend {
  double s0 = 0.3;
  double s1 = 0.65;

  explicit Blend(double start);
  double value(double r) const;
  double deriv(double r) const;
};

/// Value, Jacobian and Jacobian determinant of the disk map at one point.
struct MapJet {
  Vec2 y;
  Mat2 J;
  double detJ;
};

class DiffeoMap;

/// Geometry of ∂φ(Ω) at one boundary parameter t: point, unit tangent,
/// outward unit normal, signed curvature (outward convention, +1 on the unit
/// circle) and the surface weight w = |ν(∇φ)⁻¹|·|det∇φ| = √(ρ²+ρ′²) relating
/// the reference arc measure dt to dσ on the image boundary.
struct BoundaryFrame {
  double t;
  Vec2 y;
  Vec2 tangent;
  Vec2 normal;
  double curvature;
  double weight;

  /// ζ·νᵀ at this point for the field induced by η: η(t)·(x(t)·ν).
  double normal_displacement(const PerturbSpec& pert) const;
};

/// C² blended radial diffeomorphism of the closed unit disk,
/// φ(x) = x + χ(|x|)(ρ(θ(x)) − 1)x. Identity for |x| ≤ s₀, pure radial
/// scaling ρ(θ)x for |x| ≥ (1+s₀)/2. Construction validates ρ > 0 on a
/// sample grid of at least 16 points per Fourier mode and det∇φ > 0 at a
/// dense polar grid of quadrature points; throws NonDiffeoError otherwise.
class DiffeoMap {
public:
  explicit DiffeoMap(ShapeSpec spec);

  const ShapeSpec& shape() const { return shape_; }
  const Blend& blend() const { return blend_; }

  Vec2 map(const Vec2& x) const;
  MapJet eval(const Vec2& x) const;

  double boundary_radius(double t) const { return rho_.eval(t); }
  double boundary_weight(double t) const;
  BoundaryFrame boundary_frame(double t) const;

  /// det∇φ written in polar form, (R/r)·∂R/∂r with R(r,θ) = r·g(r,θ).
  double radial_det(double r, double theta) const;

private:
  ShapeSpec shape_;
  FourierSeries rho_;
  Blend blend_;
};

/// Interior perturbation field ψ(x) = χ(|x|) η(θ(x)) x using the map's blend.
Vec2 perturbation_field(const DiffeoMap& map, const PerturbSpec& pert, const Vec2& x);

// Quadrature resolution for the mesh-free boundary/area functionals below:
// composite 3-point Gauss panels in θ, piecewise Gauss in r split at the
// blend knots.
inline constexpr int kDefaultBoundaryPanels = 1024;

double volume(const DiffeoMap& map, int panels = kDefaultBoundaryPanels);
double volume_boundary_formula(const DiffeoMap& map, int panels = kDefaultBoundaryPanels);
double perimeter(const DiffeoMap& map, int panels = kDefaultBoundaryPanels);

double d_volume(const DiffeoMap& map, const PerturbSpec& pert,
                int panels = kDefaultBoundaryPanels);
double d_perimeter(const DiffeoMap& map, const PerturbSpec& pert,
                   int panels = kDefaultBoundaryPanels);

/// Caller-supplied C² scalar field on a neighborhood of the closed disk.
struct ScalarField {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
};

/// B[φ] = ∫_{∂Ω} u·w dσ (u sampled on the reference boundary).
double surface_functional(const DiffeoMap& map, const ScalarField& u,
                          int panels = kDefaultBoundaryPanels);

/// dB(φ)[ψ] = ∮(Hv + ∂v/∂ν)(ζ·νᵀ)dσ − ∮ ζ·∇vᵀ dσ over ∂φ(Ω),
/// with v = u∘φ⁻¹, ∇v = (∇φ)⁻ᵀ∇u.
double d_surface_functional(const DiffeoMap& map, const ScalarField& u,
                            const PerturbSpec& pert,
                            int panels = kDefaultBoundaryPanels);

}  // namespace steklov
