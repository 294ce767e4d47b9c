#include "steklov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quadrature.hpp"
#include "steklov/errors.hpp"

namespace steklov {

Blend::Blend(double start) : s0(start), s1(0.5 * (1.0 + start)) {
  if (!(start > 0.0) || !(start < 1.0))
    throw BadInputError("blend_start must lie in (0,1)");
}

double Blend::value(double r) const {
  if (r <= s0) return 0.0;
  if (r >= s1) return 1.0;
  const double tau = (r - s0) / (s1 - s0);
  return ((6.0 * tau - 15.0) * tau + 10.0) * tau * tau * tau;
}

double Blend::deriv(double r) const {
  if (r <= s0 || r >= s1) return 0.0;
  const double tau = (r - s0) / (s1 - s0);
  const double d = tau * tau * (1.0 - tau) * (1.0 - tau);
  return 30.0 * d / (s1 - s0);
}

DiffeoMap::DiffeoMap(ShapeSpec spec)
    : shape_(std::move(spec)), rho_(shape_.radius()), blend_(shape_.blend_start) {
  const int modes = std::max(1, shape_.max_mode());
  const int ntheta = std::max(128, 16 * modes);
  for (int j = 0; j < ntheta; ++j) {
    const double theta = 2.0 * M_PI * j / ntheta;
    const double rho = rho_.eval(theta);
    if (!(rho > 0.0)) {
      std::ostringstream ss;
      ss << "radius rho(theta) = " << rho << " <= 0 at theta = " << theta;
      throw NonDiffeoError(ss.str());
    }
  }
  // Orientation check det∇φ = g·∂R/∂r > 0, sampled densely across the blend
  // band and out to the rim. Both factors must be positive separately.
  const int nr = 96;
  for (int i = 0; i <= nr; ++i) {
    const double r = blend_.s0 + (1.0 - blend_.s0) * i / nr;
    for (int j = 0; j < ntheta; ++j) {
      const double theta = 2.0 * M_PI * j / ntheta;
      const double rho = rho_.eval(theta);
      const double chi = blend_.value(r);
      const double g = 1.0 + chi * (rho - 1.0);
      const double dRdr = g + r * blend_.deriv(r) * (rho - 1.0);
      if (!(g > 0.0) || !(dRdr > 0.0)) {
        std::ostringstream ss;
        ss << "det grad phi <= 0 at r = " << r << ", theta = " << theta
           << " (g = " << g << ", dR/dr = " << dRdr << ")";
        throw NonDiffeoError(ss.str());
      }
    }
  }
}

Vec2 DiffeoMap::map(const Vec2& x) const {
  const double r = x.norm();
  if (r <= blend_.s0) return x;
  const double theta = std::atan2(x.y(), x.x());
  const double g = 1.0 + blend_.value(r) * (rho_.eval(theta) - 1.0);
  return g * x;
}

MapJet DiffeoMap::eval(const Vec2& x) const {
  const double r = x.norm();
  if (r <= blend_.s0) return {x, Mat2::Identity(), 1.0};
  const double theta = std::atan2(x.y(), x.x());
  const double rho = rho_.eval(theta);
  const double rhop = rho_.deriv(theta);
  const double chi = blend_.value(r);
  const double chip = blend_.deriv(r);
  const double g = 1.0 + chi * (rho - 1.0);

  const Vec2 er = x / r;
  const Vec2 et(-er.y(), er.x());
  // ∇g = χ'(ρ−1) e_r + χ ρ' e_t / r
  const Vec2 dg = chip * (rho - 1.0) * er + chi * rhop / r * et;

  MapJet jet;
  jet.y = g * x;
  jet.J = g * Mat2::Identity() + x * dg.transpose();
  jet.detJ = jet.J(0, 0) * jet.J(1, 1) - jet.J(0, 1) * jet.J(1, 0);
  return jet;
}

double DiffeoMap::boundary_weight(double t) const {
  return std::hypot(rho_.eval(t), rho_.deriv(t));
}

double DiffeoMap::radial_det(double r, double theta) const {
  if (r <= blend_.s0) return 1.0;
  const double rho = rho_.eval(theta);
  const double chi = blend_.value(r);
  const double g = 1.0 + chi * (rho - 1.0);
  return g * (g + r * blend_.deriv(r) * (rho - 1.0));
}

BoundaryFrame DiffeoMap::boundary_frame(double t) const {
  const double rho = rho_.eval(t);
  const double rhop = rho_.deriv(t);
  const double rhopp = rho_.deriv2(t);
  const Vec2 u(std::cos(t), std::sin(t));
  const Vec2 q(-u.y(), u.x());

  const Vec2 cp = rhop * u + rho * q;
  const double speed = cp.norm();

  BoundaryFrame f;
  f.t = t;
  f.y = rho * u;
  f.tangent = cp / speed;
  // clockwise rotation of the CCW tangent: outward on star-shaped curves
  f.normal = Vec2(f.tangent.y(), -f.tangent.x());
  f.curvature = (rho * rho + 2.0 * rhop * rhop - rho * rhopp) / (speed * speed * speed);
  f.weight = speed;
  return f;
}

double BoundaryFrame::normal_displacement(const PerturbSpec& pert) const {
  const Vec2 u(std::cos(t), std::sin(t));
  return pert.amplitude().eval(t) * u.dot(normal);
}

Vec2 perturbation_field(const DiffeoMap& map, const PerturbSpec& pert, const Vec2& x) {
  const double r = x.norm();
  const double chi = map.blend().value(r);
  if (chi == 0.0) return Vec2::Zero();
  const double theta = std::atan2(x.y(), x.x());
  return chi * pert.amplitude().eval(theta) * x;
}

double volume(const DiffeoMap& map, int panels) {
  // ∫∫ det∇φ(r,θ) r dr dθ, radial integration split at the blend knots where
  // the integrand changes polynomial piece.
  static const quad::GaussRule gl = quad::gauss_legendre(16);
  const double knots[4] = {0.0, map.blend().s0, map.blend().s1, 1.0};
  double total = 0.0;
  quad::boundary_panels(panels, [&](double t, double wdt) {
    double radial = 0.0;
    for (int seg = 0; seg < 3; ++seg) {
      const double a = knots[seg], b = knots[seg + 1];
      const double half = 0.5 * (b - a);
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double r = a + (gl.nodes[i] + 1.0) * half;
        radial += gl.weights[i] * half * map.radial_det(r, t) * r;
      }
    }
    total += wdt * radial;
  });
  return total;
}

double volume_boundary_formula(const DiffeoMap& map, int panels) {
  double total = 0.0;
  quad::boundary_panels(panels, [&](double t, double wdt) {
    const double rho = map.boundary_radius(t);
    total += 0.5 * rho * rho * wdt;
  });
  return total;
}

double perimeter(const DiffeoMap& map, int panels) {
  double total = 0.0;
  quad::boundary_panels(panels,
                        [&](double t, double wdt) { total += map.boundary_weight(t) * wdt; });
  return total;
}

double d_volume(const DiffeoMap& map, const PerturbSpec& pert, int panels) {
  double total = 0.0;
  quad::boundary_panels(panels, [&](double t, double wdt) {
    const BoundaryFrame f = map.boundary_frame(t);
    total += f.normal_displacement(pert) * f.weight * wdt;
  });
  return total;
}

double d_perimeter(const DiffeoMap& map, const PerturbSpec& pert, int panels) {
  double total = 0.0;
  quad::boundary_panels(panels, [&](double t, double wdt) {
    const BoundaryFrame f = map.boundary_frame(t);
    total += f.curvature * f.normal_displacement(pert) * f.weight * wdt;
  });
  return total;
}

double surface_functional(const DiffeoMap& map, const ScalarField& u, int panels) {
  double total = 0.0;
  quad::boundary_panels(panels, [&](double t, double wdt) {
    const Vec2 x(std::cos(t), std::sin(t));
    total += u.value(x) * map.boundary_weight(t) * wdt;
  });
  return total;
}

double d_surface_functional(const DiffeoMap& map, const ScalarField& u,
                            const PerturbSpec& pert, int panels) {
  const FourierSeries eta = pert.amplitude();
  double total = 0.0;
  quad::boundary_panels(panels, [&](double t, double wdt) {
    const Vec2 x(std::cos(t), std::sin(t));
    const BoundaryFrame f = map.boundary_frame(t);
    const MapJet jet = map.eval(x);
    const double v = u.value(x);
    const Vec2 grad_v = jet.J.transpose().inverse() * u.gradient(x);
    const Vec2 zeta = eta.eval(t) * x;  // χ ≡ 1 on the rim
    const double zn = zeta.dot(f.normal);
    total += ((f.curvature * v + grad_v.dot(f.normal)) * zn - zeta.dot(grad_v)) *
             f.weight * wdt;
  });
  return total;
}

}  // namespace steklov
