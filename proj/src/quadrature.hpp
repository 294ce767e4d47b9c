#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace steklov {
namespace quad {

// 3-point Gauss-Legendre on [0,1] (degree 5).
struct Gauss3 {
  std::array<double, 3> nodes;
  std::array<double, 3> weights;
};

inline const Gauss3& gauss3() {
  static const Gauss3 rule = [] {
    const double d = std::sqrt(3.0 / 5.0);
    return Gauss3{{0.5 * (1.0 - d), 0.5, 0.5 * (1.0 + d)},
                  {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
  }();
  return rule;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// Composite 3-point Gauss over [0, 2π): calls body(t, wdt) per node.
template <typename F>
void boundary_panels(int panels, F&& body) {
  const auto& g3 = gauss3();
  const double dt = 2.0 * M_PI / panels;
  for (int p = 0; p < panels; ++p) {
    const double t0 = p * dt;
    for (int q = 0; q < 3; ++q) body(t0 + g3.nodes[q] * dt, g3.weights[q] * dt);
  }
}

}  // namespace quad
}  // namespace steklov
