#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <random>
#include <vector>

#include "steklov/mesh.hpp"
#include "steklov/shape.hpp"

namespace steklov {
namespace testing {

/// Ten admissible shapes exercised by the structural property suites.
inline std::vector<ShapeSpec> shape_corpus() {
  return {
      {1.0, {}, {}, 0.3},
      {1.5, {}, {}, 0.3},
      {1.0, {0.0, 0.15}, {}, 0.3},
      {1.0, {0.0, 0.0, 0.1}, {}, 0.3},
      {1.0, {}, {0.0, 0.1}, 0.3},
      {1.0, {0.05, 0.1}, {0.0, 0.0, 0.08}, 0.3},
      {0.9, {0.0, 0.2}, {}, 0.3},
      {1.2, {0.0, -0.12, 0.0, 0.05}, {}, 0.3},
      {1.0, {0.0, 0.1}, {0.06}, 0.25},
      {1.0, {0.0, 0.3}, {}, 0.3},
  };
}

inline ShapeSpec random_shape(std::mt19937& rng) {
  std::uniform_real_distribution<double> amp(-0.08, 0.08);
  std::uniform_real_distribution<double> base(0.9, 1.1);
  ShapeSpec s;
  s.rho0 = base(rng);
  s.cos_coeffs = {amp(rng), amp(rng), amp(rng)};
  s.sin_coeffs = {amp(rng), amp(rng), amp(rng)};
  s.blend_start = 0.3;
  return s;
}

/// Independent test oracle: standard P1 assembly (identity coefficients,
/// chordal boundary mass) on an arbitrary straight-edge mesh given by
/// explicit vertex positions. Exact element formulas, no quadrature.
inline void euclidean_assembly(const DiskMesh& mesh,
                               const Eigen::Matrix<double, Eigen::Dynamic, 2>& verts,
                               Eigen::MatrixXd& A, Eigen::MatrixXd& B) {
  const int n = static_cast<int>(verts.rows());
  A = Eigen::MatrixXd::Zero(n, n);
  B = Eigen::MatrixXd::Zero(n, n);
  for (const auto& tri : mesh.triangles) {
    Eigen::Vector2d p[3];
    for (int i = 0; i < 3; ++i) p[i] = verts.row(tri[i]);
    const double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() -
                         (p[1] - p[0]).y() * (p[2] - p[0]).x();
    const double area = 0.5 * area2;
    Eigen::Vector2d g[3];
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d& pj = p[(i + 1) % 3];
      const Eigen::Vector2d& pk = p[(i + 2) % 3];
      g[i] = Eigen::Vector2d(pj.y() - pk.y(), pk.x() - pj.x()) / area2;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        A(tri[i], tri[j]) += area * g[i].dot(g[j]) + area / 12.0 * (i == j ? 2.0 : 1.0);
  }
  for (const auto& e : mesh.boundary_edges) {
    const double len = (verts.row(e.b) - verts.row(e.a)).norm();
    B(e.a, e.a) += len / 3.0;
    B(e.b, e.b) += len / 3.0;
    B(e.a, e.b) += len / 6.0;
    B(e.b, e.a) += len / 6.0;
  }
}

}  // namespace testing
}  // namespace steklov
