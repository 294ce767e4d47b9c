#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "steklov/geometry.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

using SpMat = Eigen::SparseMatrix<double>;

/// Symmetric matrix pair discretizing the pulled-back forms on the reference
/// disk: A for ∫(∇u (∇φ)⁻¹(∇φ)⁻ᵀ ∇vᵀ + uv)|det∇φ| dx (positive definite),
/// B for the boundary mass with weight w = |ν(∇φ)⁻¹||det∇φ| (positive
/// semidefinite, interior rows and columns zero). Carries its mesh and map.
struct AssembledPencil {
  SpMat A;
  SpMat B;
  std::shared_ptr<const DiskMesh> mesh;
  DiffeoMap map;

  int size() const { return static_cast<int>(A.rows()); }
};

/// P1 assembly: 3-point (degree-2) interior rule per triangle, 3-point Gauss
/// per boundary edge with w evaluated at quadrature nodes on the analytic
/// curve. Deterministic; A is exactly symmetric by construction.
AssembledPencil assemble(std::shared_ptr<const DiskMesh> mesh, const DiffeoMap& map);

}  // namespace steklov
