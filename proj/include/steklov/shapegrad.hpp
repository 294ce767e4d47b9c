#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "steklov/spectrum.hpp"

namespace steklov {

/// Boundary samples of the derivative-formula integrand at the mesh boundary
/// quadrature nodes (3-point Gauss per boundary edge). Per node: eigenfunction
/// traces v_l, mapped gradients ∇v_l = (∇φ)⁻ᵀ∇u_l, tangential/normal split,
/// curvature H, surface weight w, quadrature weight (dσ on ∂φ(Ω)) and the
/// density g = Σ_l [|∇_T v_l|² + (1 − λ_F H − λ_F²) v_l²].
struct GradientDensity {
  Eigen::VectorXd t;        // boundary parameter per node
  Eigen::VectorXd H;        // curvature of ∂φ(Ω)
  Eigen::VectorXd w;        // surface weight √(ρ²+ρ′²)
  Eigen::VectorXd weight;   // quadrature weight incl. w (integrates dσ on ∂φ(Ω))
  Eigen::MatrixXd v;        // nodes × |F| traces
  Eigen::MatrixXd dvdn;     // nodes × |F| normal derivatives ∇v·ν
  Eigen::VectorXd v2_sum;   // Σ_l v_l²
  Eigen::VectorXd gradT2_sum;  // Σ_l |∇_T v_l|²
  Eigen::VectorXd grad2_sum;   // Σ_l |∇v_l|²  (split-identity diagnostic)
  Eigen::VectorXd g;        // density
  double lambda_F = 0.0;
  Normalization norm_tag = Normalization::SOBOLEV;

  int num_nodes() const { return static_cast<int>(t.size()); }
};

/// Density of the cluster's eigenbasis; the public entry point requires the
/// SOBOLEV tag (the density coefficients assume a W^{1,2}-orthonormal basis).
/// Throws NormalizationMismatchError otherwise.
GradientDensity boundary_density(const EigenCluster& cluster);

/// L²(∂φ(Ω)) residual of the natural boundary condition,
/// (Σ_l ‖∂v_l/∂ν − λ_F v_l‖²)^{1/2}; a mesh-convergence diagnostic.
double bc_residual(const GradientDensity& density);

/// Derivative of Λ_{F,h} under the boundary perturbation η:
/// factor · ∮ g (ζ·νᵀ) dσ with factor = C(|F|−1, h−1)·λ_F^h for SOBOLEV
/// and λ_F^{h−1} for BOUNDARY normalization (the basis is renormalized to
/// match). Requires a valid cluster (gap certified).
double hadamard_derivative(const EigenCluster& cluster, int h, const PerturbSpec& pert,
                           Normalization normalization = Normalization::SOBOLEV);

/// Λ_{F,h} at the shape on the given mesh (assemble + solve + gap check).
/// Throws ClusterBrokenError if F is not separated there.
double symfun_at(const ShapeSpec& shape, const std::vector<int>& F, int h,
                 std::shared_ptr<const DiskMesh> mesh, double sep_tol = kSepTol);

/// Central difference (Λ_{F,h}[φ_{+ε}] − Λ_{F,h}[φ_{−ε}])/(2ε) on one mesh.
/// Differencing targets the symmetric function, never individual eigenvalues,
/// so the quotient stays well-defined through multiplet splitting.
double fd_derivative(const ShapeSpec& shape, const std::vector<int>& F, int h,
                     const PerturbSpec& pert, double eps,
                     std::shared_ptr<const DiskMesh> mesh, double sep_tol = kSepTol);

enum class Constraint { VOLUME, PERIMETER };

const char* to_string(Constraint c);

/// Least-squares comparison of the density g against the overdetermined
/// boundary condition: g ≈ C·1 (VOLUME) or g ≈ C·H (PERIMETER) in
/// L²(∂φ(Ω)). multiplier is the Lagrange multiplier estimate dΛ_{F,1}/dV
/// (resp. dP) implied by the fit; multipliers for other h scale by the
/// derivative-formula prefactor ratio.
struct CriticalityReport {
  Constraint constraint = Constraint::VOLUME;
  double fitted_constant = 0.0;
  double residual = 0.0;  // ‖g − C·m‖ / ‖g‖
  double multiplier = 0.0;
  double lambda_F = 0.0;
};

CriticalityReport criticality_report(const EigenCluster& cluster, Constraint constraint);

struct FlowParams {
  std::vector<int> F{1};
  int h = 1;
  Constraint constraint = Constraint::VOLUME;
  int steps = 200;
  double step_size = 0.5;
  int level = 4;
  int max_mode = 0;  // 0: max(shape modes, 4)
  double cluster_tol = kClusterTol;
  double sep_tol = kSepTol;
};

struct FlowState {
  int step = 0;
  ShapeSpec shape;
  double Lambda = 0.0;
  double residual = 0.0;
  double volume = 0.0;
  double perimeter = 0.0;
  double mode_energy = 0.0;  // Σ_k (a_k² + b_k²)
};

/// Projected gradient ascent on Λ_{F,h} in the Fourier coefficients of ρ,
/// with normal velocity from the boundary density, Fourier preconditioner
/// 1/(1+k²), linearized constraint projection and an exact rescale of ρ
/// after each step. Evaluating the cluster density at nearby non-degenerate
/// shapes is a numerical heuristic. Records steps+1 states (initial state
/// included). Throws StepFailureError if a step cannot re-enter the
/// admissible class after 10 halvings.
std::vector<FlowState> constrained_flow(const ShapeSpec& shape0, const FlowParams& params);

}  // namespace steklov
