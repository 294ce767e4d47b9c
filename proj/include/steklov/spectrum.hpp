#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "steklov/assemble.hpp"

namespace steklov {

enum class Normalization { SOBOLEV, BOUNDARY };

const char* to_string(Normalization n);

/// Smallest Steklov-type eigenvalues of the pencil, ascending, with
/// SOBOLEV-normalized eigenvectors (uᵀA u = 1) and a deterministic sign fix.
struct SpectralResult {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd vectors;  // n × k, column j pairs with lambdas[j]
  Normalization norm_tag = Normalization::SOBOLEV;
  std::shared_ptr<const AssembledPencil> pencil;

  int count() const { return static_cast<int>(lambdas.size()); }
};

/// Contiguous eigenvalue cluster F with its common value λ_F (mean over F),
/// individual eigenvalues, and an orthonormal basis in the tagged product.
struct EigenCluster {
  std::vector<int> indices;  // 1-based eigenvalue indices, contiguous
  Eigen::VectorXd lambdas;   // individual λ_j, j ∈ F
  double lambda_F = 0.0;
  Eigen::MatrixXd basis;     // n × |F|
  Normalization norm_tag = Normalization::SOBOLEV;
  bool gap_ok = false;
  std::shared_ptr<const AssembledPencil> pencil;

  int size() const { return static_cast<int>(indices.size()); }
};

inline constexpr double kClusterTol = 1e-4;  // relative width of a multiplet
inline constexpr double kSepTol = 1e-2;      // relative gap to the rest

/// Solve B u = μ A u for the k largest μ via Cholesky reduction of A and a
/// dense solve of the boundary-reduced problem; returns λ_j = 1/μ_j ascending.
/// k must not exceed the number of boundary vertices (the finite part of the
/// spectrum). Throws NotPositiveDefiniteError / ConvergenceFailureError.
SpectralResult solve_pencil(std::shared_ptr<const AssembledPencil> pencil, int k);

/// Relative pencil residual ‖A u − λ B u‖ / ‖A u‖.
double pencil_residual(const AssembledPencil& pencil, double lambda,
                       const Eigen::VectorXd& u);

/// Validate the width and gap conditions for F and return the cluster with
/// the basis re-orthonormalized (modified Gram–Schmidt in the A product).
/// Requires max(F) < result.count() so the upper gap can be certified.
/// Throws NotAClusterError / GapViolationError with the offending values.
EigenCluster detect_cluster(const SpectralResult& result, const std::vector<int>& F,
                            double cluster_tol = kClusterTol, double sep_tol = kSepTol);

/// Gap-only check (separation of F from the rest of the computed spectrum);
/// used by finite-difference paths where a perturbation may split the
/// multiplet without leaving the separated class. Throws ClusterBrokenError.
void require_separated(const SpectralResult& result, const std::vector<int>& F,
                       double sep_tol = kSepTol);

/// Elementary symmetric functions e_h of the given values, h = 1..size,
/// by the stable recurrence.
std::vector<double> elementary_symmetric(const std::vector<double>& values);

/// Λ_{F,h} for h = 1..|F| from the cluster's individual eigenvalues.
std::vector<double> sym_functions(const EigenCluster& cluster);

/// Γ_{F,h} for h = 1..|F| from μ_j = 1/λ_j (Γ_{F,0} = 1 by convention).
std::vector<double> gamma_functions(const EigenCluster& cluster);

/// Re-orthonormalize the basis in the requested inner product (A for
/// SOBOLEV, B for BOUNDARY) and retag. Throws DegenerateTraceError if the
/// B-Gram matrix of the basis is singular.
EigenCluster renormalize(const EigenCluster& cluster, Normalization target);

}  // namespace steklov
