#include "steklov/spectrum.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "steklov/errors.hpp"
#include "steklov/runtime.hpp"

namespace steklov {

const char* to_string(Normalization n) {
  return n == Normalization::SOBOLEV ? "sobolev" : "boundary";
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> u) {
  int imax = 0;
  double amax = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (u[imax] < 0.0) u = -u;
}

std::string join_values(const Eigen::VectorXd& v) {
  std::ostringstream ss;
  ss.precision(12);
  for (int i = 0; i < v.size(); ++i) ss << (i ? ", " : "") << v[i];
  return ss.str();
}

}  // namespace

SpectralResult solve_pencil(std::shared_ptr<const AssembledPencil> pencil, int k) {
  const auto& bverts = pencil->mesh->boundary_vertices;
  const int n = pencil->size();
  const int m = static_cast<int>(bverts.size());
  if (k < 1 || k > m) {
    std::ostringstream ss;
    ss << "eigenvalue count k = " << k << " must lie in [1, " << m
       << "] (finite spectrum = boundary vertex count)";
    throw BadInputError(ss.str());
  }

  Eigen::SimplicialLLT<SpMat> llt(pencil->A);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefiniteError("Cholesky factorization of A failed");

  // Boundary block of B (interior rows/columns are zero).
  std::vector<int> slot(n, -1);
  for (int j = 0; j < m; ++j) slot[bverts[j]] = j;
  Eigen::MatrixXd Bbb = Eigen::MatrixXd::Zero(m, m);
  for (int col = 0; col < pencil->B.outerSize(); ++col) {
    for (SpMat::InnerIterator it(pencil->B, col); it; ++it) {
      if (slot[it.row()] >= 0 && slot[it.col()] >= 0)
        Bbb(slot[it.row()], slot[it.col()]) = it.value();
    }
  }

  // G = P_b A⁻¹ P_bᵀ, column solves independent.
  Eigen::MatrixXd G(m, m);
  parallel_for(m, [&](int j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[bverts[j]] = 1.0;
    const Eigen::VectorXd x = llt.solve(e);
    for (int i = 0; i < m; ++i) G(i, j) = x[bverts[i]];
  });
  G = 0.5 * (G + G.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> lltB(Bbb);
  if (lltB.info() != Eigen::Success)
    throw NumericalError("BoundaryMass", "boundary mass block is not positive definite");
  const Eigen::MatrixXd L = lltB.matrixL();

  // Reduced standard problem S y = μ y, S = Lᵀ G L; the nonzero pencil
  // eigenvalues μ of B u = μ A u are exactly the eigenvalues of S.
  Eigen::MatrixXd S = L.transpose() * G * L;
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailureError("reduced symmetric eigensolver failed");

  SpectralResult result;
  result.lambdas.resize(k);
  result.vectors.resize(n, k);
  result.norm_tag = Normalization::SOBOLEV;
  result.pencil = pencil;

  for (int j = 0; j < k; ++j) {
    const double mu = es.eigenvalues()[m - 1 - j];
    if (!(mu > 0.0))
      throw ConvergenceFailureError("nonpositive reduced eigenvalue encountered");
    const Eigen::VectorXd y = es.eigenvectors().col(m - 1 - j);
    const Eigen::VectorXd z =
        L.transpose().triangularView<Eigen::Upper>().solve(y);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd bz = Bbb * z;
    for (int i = 0; i < m; ++i) rhs[bverts[i]] = bz[i];
    Eigen::VectorXd u = llt.solve(rhs) / mu;
    u /= std::sqrt(u.dot(pencil->A * u));
    fix_sign(u);
    result.lambdas[j] = 1.0 / mu;
    result.vectors.col(j) = u;
  }
  for (int j = 0; j < k; ++j) {
    const double res = pencil_residual(*pencil, result.lambdas[j],
                                       result.vectors.col(j));
    if (!(res <= 1e-8)) {
      std::ostringstream ss;
      ss << "pencil residual " << res << " for eigenvalue " << result.lambdas[j];
      throw ConvergenceFailureError(ss.str());
    }
  }
  return result;
}

double pencil_residual(const AssembledPencil& pencil, double lambda,
                       const Eigen::VectorXd& u) {
  const Eigen::VectorXd au = pencil.A * u;
  return (au - lambda * (pencil.B * u)).norm() / au.norm();
}

EigenCluster detect_cluster(const SpectralResult& result, const std::vector<int>& F,
                            double cluster_tol, double sep_tol) {
  if (F.empty()) throw BadInputError("cluster index set is empty");
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i] < 1 || F[i] > result.count())
      throw BadInputError("cluster index outside the computed range");
    if (i > 0 && F[i] != F[i - 1] + 1)
      throw BadInputError("cluster index set must be contiguous and ascending");
  }
  if (F.back() >= result.count())
    throw BadInputError(
        "need at least one computed eigenvalue above the cluster to certify the gap");

  const int lo = F.front() - 1, hi = F.back() - 1;
  Eigen::VectorXd lam = result.lambdas.segment(lo, hi - lo + 1);
  const double lambda_F = lam.mean();

  const double width = (lam.array() - lambda_F).abs().maxCoeff();
  if (width > cluster_tol * lambda_F) {
    std::ostringstream ss;
    ss << "eigenvalues {" << join_values(lam) << "} spread " << width
       << " exceeds cluster_tol * lambda_F = " << cluster_tol * lambda_F;
    throw NotAClusterError(ss.str());
  }

  double gap = std::numeric_limits<double>::infinity();
  for (int l = 0; l < result.count(); ++l) {
    if (l >= lo && l <= hi) continue;
    gap = std::min(gap, std::abs(result.lambdas[l] - lambda_F));
  }
  if (!(gap > sep_tol * lambda_F)) {
    std::ostringstream ss;
    ss << "gap " << gap << " to the nearest outside eigenvalue does not exceed "
       << "sep_tol * lambda_F = " << sep_tol * lambda_F << " (cluster {"
       << join_values(lam) << "})";
    throw GapViolationError(ss.str());
  }

  EigenCluster cluster;
  cluster.indices = F;
  cluster.lambdas = lam;
  cluster.lambda_F = lambda_F;
  cluster.norm_tag = result.norm_tag;
  cluster.gap_ok = true;
  cluster.pencil = result.pencil;

  // modified Gram-Schmidt in the A inner product
  const SpMat& A = result.pencil->A;
  Eigen::MatrixXd basis = result.vectors.middleCols(lo, hi - lo + 1);
  for (int j = 0; j < basis.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      const double proj = basis.col(i).dot(A * basis.col(j));
      basis.col(j) -= proj * basis.col(i);
    }
    basis.col(j) /= std::sqrt(basis.col(j).dot(A * basis.col(j)));
  }
  cluster.basis = basis;
  return cluster;
}

void require_separated(const SpectralResult& result, const std::vector<int>& F,
                       double sep_tol) {
  if (F.empty()) throw BadInputError("cluster index set is empty");
  for (std::size_t i = 1; i < F.size(); ++i)
    if (F[i] != F[i - 1] + 1)
      throw BadInputError("cluster index set must be contiguous and ascending");
  const int lo = F.front() - 1, hi = F.back() - 1;
  if (lo < 0 || hi + 1 >= result.count())
    throw BadInputError("separation check needs an eigenvalue above the cluster");
  const double lambda_F = result.lambdas.segment(lo, hi - lo + 1).mean();
  double gap = std::numeric_limits<double>::infinity();
  for (int l = 0; l < result.count(); ++l) {
    if (l >= lo && l <= hi) continue;
    double d = std::numeric_limits<double>::infinity();
    for (int j = lo; j <= hi; ++j) d = std::min(d, std::abs(result.lambdas[l] - result.lambdas[j]));
    gap = std::min(gap, d);
  }
  if (!(gap > sep_tol * lambda_F)) {
    std::ostringstream ss;
    ss << "cluster separation lost: gap " << gap << " <= " << sep_tol * lambda_F;
    throw ClusterBrokenError(ss.str());
  }
}

std::vector<double> elementary_symmetric(const std::vector<double>& values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  std::size_t used = 0;
  for (const double v : values) {
    ++used;
    for (std::size_t h = used; h >= 1; --h) e[h] += v * e[h - 1];
  }
  return {e.begin() + 1, e.end()};
}

std::vector<double> sym_functions(const EigenCluster& cluster) {
  std::vector<double> lam(cluster.lambdas.data(),
                          cluster.lambdas.data() + cluster.lambdas.size());
  return elementary_symmetric(lam);
}

std::vector<double> gamma_functions(const EigenCluster& cluster) {
  std::vector<double> mu(cluster.lambdas.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = 1.0 / cluster.lambdas[i];
  return elementary_symmetric(mu);
}

EigenCluster renormalize(const EigenCluster& cluster, Normalization target) {
  if (cluster.norm_tag == target) return cluster;
  const SpMat& M = target == Normalization::SOBOLEV ? cluster.pencil->A
                                                    : cluster.pencil->B;
  const Eigen::MatrixXd gram =
      cluster.basis.transpose() * (M * cluster.basis);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw DegenerateTraceError(
        "Gram matrix of the cluster basis is singular in the target product");
  EigenCluster out = cluster;
  // basis · L⁻ᵀ has identity Gram in the target product; its transpose is
  // the lower-triangular solve L X = basisᵀ.
  out.basis = llt.matrixL().solve(cluster.basis.transpose()).transpose();
  out.norm_tag = target;
  return out;
}

}  // namespace steklov
