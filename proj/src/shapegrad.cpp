#include "steklov/shapegrad.hpp"

#include <cmath>
#include <sstream>

#include "quadrature.hpp"
#include "steklov/errors.hpp"

namespace steklov {

const char* to_string(Constraint c) {
  return c == Constraint::VOLUME ? "volume" : "perimeter";
}

namespace {

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / i;
  return v;
}

double prefactor(const EigenCluster& cluster, int h) {
  const int size = cluster.size();
  if (h < 1 || h > size) throw BadInputError("h must lie in [1, |F|]");
  const int power = cluster.norm_tag == Normalization::SOBOLEV ? h : h - 1;
  return binom(size - 1, h - 1) * std::pow(cluster.lambda_F, power);
}

// Density of the basis as tagged; callers pick the matching prefactor.
GradientDensity compute_density(const EigenCluster& cluster) {
  const AssembledPencil& pencil = *cluster.pencil;
  const DiskMesh& mesh = *pencil.mesh;
  const DiffeoMap& map = pencil.map;
  const int nf = cluster.size();
  const int nodes = static_cast<int>(mesh.boundary_edges.size()) * 3;
  const auto& g3 = quad::gauss3();

  GradientDensity d;
  d.t.resize(nodes);
  d.H.resize(nodes);
  d.w.resize(nodes);
  d.weight.resize(nodes);
  d.v.resize(nodes, nf);
  d.dvdn.resize(nodes, nf);
  d.v2_sum.resize(nodes);
  d.gradT2_sum.resize(nodes);
  d.grad2_sum.resize(nodes);
  d.g.resize(nodes);
  d.lambda_F = cluster.lambda_F;
  d.norm_tag = cluster.norm_tag;

  const double lam = cluster.lambda_F;
  int node = 0;
  for (std::size_t ei = 0; ei < mesh.boundary_edges.size(); ++ei) {
    const BoundaryEdge& e = mesh.boundary_edges[ei];
    const double dt = e.tb - e.ta;
    const auto& tri = mesh.triangles[mesh.boundary_edge_triangle[ei]];

    // constant P1 gradients on the unique adjacent triangle
    Vec2 p[3];
    for (int i = 0; i < 3; ++i) p[i] = mesh.vertices.row(tri[i]);
    const double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() -
                         (p[1] - p[0]).y() * (p[2] - p[0]).x();
    Eigen::Matrix<double, 2, 3> grads;
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = p[(i + 1) % 3];
      const Vec2& pk = p[(i + 2) % 3];
      grads.col(i) = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / area2;
    }

    for (int q = 0; q < 3; ++q, ++node) {
      const double s = g3.nodes[q];
      const double t = e.ta + s * dt;
      const Vec2 x(std::cos(t), std::sin(t));
      const BoundaryFrame frame = map.boundary_frame(t);
      const MapJet jet = map.eval(x);
      const Mat2 JinvT = jet.J.transpose().inverse();

      d.t[node] = t;
      d.H[node] = frame.curvature;
      d.w[node] = frame.weight;
      d.weight[node] = g3.weights[q] * dt * frame.weight;

      double v2 = 0.0, gT2 = 0.0, g2 = 0.0;
      for (int l = 0; l < nf; ++l) {
        const double v = (1.0 - s) * cluster.basis(e.a, l) + s * cluster.basis(e.b, l);
        Vec2 grad_u = Vec2::Zero();
        for (int i = 0; i < 3; ++i) grad_u += cluster.basis(tri[i], l) * grads.col(i);
        const Vec2 grad_v = JinvT * grad_u;
        const double dvdn = grad_v.dot(frame.normal);
        const Vec2 gradT = grad_v - dvdn * frame.normal;
        d.v(node, l) = v;
        d.dvdn(node, l) = dvdn;
        v2 += v * v;
        gT2 += gradT.squaredNorm();
        g2 += grad_v.squaredNorm();
      }
      d.v2_sum[node] = v2;
      d.gradT2_sum[node] = gT2;
      d.grad2_sum[node] = g2;
      d.g[node] = gT2 + (1.0 - lam * d.H[node] - lam * lam) * v2;
    }
  }
  return d;
}

// ∮ g (ζ·νᵀ) dσ over the density nodes; weight already carries dσ on ∂φ(Ω)
// and ζ·ν = η ρ / w there.
double density_pairing(const GradientDensity& d, const DiffeoMap& map,
                       const PerturbSpec& pert) {
  const FourierSeries eta = pert.amplitude();
  double total = 0.0;
  for (int i = 0; i < d.num_nodes(); ++i) {
    const double zn = eta.eval(d.t[i]) * map.boundary_radius(d.t[i]) / d.w[i];
    total += d.weight[i] * d.g[i] * zn;
  }
  return total;
}

}  // namespace

GradientDensity boundary_density(const EigenCluster& cluster) {
  if (cluster.norm_tag != Normalization::SOBOLEV)
    throw NormalizationMismatchError(
        "boundary_density expects a SOBOLEV-normalized cluster basis");
  return compute_density(cluster);
}

double bc_residual(const GradientDensity& density) {
  double total = 0.0;
  for (int i = 0; i < density.num_nodes(); ++i) {
    double acc = 0.0;
    for (int l = 0; l < density.v.cols(); ++l) {
      const double r = density.dvdn(i, l) - density.lambda_F * density.v(i, l);
      acc += r * r;
    }
    total += density.weight[i] * acc;
  }
  return std::sqrt(total);
}

double hadamard_derivative(const EigenCluster& cluster, int h, const PerturbSpec& pert,
                           Normalization normalization) {
  if (!cluster.gap_ok)
    throw GapViolationError("derivative formula requires a gap-certified cluster");
  const EigenCluster& cl =
      cluster.norm_tag == normalization ? cluster : renormalize(cluster, normalization);
  const GradientDensity d = compute_density(cl);
  return prefactor(cl, h) * density_pairing(d, cl.pencil->map, pert);
}

double symfun_at(const ShapeSpec& shape, const std::vector<int>& F, int h,
                 std::shared_ptr<const DiskMesh> mesh, double sep_tol) {
  const DiffeoMap map(shape);
  auto pencil = std::make_shared<AssembledPencil>(assemble(std::move(mesh), map));
  const int k = F.back() + 2;
  const SpectralResult result = solve_pencil(pencil, k);
  require_separated(result, F, sep_tol);
  std::vector<double> lam;
  lam.reserve(F.size());
  for (const int j : F) lam.push_back(result.lambdas[j - 1]);
  return elementary_symmetric(lam)[h - 1];
}

double fd_derivative(const ShapeSpec& shape, const std::vector<int>& F, int h,
                     const PerturbSpec& pert, double eps,
                     std::shared_ptr<const DiskMesh> mesh, double sep_tol) {
  const double plus = symfun_at(perturbed(shape, pert, eps), F, h, mesh, sep_tol);
  const double minus = symfun_at(perturbed(shape, pert, -eps), F, h, mesh, sep_tol);
  return (plus - minus) / (2.0 * eps);
}

CriticalityReport criticality_report(const EigenCluster& cluster, Constraint constraint) {
  const EigenCluster cl = cluster.norm_tag == Normalization::SOBOLEV
                              ? cluster
                              : renormalize(cluster, Normalization::SOBOLEV);
  const GradientDensity d = compute_density(cl);

  double gm = 0.0, mm = 0.0, gg = 0.0;
  for (int i = 0; i < d.num_nodes(); ++i) {
    const double m = constraint == Constraint::VOLUME ? 1.0 : d.H[i];
    gm += d.weight[i] * d.g[i] * m;
    mm += d.weight[i] * m * m;
    gg += d.weight[i] * d.g[i] * d.g[i];
  }
  const double C = gm / mm;

  double rr = 0.0;
  for (int i = 0; i < d.num_nodes(); ++i) {
    const double m = constraint == Constraint::VOLUME ? 1.0 : d.H[i];
    const double r = d.g[i] - C * m;
    rr += d.weight[i] * r * r;
  }

  CriticalityReport report;
  report.constraint = constraint;
  report.fitted_constant = C;
  report.residual = std::sqrt(rr / gg);
  // multiplier for Λ_{F,1}: dΛ = factor·∮g ζν dσ = factor·C·(dV or dP) when g ≡ C·m
  report.multiplier = cl.lambda_F * C;
  report.lambda_F = cl.lambda_F;
  return report;
}

namespace {

double mode_energy(const ShapeSpec& s) {
  double e = 0.0;
  for (const double a : s.cos_coeffs) e += a * a;
  for (const double b : s.sin_coeffs) e += b * b;
  return e;
}

}  // namespace

std::vector<FlowState> constrained_flow(const ShapeSpec& shape0, const FlowParams& params) {
  if (params.steps < 0) throw BadInputError("flow steps must be >= 0");
  auto mesh = std::make_shared<const DiskMesh>(build_disk_mesh(params.level));
  const int kmodes = params.max_mode > 0
                         ? params.max_mode
                         : std::max(shape0.max_mode(), 4);
  const int k = params.F.back() + 2;
  const int h = params.h;

  ShapeSpec shape = shape0;
  if (static_cast<int>(shape.cos_coeffs.size()) < kmodes) shape.cos_coeffs.resize(kmodes, 0.0);
  if (static_cast<int>(shape.sin_coeffs.size()) < kmodes) shape.sin_coeffs.resize(kmodes, 0.0);

  const double target = params.constraint == Constraint::VOLUME
                            ? volume(DiffeoMap(shape))
                            : perimeter(DiffeoMap(shape));

  std::vector<FlowState> trajectory;
  trajectory.reserve(params.steps + 1);
  double step_size = params.step_size;

  for (int step = 0; step <= params.steps; ++step) {
    const DiffeoMap map(shape);
    auto pencil = std::make_shared<AssembledPencil>(assemble(mesh, map));
    const SpectralResult result = solve_pencil(pencil, k);
    const EigenCluster cluster =
        detect_cluster(result, params.F, params.cluster_tol, params.sep_tol);
    const GradientDensity density = compute_density(cluster);
    const CriticalityReport report = criticality_report(cluster, params.constraint);

    FlowState state;
    state.step = step;
    state.shape = shape;
    state.Lambda = sym_functions(cluster)[h - 1];
    state.residual = report.residual;
    state.volume = volume(map);
    state.perimeter = perimeter(map);
    state.mode_energy = mode_energy(shape);
    trajectory.push_back(state);
    if (step == params.steps) break;

    // dΛ[η] = factor ∮ g η ρ dθ: Fourier coefficients of the L²(dθ) gradient
    // against the basis {1, cos kθ, sin kθ}, on the density nodes.
    const double factor = prefactor(cluster, h);
    const int ncoef = 1 + 2 * kmodes;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(ncoef);
    Eigen::VectorXd cons = Eigen::VectorXd::Zero(ncoef);
    for (int i = 0; i < density.num_nodes(); ++i) {
      const double t = density.t[i];
      const double rho = map.boundary_radius(t);
      const double wdt = density.weight[i] / density.w[i];  // plain dθ weight
      const double gshare = factor * density.g[i] * rho * wdt;
      // linearized constraint: dV[η] = ∮ρη dθ, dP[η] = ∮Hρη dθ
      const double cshare = params.constraint == Constraint::VOLUME
                                ? rho * wdt
                                : density.H[i] * rho * wdt;
      grad[0] += gshare;
      cons[0] += cshare;
      for (int m = 1; m <= kmodes; ++m) {
        const double c = std::cos(m * t), s = std::sin(m * t);
        grad[2 * m - 1] += gshare * c;
        grad[2 * m] += gshare * s;
        cons[2 * m - 1] += cshare * c;
        cons[2 * m] += cshare * s;
      }
    }
    // precondition 1/(1+k²), then project onto the constraint tangent
    Eigen::VectorXd dir(ncoef);
    dir[0] = grad[0];
    for (int m = 1; m <= kmodes; ++m) {
      const double p = 1.0 / (1.0 + double(m) * m);
      dir[2 * m - 1] = p * grad[2 * m - 1];
      dir[2 * m] = p * grad[2 * m];
    }
    dir -= (dir.dot(cons) / cons.squaredNorm()) * cons;

    bool moved = false;
    double trial_step = step_size;
    for (int attempt = 0; attempt < 10; ++attempt) {
      ShapeSpec trial = shape;
      trial.rho0 += trial_step * dir[0];
      for (int m = 1; m <= kmodes; ++m) {
        trial.cos_coeffs[m - 1] += trial_step * dir[2 * m - 1];
        trial.sin_coeffs[m - 1] += trial_step * dir[2 * m];
      }
      try {
        {
          const DiffeoMap probe(trial);  // admissibility before the rescale
          const double current = params.constraint == Constraint::VOLUME
                                     ? volume(probe)
                                     : perimeter(probe);
          const double c = params.constraint == Constraint::VOLUME
                               ? std::sqrt(target / current)
                               : target / current;
          trial = trial.scaled(c);
        }
        const DiffeoMap accepted(trial);  // rescaled shape must be admissible too
        shape = trial;
        moved = true;
        break;
      } catch (const NonDiffeoError&) {
        trial_step *= 0.5;
      }
    }
    if (!moved)
      throw StepFailureError("flow step left the admissible class after 10 halvings");
  }
  return trajectory;
}

}  // namespace steklov
