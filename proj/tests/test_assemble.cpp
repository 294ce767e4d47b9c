#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <memory>
#include <random>

#include "steklov/assemble.hpp"
#include "steklov/oracle.hpp"
#include "steklov/spectrum.hpp"
#include "test_support.hpp"

using namespace steklov;

namespace {

std::shared_ptr<const DiskMesh> mesh_at(int level) {
  return std::make_shared<const DiskMesh>(build_disk_mesh(level));
}

}  // namespace

TEST_CASE("identity map reproduces the standard P1 interior matrix") {
  auto mesh = mesh_at(3);
  const AssembledPencil pencil = assemble(mesh, DiffeoMap(ShapeSpec{}));
  Eigen::MatrixXd Aref, Bref;
  testing::euclidean_assembly(*mesh, mesh->vertices, Aref, Bref);
  // exact element integrals: the degree-2 rule integrates P1 products exactly
  CHECK((Eigen::MatrixXd(pencil.A) - Aref).cwiseAbs().maxCoeff() <= 1e-12);
  // boundary mass uses the arc measure with exact weight, so the row sum is
  // the circle perimeter; the chordal oracle gives the polygon perimeter
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(pencil.size());
  CHECK(ones.dot(pencil.B * ones) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  const double n_edges = static_cast<double>(mesh->boundary_edges.size());
  const double chordal = n_edges * 2.0 * std::sin(M_PI / n_edges);
  CHECK(ones.dot(Bref * ones) == doctest::Approx(chordal).epsilon(1e-12));
  CHECK(std::abs(chordal - 2.0 * M_PI) <= 5e-3);
}

TEST_CASE("constant vector reproduces the volume through the mass term") {
  for (const ShapeSpec& s : {ShapeSpec{}, ShapeSpec{1.0, {0.0, 0.15}, {}, 0.3}}) {
    auto mesh = mesh_at(5);
    const DiffeoMap map(s);
    const AssembledPencil pencil = assemble(mesh, map);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(pencil.size());
    // gradient term vanishes on constants; remaining mass = ∫|det∇φ|
    CHECK(std::abs(ones.dot(pencil.A * ones) - volume(map)) <= 5e-3 * volume(map));
  }
}

TEST_CASE("matrices are exactly symmetric and definite") {
  auto mesh = mesh_at(3);
  const AssembledPencil pencil =
      assemble(mesh, DiffeoMap(ShapeSpec{1.0, {0.05, 0.1}, {0.0, 0.08}, 0.3}));
  CHECK((Eigen::MatrixXd(pencil.A) - Eigen::MatrixXd(pencil.A).transpose())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((Eigen::MatrixXd(pencil.B) - Eigen::MatrixXd(pencil.B).transpose())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  Eigen::SimplicialLLT<SpMat> llt(pencil.A);
  CHECK(llt.info() == Eigen::Success);

  std::mt19937 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(pencil.size());
    for (int i = 0; i < x.size(); ++i) x[i] = gauss(rng);
    CHECK(x.dot(pencil.A * x) > 0.0);
    CHECK(x.dot(pencil.B * x) >= 0.0);
  }
}

TEST_CASE("boundary mass is supported on boundary vertices with full rank there") {
  auto mesh = mesh_at(3);
  const AssembledPencil pencil = assemble(mesh, DiffeoMap(ShapeSpec{1.0, {0.1}, {}, 0.3}));
  std::vector<bool> on_boundary(pencil.size(), false);
  for (const int v : mesh->boundary_vertices) on_boundary[v] = true;

  const Eigen::MatrixXd B(pencil.B);
  for (int i = 0; i < pencil.size(); ++i) {
    if (!on_boundary[i]) {
      CHECK(B.row(i).cwiseAbs().maxCoeff() == 0.0);
      CHECK(B.col(i).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  const int m = mesh->num_boundary();
  Eigen::MatrixXd Bbb(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      Bbb(i, j) = B(mesh->boundary_vertices[i], mesh->boundary_vertices[j]);
  Eigen::LLT<Eigen::MatrixXd> llt(Bbb);
  CHECK(llt.info() == Eigen::Success);  // rank(B) = boundary vertex count
}

TEST_CASE("assembly is deterministic") {
  auto mesh = mesh_at(3);
  const DiffeoMap map(ShapeSpec{1.0, {0.0, 0.12}, {0.07}, 0.3});
  const AssembledPencil p1 = assemble(mesh, map);
  const AssembledPencil p2 = assemble(mesh, map);
  REQUIRE(p1.A.nonZeros() == p2.A.nonZeros());
  for (int i = 0; i < p1.A.nonZeros(); ++i)
    CHECK(p1.A.valuePtr()[i] == p2.A.valuePtr()[i]);
  REQUIRE(p1.B.nonZeros() == p2.B.nonZeros());
  for (int i = 0; i < p1.B.nonZeros(); ++i)
    CHECK(p1.B.valuePtr()[i] == p2.B.valuePtr()[i]);
}

TEST_CASE("affine data is integrated exactly under the identity map") {
  auto mesh = mesh_at(2);
  const AssembledPencil pencil = assemble(mesh, DiffeoMap(ShapeSpec{}));
  // nodal values of u = 1 + 2x - y and v = x + 3y
  Eigen::VectorXd u(pencil.size()), v(pencil.size());
  for (int i = 0; i < pencil.size(); ++i) {
    u[i] = 1.0 + 2.0 * mesh->vertices(i, 0) - mesh->vertices(i, 1);
    v[i] = mesh->vertices(i, 0) + 3.0 * mesh->vertices(i, 1);
  }
  // closed-form element integrals of ∇u·∇v + uv on each straight triangle
  double exact = 0.0;
  for (const auto& tri : mesh->triangles) {
    Eigen::Vector2d p[3];
    double uu[3], vv[3];
    for (int i = 0; i < 3; ++i) {
      p[i] = mesh->vertices.row(tri[i]);
      uu[i] = u[tri[i]];
      vv[i] = v[tri[i]];
    }
    const double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() -
                         (p[1] - p[0]).y() * (p[2] - p[0]).x();
    const double area = 0.5 * area2;
    exact += area * (Eigen::Vector2d(2.0, -1.0).dot(Eigen::Vector2d(1.0, 3.0)));
    double sum = 0.0, susv = 0.0;
    for (int i = 0; i < 3; ++i) susv += uu[i] * vv[i];
    sum = (uu[0] + uu[1] + uu[2]) * (vv[0] + vv[1] + vv[2]);
    exact += area / 12.0 * (susv + sum);
  }
  CHECK(std::abs(u.dot(pencil.A * v) - exact) <= 1e-12);
}

TEST_CASE("pullback eigenvalues match a directly deformed mesh") {
  const ShapeSpec s{1.0, {0.0, 0.15}, {}, 0.3};
  const DiffeoMap map(s);

  // independent route: map the vertices, assemble identity-coefficient P1
  // matrices, solve the dense pencil B x = μ A x
  auto direct_lambdas = [&](const DiskMesh& mesh) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> deformed(mesh.vertices.rows(), 2);
    for (int i = 0; i < mesh.num_vertices(); ++i)
      deformed.row(i) = map.map(mesh.vertices.row(i).transpose()).transpose();
    Eigen::MatrixXd Aref, Bref;
    testing::euclidean_assembly(mesh, deformed, Aref, Bref);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Bref, Aref);
    REQUIRE(es.info() == Eigen::Success);
    std::vector<double> lam(4);
    for (int j = 0; j < 4; ++j) lam[j] = 1.0 / es.eigenvalues()[Aref.rows() - 1 - j];
    return lam;
  };

  double prev_diff = 0.0;
  for (int L : {3, 4}) {
    auto mesh = mesh_at(L);
    auto pencil = std::make_shared<AssembledPencil>(assemble(mesh, map));
    const SpectralResult pulled = solve_pencil(pencil, 4);
    const auto direct = direct_lambdas(*mesh);
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(pulled.lambdas[j] - direct[j]) <= 1e-2 * direct[j]);
    const double diff = std::abs(pulled.lambdas[0] - direct[0]) / direct[0];
    if (L == 4) CHECK(diff < prev_diff);  // shrinks under refinement
    prev_diff = diff;
  }
}

TEST_CASE("dilation pencil matches the Bessel oracle at radius 2") {
  auto mesh = mesh_at(5);
  ShapeSpec two;
  two.rho0 = 2.0;
  auto pencil = std::make_shared<AssembledPencil>(assemble(mesh, DiffeoMap(two)));
  const SpectralResult result = solve_pencil(pencil, 1);
  const double exact = oracle::disk_eigenvalue(0, 2.0);  // I1(2)/I0(2) ≈ 0.69777
  CHECK(std::abs(result.lambdas[0] - exact) <= 2e-3 * exact);
}
