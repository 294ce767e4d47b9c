#include "steklov/assemble.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <sstream>
#include <vector>

#include "quadrature.hpp"
#include "steklov/errors.hpp"

namespace steklov {

AssembledPencil assemble(std::shared_ptr<const DiskMesh> mesh, const DiffeoMap& map) {
  const int n = mesh->num_vertices();
  std::vector<Eigen::Triplet<double>> ta;
  std::vector<Eigen::Triplet<double>> tb;
  ta.reserve(mesh->num_triangles() * 9);
  tb.reserve(mesh->boundary_edges.size() * 4);

  for (const auto& tri : mesh->triangles) {
    Vec2 p[3];
    for (int i = 0; i < 3; ++i) p[i] = mesh->vertices.row(tri[i]);
    const double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() -
                         (p[1] - p[0]).y() * (p[2] - p[0]).x();
    const double area = 0.5 * area2;
    // ∇λ_i for P1 barycentric functions
    Vec2 grad[3];
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = p[(i + 1) % 3];
      const Vec2& pk = p[(i + 2) % 3];
      grad[i] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / area2;
    }
    // degree-2 rule: edge midpoints, weight area/3; P1 values 1/2,1/2,0
    const Vec2 qp[3] = {0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]), 0.5 * (p[2] + p[0])};
    const double phi[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};

    double local[3][3] = {};
    for (int q = 0; q < 3; ++q) {
      const MapJet jet = map.eval(qp[q]);
      if (!(jet.detJ > 0.0)) {
        std::ostringstream ss;
        ss << "det grad phi = " << jet.detJ << " at quadrature node (" << qp[q].x()
           << ", " << qp[q].y() << ")";
        throw NonDiffeoError(ss.str());
      }
      const Mat2 Jinv = jet.J.inverse();
      const Mat2 M = Jinv * Jinv.transpose() * jet.detJ;
      const double wq = area / 3.0;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          local[i][j] += wq * (grad[i].dot(M * grad[j]) +
                               jet.detJ * phi[i][q] * phi[j][q]);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        ta.emplace_back(tri[i], tri[j], local[i][j]);
        if (i != j) ta.emplace_back(tri[j], tri[i], local[i][j]);
      }
  }

  const auto& g3 = quad::gauss3();
  for (const auto& e : mesh->boundary_edges) {
    const double dt = e.tb - e.ta;
    double local[2][2] = {};
    for (int q = 0; q < 3; ++q) {
      const double s = g3.nodes[q];
      const double w = map.boundary_weight(e.ta + s * dt);
      const double c = g3.weights[q] * dt * w;
      local[0][0] += c * (1.0 - s) * (1.0 - s);
      local[0][1] += c * (1.0 - s) * s;
      local[1][1] += c * s * s;
    }
    tb.emplace_back(e.a, e.a, local[0][0]);
    tb.emplace_back(e.a, e.b, local[0][1]);
    tb.emplace_back(e.b, e.a, local[0][1]);
    tb.emplace_back(e.b, e.b, local[1][1]);
  }

  AssembledPencil pencil{SpMat(n, n), SpMat(n, n), std::move(mesh), map};
  pencil.A.setFromTriplets(ta.begin(), ta.end());
  pencil.B.setFromTriplets(tb.begin(), tb.end());
  pencil.A.makeCompressed();
  pencil.B.makeCompressed();
  return pencil;
}

}  // namespace steklov
