#include "steklov/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace steklov {

namespace {

struct EdgeKey {
  int lo, hi;
  bool operator<(const EdgeKey& o) const {
    return lo != o.lo ? lo < o.lo : hi < o.hi;
  }
};

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

}  // namespace

DiskMesh build_disk_mesh(int level) {
  if (level < 0) throw std::invalid_argument("refinement level must be >= 0");

  std::vector<Eigen::Vector2d> verts;
  verts.reserve(7);
  verts.emplace_back(0.0, 0.0);
  for (int j = 0; j < 6; ++j) {
    const double t = 2.0 * M_PI * j / 6.0;
    verts.emplace_back(std::cos(t), std::sin(t));
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<BoundaryEdge> bedges;
  for (int j = 0; j < 6; ++j) {
    tris.push_back({0, 1 + j, 1 + (j + 1) % 6});
    bedges.push_back({1 + j, 1 + (j + 1) % 6, 2.0 * M_PI * j / 6.0,
                      2.0 * M_PI * (j + 1) / 6.0});
  }

  for (int round = 0; round < level; ++round) {
    std::map<EdgeKey, int> mid;
    auto midpoint = [&](int a, int b) {
      const EdgeKey k = key(a, b);
      auto it = mid.find(k);
      if (it != mid.end()) return it->second;
      const int idx = static_cast<int>(verts.size());
      verts.emplace_back(0.5 * (verts[a] + verts[b]));
      mid.emplace(k, idx);
      return idx;
    };

    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& [a, b, c] : tris) {
      const int ab = midpoint(a, b);
      const int bc = midpoint(b, c);
      const int ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);

    std::vector<BoundaryEdge> nextb;
    nextb.reserve(bedges.size() * 2);
    for (const auto& e : bedges) {
      const int m = mid.at(key(e.a, e.b));
      const double tm = 0.5 * (e.ta + e.tb);
      // radial projection of the chord midpoint bisects the arc
      verts[m] = Eigen::Vector2d(std::cos(tm), std::sin(tm));
      nextb.push_back({e.a, m, e.ta, tm});
      nextb.push_back({m, e.b, tm, e.tb});
    }
    bedges = std::move(nextb);
  }

  DiskMesh mesh;
  mesh.refinement_level = level;
  mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 2);
  for (std::size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(i) = verts[i];
  mesh.triangles = std::move(tris);
  mesh.boundary_edges = std::move(bedges);
  mesh.boundary_vertices.reserve(mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) mesh.boundary_vertices.push_back(e.a);

  std::map<EdgeKey, int> owner;
  for (int ti = 0; ti < mesh.num_triangles(); ++ti) {
    const auto& [a, b, c] = mesh.triangles[ti];
    for (const EdgeKey k : {key(a, b), key(b, c), key(c, a)}) {
      auto [it, inserted] = owner.emplace(k, ti);
      if (!inserted) it->second = -1;  // interior edge, two owners
    }
  }
  mesh.boundary_edge_triangle.reserve(mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    const int ti = owner.at(key(e.a, e.b));
    if (ti < 0) throw std::logic_error("boundary edge with two adjacent triangles");
    mesh.boundary_edge_triangle.push_back(ti);
  }
  return mesh;
}

double DiskMesh::polygon_area() const {
  double area = 0.0;
  for (const auto& [a, b, c] : triangles) {
    const Eigen::Vector2d u = vertices.row(b) - vertices.row(a);
    const Eigen::Vector2d v = vertices.row(c) - vertices.row(a);
    area += 0.5 * (u.x() * v.y() - u.y() * v.x());
  }
  return area;
}

void DiskMesh::dump(std::ostream& os) const {
  char buf[128];
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g\n", vertices(i, 0), vertices(i, 1));
    os << buf;
  }
  for (const auto& [a, b, c] : triangles) {
    std::snprintf(buf, sizeof(buf), "t %d %d %d\n", a, b, c);
    os << buf;
  }
  for (const auto& e : boundary_edges) {
    std::snprintf(buf, sizeof(buf), "b %d %d %.17g %.17g\n", e.a, e.b, e.ta, e.tb);
    os << buf;
  }
}

}  // namespace steklov
