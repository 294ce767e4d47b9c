#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <vector>

namespace steklov {

/// Boundary edge (a→b counterclockwise) with arc parameters on the unit
/// circle; tb > ta always (the wrap edge has tb > 2π).
struct BoundaryEdge {
  int a;
  int b;
  double ta;
  double tb;
};

/// Conforming P1 triangulation of the reference unit disk: hexagon fan at
/// level 0, uniform midpoint refinement with radial projection of boundary
/// midpoints. Counts at level L: 3·4^L + 3·2^L + 1 vertices, 6·4^L triangles,
/// 6·2^L boundary edges.
struct DiskMesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;   // single closed cycle, in order
  std::vector<int> boundary_vertices;         // cycle order, starts at t = 0
  std::vector<int> boundary_edge_triangle;    // adjacent triangle per edge
  int refinement_level = 0;

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_boundary() const { return static_cast<int>(boundary_vertices.size()); }

  double polygon_area() const;

  /// ASCII dump: "v x y" / "t i j k" / "b i j t_i t_j" (0-based indices).
  void dump(std::ostream& os) const;
};

DiskMesh build_disk_mesh(int level);

}  // namespace steklov
