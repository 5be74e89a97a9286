#ifndef CLOAKBOUND_GEOMETRY_HPP
#define CLOAKBOUND_GEOMETRY_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace cloakbound {

enum class NodeClass { Interior, Boundary };

/// Criss-cross triangulation of a rectangle [0,width] x [0,height].
/// Immutable after construction; safe to share across threads.
struct Mesh {
  double width = 0.0;
  double height = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<NodeClass> node_class;
  std::vector<double> triangle_area;

  // Derived index lists, in ascending node order.
  std::vector<int> interior_nodes;
  std::vector<int> boundary_nodes;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_interior() const { return static_cast<int>(interior_nodes.size()); }
  int num_boundary() const { return static_cast<int>(boundary_nodes.size()); }
  double total_area() const { return width * height; }

  Eigen::Vector2d centroid(int t) const {
    const auto& tri = triangles[t];
    return (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]) / 3.0;
  }

  /// Boundary node ids ordered counter-clockwise around the rectangle,
  /// starting at (0,0). Used to parameterize boundary traces.
  std::vector<int> boundary_cycle() const;
};

/// Each cell is split along one diagonal, alternating with cell parity, which
/// avoids a preferred direction in the triangulation.
/// Requires nx, ny >= 2 (so at least one interior node) and positive extents.
Mesh build_mesh(int nx, int ny, double width, double height);

/// Axis-aligned rectangle [x0,x1] x [y0,y1] used in region specs.
struct RectRegion {
  double x0, y0, x1, y1;
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
  }
};

/// Per-triangle obstacle membership with exact area bookkeeping.
struct ObstacleMask {
  std::vector<char> member;  // one flag per triangle
  double volume_obstacle = 0.0;
  double volume_cloak = 0.0;
};

/// Marks triangles whose centroid falls in any of the given rectangles.
/// Errors if the obstacle or the cloak region ends up empty: both sets must
/// have positive volume.
ObstacleMask mark_obstacle(const Mesh& mesh, const std::vector<RectRegion>& rects);

}  // namespace cloakbound

#endif
