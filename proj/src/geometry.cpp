#include "cloakbound/geometry.hpp"

#include <cmath>

#include "cloakbound/errors.hpp"

namespace cloakbound {

Mesh build_mesh(int nx, int ny, double width, double height) {
  if (nx < 2 || ny < 2)
    throw ConfigError("build_mesh: nx and ny must be >= 2 (no interior node otherwise)");
  if (width <= 0.0 || height <= 0.0)
    throw ConfigError("build_mesh: width and height must be positive");

  Mesh m;
  m.width = width;
  m.height = height;
  m.nx = nx;
  m.ny = ny;

  const int nnx = nx + 1;
  m.nodes.reserve(static_cast<size_t>(nnx) * (ny + 1));
  m.node_class.reserve(m.nodes.capacity());
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.nodes.emplace_back(width * i / nx, height * j / ny);
      const bool on_edge = (i == 0 || i == nx || j == 0 || j == ny);
      m.node_class.push_back(on_edge ? NodeClass::Boundary : NodeClass::Interior);
    }
  }

  auto nid = [nnx](int i, int j) { return j * nnx + i; };
  m.triangles.reserve(2 * static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = nid(i, j), b = nid(i + 1, j), c = nid(i + 1, j + 1), d = nid(i, j + 1);
      if ((i + j) % 2 == 0) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      }
    }
  }

  m.triangle_area.reserve(m.triangles.size());
  for (const auto& t : m.triangles) {
    const Eigen::Vector2d e1 = m.nodes[t[1]] - m.nodes[t[0]];
    const Eigen::Vector2d e2 = m.nodes[t[2]] - m.nodes[t[0]];
    const double area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    if (area <= 0.0) throw NumericalError("build_mesh: non-positive triangle area");
    m.triangle_area.push_back(area);
  }

  for (int n = 0; n < m.num_nodes(); ++n) {
    (m.node_class[n] == NodeClass::Interior ? m.interior_nodes : m.boundary_nodes)
        .push_back(n);
  }
  return m;
}

std::vector<int> Mesh::boundary_cycle() const {
  std::vector<int> cycle;
  cycle.reserve(2 * (nx + ny));
  auto nid = [this](int i, int j) { return j * (nx + 1) + i; };
  for (int i = 0; i < nx; ++i) cycle.push_back(nid(i, 0));
  for (int j = 0; j < ny; ++j) cycle.push_back(nid(nx, j));
  for (int i = nx; i > 0; --i) cycle.push_back(nid(i, ny));
  for (int j = ny; j > 0; --j) cycle.push_back(nid(0, j));
  return cycle;
}

ObstacleMask mark_obstacle(const Mesh& mesh, const std::vector<RectRegion>& rects) {
  if (rects.empty()) throw ConfigError("mark_obstacle: empty region spec");
  for (const auto& r : rects) {
    if (r.x1 <= r.x0 || r.y1 <= r.y0)
      throw ConfigError("mark_obstacle: degenerate rectangle in region spec");
  }

  ObstacleMask mask;
  mask.member.resize(mesh.num_triangles(), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector2d c = mesh.centroid(t);
    for (const auto& r : rects) {
      if (r.contains(c)) {
        mask.member[t] = 1;
        break;
      }
    }
    (mask.member[t] ? mask.volume_obstacle : mask.volume_cloak) += mesh.triangle_area[t];
  }

  if (mask.volume_obstacle <= 0.0)
    throw ConfigError("mark_obstacle: obstacle region has zero volume");
  if (mask.volume_cloak <= 0.0)
    throw ConfigError("mark_obstacle: cloak region has zero volume (obstacle covers the domain)");
  return mask;
}

}  // namespace cloakbound
