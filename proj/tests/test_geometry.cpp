#include <doctest.h>

#include <map>
#include <set>
#include <tuple>

#include "cloakbound/errors.hpp"
#include "cloakbound/geometry.hpp"

using namespace cloakbound;

TEST_CASE("criss-cross mesh counts") {
  const Mesh m = build_mesh(16, 16, 1.0, 1.0);
  CHECK(m.num_nodes() == 289);
  CHECK(m.num_triangles() == 512);
  CHECK(m.num_interior() == 225);
  CHECK(m.num_boundary() == 64);

  const Mesh small = build_mesh(2, 2, 1.0, 1.0);
  CHECK(small.num_nodes() == 9);
  CHECK(small.num_triangles() == 8);
  CHECK(small.num_interior() == 1);
}

TEST_CASE("triangle areas partition the rectangle") {
  for (const auto& [nx, ny, w, h] :
       {std::tuple{16, 16, 1.0, 1.0}, std::tuple{5, 9, 2.0, 0.5}}) {
    const Mesh m = build_mesh(nx, ny, w, h);
    double total = 0.0;
    for (double a : m.triangle_area) {
      CHECK(a > 0.0);
      total += a;
    }
    CHECK(std::abs(total - w * h) <= 1e-12 * w * h);
  }
}

TEST_CASE("node classification matches rectangle edges") {
  const Mesh m = build_mesh(7, 4, 2.0, 1.0);
  int boundary = 0;
  for (int n = 0; n < m.num_nodes(); ++n) {
    const auto& p = m.nodes[n];
    const bool on_edge = p.x() == 0.0 || p.x() == 2.0 || p.y() == 0.0 || p.y() == 1.0;
    CHECK((m.node_class[n] == NodeClass::Boundary) == on_edge);
    if (on_edge) ++boundary;
  }
  CHECK(boundary == m.num_boundary());
  CHECK(m.num_boundary() + m.num_interior() == m.num_nodes());
}

TEST_CASE("mesh is conforming: shared edges appear twice with the same nodes") {
  const Mesh m = build_mesh(6, 6, 1.0, 1.0);
  // count each undirected edge; interior edges must appear exactly twice
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edges[{a, b}] += 1;
    }
  }
  for (const auto& [edge, count] : edges) {
    CHECK(count <= 2);
    if (count == 1) {
      // boundary edge: both endpoints on the boundary
      CHECK(m.node_class[edge.first] == NodeClass::Boundary);
      CHECK(m.node_class[edge.second] == NodeClass::Boundary);
    }
  }
}

TEST_CASE("mesh rejects degenerate input") {
  CHECK_THROWS_AS(build_mesh(1, 4, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_mesh(4, 1, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_mesh(4, 4, 0.0, 1.0), ConfigError);
}

TEST_CASE("obstacle volumes: centered square") {
  const Mesh m = build_mesh(16, 16, 1.0, 1.0);
  const ObstacleMask mask = mark_obstacle(m, {{0.25, 0.25, 0.75, 0.75}});
  CHECK(mask.volume_obstacle == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mask.volume_cloak == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(mask.volume_obstacle + mask.volume_cloak ==
        doctest::Approx(m.total_area()).epsilon(1e-12));
}

TEST_CASE("obstacle may have several components") {
  const Mesh m = build_mesh(16, 16, 1.0, 1.0);
  const ObstacleMask mask =
      mark_obstacle(m, {{0.0, 0.0, 0.25, 0.25}, {0.75, 0.75, 1.0, 1.0}});
  CHECK(mask.volume_obstacle == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("degenerate obstacle specs are rejected") {
  const Mesh m = build_mesh(8, 8, 1.0, 1.0);
  CHECK_THROWS_AS(mark_obstacle(m, {{0.0, 0.0, 1.0, 1.0}}), ConfigError);  // empty cloak
  CHECK_THROWS_AS(mark_obstacle(m, {{2.0, 2.0, 3.0, 3.0}}), ConfigError);  // empty obstacle
  CHECK_THROWS_AS(mark_obstacle(m, {}), ConfigError);
}

TEST_CASE("refinement keeps aligned obstacle volumes") {
  const std::vector<RectRegion> rects = {{0.25, 0.25, 0.75, 0.75}};
  const ObstacleMask coarse = mark_obstacle(build_mesh(8, 8, 1.0, 1.0), rects);
  const ObstacleMask fine = mark_obstacle(build_mesh(16, 16, 1.0, 1.0), rects);
  CHECK(coarse.volume_obstacle == doctest::Approx(fine.volume_obstacle).epsilon(1e-12));
}

TEST_CASE("boundary cycle walks every boundary node once") {
  const Mesh m = build_mesh(5, 3, 1.0, 1.0);
  const auto cycle = m.boundary_cycle();
  CHECK(static_cast<int>(cycle.size()) == m.num_boundary());
  std::set<int> seen(cycle.begin(), cycle.end());
  CHECK(static_cast<int>(seen.size()) == m.num_boundary());
  for (int n : cycle) CHECK(m.node_class[n] == NodeClass::Boundary);
}
