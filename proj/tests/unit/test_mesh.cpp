// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <set>

#include <catch_amalgamated.hpp>

#include "esmor/mesh.hpp"

using namespace esmor;

TEST_CASE("Neumann 2x2 unit square", "[mesh]")
{
  const Mesh m = BuildMesh({0, 0, 1, 1}, 0.5, BoundaryKind::Neumann);
  CHECK(m.nx == 2);
  CHECK(m.ny == 2);
  CHECK(m.NumTriangles() == 8);
  CHECK(m.interior_edges.size() == 8);
  CHECK(m.boundary_edges.size() == 8);
  CHECK_NOTHROW(ValidateMesh(m));
}

TEST_CASE("Periodic 2x2 unit square merges opposite sides", "[mesh]")
{
  const Mesh m = BuildMesh({0, 0, 1, 1}, 0.5, BoundaryKind::Periodic);
  CHECK(m.NumTriangles() == 8);
  CHECK(m.boundary_edges.empty());
  // 8 triangles with 3 edges each, every edge shared by two: 12 distinct edges.
  CHECK(m.interior_edges.size() == 12);
  CHECK_NOTHROW(ValidateMesh(m));

  // Euler characteristic of the torus: V - E + F = 0 with V = nx * ny identified vertices.
  CHECK(static_cast<long>(m.nx * m.ny) - static_cast<long>(m.interior_edges.size()) +
            static_cast<long>(m.NumTriangles()) ==
        0);

  for (const auto &e : m.interior_edges)
  {
    CHECK(e.left != e.right);
    CHECK(std::abs(e.normal.norm() - 1.0) < 1e-15);
  }
}

TEST_CASE("Grid dimensions round to the nearest division", "[mesh]")
{
  const Mesh m = BuildMesh({0, 0, 1, 1}, 0.015, BoundaryKind::Neumann);
  CHECK(m.nx == 67);
  CHECK(m.ny == 67);
  CHECK(m.NumTriangles() == 8978);
  CHECK(m.hx == Catch::Approx(1.0 / 67));
  CHECK_NOTHROW(ValidateMesh(m));

  const double L = 2 * std::numbers::pi;
  const Mesh p = BuildMesh({0, 0, L, L}, 0.015, BoundaryKind::Periodic);
  CHECK(p.nx == static_cast<Index>(std::round(L / 0.015)));
}

TEST_CASE("Mesh invariants on a rectangle", "[mesh]")
{
  for (auto bc : {BoundaryKind::Neumann, BoundaryKind::Periodic})
  {
    const Mesh m = BuildMesh({-1, 0.5, 2, 2.5}, 0.25, bc);
    CHECK(m.nx == 12);
    CHECK(m.ny == 8);
    double area = 0.0;
    for (Index t = 0; t < m.NumTriangles(); ++t)
    {
      CHECK(m.SignedArea(t) > 0.0);
      area += m.SignedArea(t);
    }
    CHECK(std::abs(area - 6.0) < 1e-12 * 6.0);

    // Each triangle appears in exactly three edges.
    std::vector<int> owners(m.NumTriangles(), 0);
    for (const auto &e : m.interior_edges)
    {
      ++owners[e.left];
      ++owners[e.right];
      // The normal points from left into right: the right centroid lies on the positive side
      // once the periodic shift is undone.
      const auto cl = (m.vertices[m.triangles[e.left][0]] + m.vertices[m.triangles[e.left][1]] +
                       m.vertices[m.triangles[e.left][2]]) /
                      3.0;
      const auto cr =
          (m.vertices[m.triangles[e.right][0]] + m.vertices[m.triangles[e.right][1]] +
           m.vertices[m.triangles[e.right][2]]) /
              3.0 -
          e.shift;
      CHECK((cr - cl).dot(e.normal) > 0.0);
    }
    for (const auto &b : m.boundary_edges)
    {
      ++owners[b.triangle];
    }
    for (int c : owners)
    {
      CHECK(c == 3);
    }
    if (bc == BoundaryKind::Neumann)
    {
      CHECK(m.boundary_edges.size() == static_cast<std::size_t>(2 * (m.nx + m.ny)));
    }
  }
}

TEST_CASE("Mesh input validation", "[mesh]")
{
  CHECK_THROWS_AS(BuildMesh({0, 0, 1, 1}, 2.0, BoundaryKind::Neumann), InvalidArgument);
  CHECK_THROWS_AS(BuildMesh({0, 0, 1, 1}, -0.1, BoundaryKind::Neumann), InvalidArgument);
  CHECK_THROWS_AS(BuildMesh({0, 0, 0, 1}, 0.1, BoundaryKind::Neumann), InvalidArgument);
}
