// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/mesh.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace esmor
{

double Mesh::SignedArea(Index t) const
{
  const auto &tri = triangles[t];
  const Point a = vertices[tri[1]] - vertices[tri[0]];
  const Point b = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

Mesh BuildMesh(const Rectangle &domain, double h, BoundaryKind bc)
{
  if (!(domain.Width() > 0.0) || !(domain.Height() > 0.0))
  {
    throw InvalidArgument("domain side lengths must be positive");
  }
  if (!(h > 0.0))
  {
    throw InvalidArgument("mesh spacing must be positive");
  }
  if (h > domain.Width() || h > domain.Height())
  {
    throw InvalidArgument("mesh spacing exceeds a domain side length");
  }

  Mesh mesh;
  mesh.domain = domain;
  mesh.bc = bc;
  mesh.nx = std::max<Index>(1, std::llround(domain.Width() / h));
  mesh.ny = std::max<Index>(1, std::llround(domain.Height() / h));
  mesh.hx = domain.Width() / static_cast<double>(mesh.nx);
  mesh.hy = domain.Height() / static_cast<double>(mesh.ny);

  const Index nx = mesh.nx, ny = mesh.ny;
  auto vid = [nx](Index i, Index j) { return j * (nx + 1) + i; };
  auto lower = [nx](Index i, Index j) { return 2 * (j * nx + i); };
  auto upper = [nx](Index i, Index j) { return 2 * (j * nx + i) + 1; };

  mesh.vertices.reserve((nx + 1) * (ny + 1));
  for (Index j = 0; j <= ny; ++j)
  {
    for (Index i = 0; i <= nx; ++i)
    {
      // Last row/column pinned to the exact boundary coordinate.
      const double x = (i == nx) ? domain.x1 : domain.x0 + i * mesh.hx;
      const double y = (j == ny) ? domain.y1 : domain.y0 + j * mesh.hy;
      mesh.vertices.emplace_back(x, y);
    }
  }

  mesh.triangles.reserve(2 * nx * ny);
  for (Index j = 0; j < ny; ++j)
  {
    for (Index i = 0; i < nx; ++i)
    {
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }

  const double diag = std::hypot(mesh.hx, mesh.hy);
  const Point zero(0.0, 0.0);
  const Point up(0.0, 1.0), down(0.0, -1.0), right(1.0, 0.0), left(-1.0, 0.0);
  const Point diag_normal = Point(-mesh.hy, mesh.hx) / diag;

  auto &ie = mesh.interior_edges;
  for (Index j = 0; j < ny; ++j)
  {
    for (Index i = 0; i < nx; ++i)
    {
      ie.push_back({{vid(i, j), vid(i + 1, j + 1)}, lower(i, j), upper(i, j), diag,
                    diag_normal, zero});
    }
  }
  for (Index j = 1; j < ny; ++j)
  {
    for (Index i = 0; i < nx; ++i)
    {
      ie.push_back({{vid(i, j), vid(i + 1, j)}, upper(i, j - 1), lower(i, j), mesh.hx, up,
                    zero});
    }
  }
  for (Index j = 0; j < ny; ++j)
  {
    for (Index i = 1; i < nx; ++i)
    {
      ie.push_back({{vid(i, j), vid(i, j + 1)}, lower(i - 1, j), upper(i, j), mesh.hy, right,
                    zero});
    }
  }

  if (bc == BoundaryKind::Periodic)
  {
    for (Index i = 0; i < nx; ++i)
    {
      ie.push_back({{vid(i, ny), vid(i + 1, ny)}, upper(i, ny - 1), lower(i, 0), mesh.hx, up,
                    Point(0.0, -domain.Height())});
    }
    for (Index j = 0; j < ny; ++j)
    {
      ie.push_back({{vid(nx, j), vid(nx, j + 1)}, lower(nx - 1, j), upper(0, j), mesh.hy,
                    right, Point(-domain.Width(), 0.0)});
    }
  }
  else
  {
    auto &be = mesh.boundary_edges;
    for (Index i = 0; i < nx; ++i)
    {
      be.push_back({{vid(i, 0), vid(i + 1, 0)}, lower(i, 0), mesh.hx, down});
      be.push_back({{vid(i, ny), vid(i + 1, ny)}, upper(i, ny - 1), mesh.hx, up});
    }
    for (Index j = 0; j < ny; ++j)
    {
      be.push_back({{vid(0, j), vid(0, j + 1)}, upper(0, j), mesh.hy, left});
      be.push_back({{vid(nx, j), vid(nx, j + 1)}, lower(nx - 1, j), mesh.hy, right});
    }
  }
  return mesh;
}

void ValidateMesh(const Mesh &mesh)
{
  auto fail = [](const std::string &what) { throw AssertionFailure("mesh: " + what); };
  const Index nt = mesh.NumTriangles();

  double area = 0.0;
  for (Index t = 0; t < nt; ++t)
  {
    const double a = mesh.SignedArea(t);
    if (!(a > 0.0))
    {
      fail("non-positive triangle area");
    }
    area += a;
  }
  if (std::abs(area - mesh.domain.Area()) > 1e-12 * mesh.domain.Area())
  {
    fail("triangle areas do not sum to the domain area");
  }

  // Each triangle has three edges; every edge is counted once per owner.
  std::vector<int> owners(nt, 0);
  for (const auto &e : mesh.interior_edges)
  {
    if (e.left == e.right || e.left < 0 || e.right < 0 || e.left >= nt || e.right >= nt)
    {
      fail("interior edge without two distinct owners");
    }
    ++owners[e.left];
    ++owners[e.right];
  }
  for (const auto &e : mesh.boundary_edges)
  {
    if (e.triangle < 0 || e.triangle >= nt)
    {
      fail("boundary edge without an owner");
    }
    ++owners[e.triangle];
  }
  for (Index t = 0; t < nt; ++t)
  {
    if (owners[t] != 3)
    {
      std::ostringstream msg;
      msg << "triangle " << t << " owns " << owners[t] << " edges";
      fail(msg.str());
    }
  }
  if (mesh.bc == BoundaryKind::Periodic && !mesh.boundary_edges.empty())
  {
    fail("periodic mesh has unpaired boundary edges");
  }
}

}  // namespace esmor
