// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "esmor/common.hpp"

namespace esmor
{

using Point = Eigen::Vector2d;

struct Rectangle
{
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

  double Width() const { return x1 - x0; }
  double Height() const { return y1 - y0; }
  double Area() const { return Width() * Height(); }
};

enum class BoundaryKind
{
  Neumann,
  Periodic
};

// An edge shared by two triangles. The unit normal points from `left` into `right`.
// Endpoints are given in the frame of `left`; adding `shift` maps a point on the edge into
// the frame of `right` (non-zero only for edges wrapped by periodicity).
struct InteriorEdge
{
  std::array<Index, 2> vertices;
  Index left;
  Index right;
  double length;
  Point normal;
  Point shift;
};

struct BoundaryEdge
{
  std::array<Index, 2> vertices;
  Index triangle;
  double length;
  Point normal;  // outward
};

// Uniform structured triangulation of a rectangle: nx x ny squares, each split along its
// lower-left to upper-right diagonal. Square (i, j) owns triangles 2(j nx + i) (lower) and
// 2(j nx + i) + 1 (upper), both counter-clockwise.
struct Mesh
{
  Rectangle domain;
  BoundaryKind bc = BoundaryKind::Neumann;
  Index nx = 0;
  Index ny = 0;
  double hx = 0.0;
  double hy = 0.0;

  std::vector<Point> vertices;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<InteriorEdge> interior_edges;
  std::vector<BoundaryEdge> boundary_edges;

  Index NumTriangles() const { return static_cast<Index>(triangles.size()); }
  double SignedArea(Index t) const;
};

// Picks nx = round(width / h), ny = round(height / h) (at least 1) and triangulates. Under
// periodic conditions opposite boundary edges are merged into interior edges.
Mesh BuildMesh(const Rectangle &domain, double h, BoundaryKind bc);

// Throws AssertionFailure if any structural invariant is violated.
void ValidateMesh(const Mesh &mesh);

}  // namespace esmor
