// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Core>

#include "esmor/mesh.hpp"
#include "esmor/quadrature.hpp"

namespace esmor
{

// Affine map x = origin + jacobian * (xi, eta) of one triangle, with the constant gradients of
// its three local basis functions (rows).
struct ElementGeometry
{
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double area;
  Eigen::Matrix<double, 3, 2> grads;
};

// Discontinuous piecewise-linear space on a triangulation. Local basis functions are the
// barycentric coordinates of each triangle (nodal at its vertices, in the vertex order of the
// triangle). Global DoF of local function j on triangle k is 3 k + j.
class DGSpace
{
public:
  static constexpr int kLocalDofs = 3;

  explicit DGSpace(Mesh mesh, double sigma = 18.0, int degree = 1);

  const Mesh &GetMesh() const { return mesh_; }
  Index NumElements() const { return mesh_.NumTriangles(); }
  int LocalDofs() const { return kLocalDofs; }
  Index NumDofs() const { return NumElements() * kLocalDofs; }
  double Sigma() const { return sigma_; }
  int Degree() const { return 1; }

  const TriangleRule &VolumeRule() const { return *volume_rule_; }
  const LineRule &EdgeRule() const { return *edge_rule_; }

  // Basis values at the volume quadrature points: rows = points, cols = local functions.
  const Eigen::Matrix<double, Eigen::Dynamic, 3> &BasisAtQuadrature() const { return basis_q_; }

  const ElementGeometry &Element(Index k) const { return elements_[k]; }

  // Local basis values of triangle k at a physical point (extrapolated if outside).
  Eigen::Vector3d EvaluateBasis(Index k, const Point &x) const;

  // Physical location of a reference point on triangle k.
  Point MapToPhysical(Index k, double xi, double eta) const;

private:
  Mesh mesh_;
  double sigma_;
  const TriangleRule *volume_rule_;
  const LineRule *edge_rule_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> basis_q_;
  std::vector<ElementGeometry> elements_;
};

}  // namespace esmor
