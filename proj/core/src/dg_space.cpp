// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/dg_space.hpp"

#include <Eigen/LU>

namespace esmor
{

DGSpace::DGSpace(Mesh mesh, double sigma, int degree)
  : mesh_(std::move(mesh)), sigma_(sigma), volume_rule_(&TriangleDegree5()),
    edge_rule_(&GaussLegendre4())
{
  if (degree != 1)
  {
    throw InvalidArgument("only piecewise-linear (degree 1) spaces are implemented");
  }
  if (!(sigma > 0.0))
  {
    throw InvalidArgument("penalty parameter sigma must be positive");
  }

  const auto &rule = *volume_rule_;
  basis_q_.resize(static_cast<Index>(rule.size()), 3);
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const auto [xi, eta] = rule.points[q];
    basis_q_.row(static_cast<Index>(q)) << 1.0 - xi - eta, xi, eta;
  }

  elements_.resize(static_cast<std::size_t>(mesh_.NumTriangles()));
  for (Index k = 0; k < mesh_.NumTriangles(); ++k)
  {
    const auto &tri = mesh_.triangles[k];
    auto &e = elements_[k];
    e.origin = mesh_.vertices[tri[0]];
    e.jacobian.col(0) = mesh_.vertices[tri[1]] - e.origin;
    e.jacobian.col(1) = mesh_.vertices[tri[2]] - e.origin;
    e.inverse = e.jacobian.inverse();
    e.area = 0.5 * std::abs(e.jacobian.determinant());
    // grad(xi) and grad(eta) are the rows of the inverse map.
    e.grads.row(1) = e.inverse.row(0);
    e.grads.row(2) = e.inverse.row(1);
    e.grads.row(0) = -(e.grads.row(1) + e.grads.row(2));
  }
}

Eigen::Vector3d DGSpace::EvaluateBasis(Index k, const Point &x) const
{
  const auto &e = elements_[k];
  const Eigen::Vector2d ref = e.inverse * (x - e.origin);
  return {1.0 - ref.x() - ref.y(), ref.x(), ref.y()};
}

Point DGSpace::MapToPhysical(Index k, double xi, double eta) const
{
  const auto &e = elements_[k];
  return e.origin + e.jacobian * Eigen::Vector2d(xi, eta);
}

}  // namespace esmor
