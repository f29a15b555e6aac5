// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

namespace esmor
{

// Points on the reference triangle {(xi, eta) : xi, eta >= 0, xi + eta <= 1}; weights sum to
// its area 1/2.
struct TriangleRule
{
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

// Points on [0, 1]; weights sum to 1.
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

// 7-point rule of Radon, exact for polynomials of total degree 5.
const TriangleRule &TriangleDegree5();

// 4-point Gauss-Legendre on [0, 1], exact for degree 7.
const LineRule &GaussLegendre4();

}  // namespace esmor
