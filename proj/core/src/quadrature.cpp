// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/quadrature.hpp"

#include <cmath>

namespace esmor
{

const TriangleRule &TriangleDegree5()
{
  static const TriangleRule rule = []
  {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0;
    // Weights below are for a unit-area triangle; scaled by 1/2 for the reference element.
    const double w0 = 9.0 / 40.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    TriangleRule r;
    r.points = {{1.0 / 3.0, 1.0 / 3.0},
                {a1, a1},
                {1.0 - 2.0 * a1, a1},
                {a1, 1.0 - 2.0 * a1},
                {a2, a2},
                {1.0 - 2.0 * a2, a2},
                {a2, 1.0 - 2.0 * a2}};
    r.weights = {w0, w1, w1, w1, w2, w2, w2};
    for (auto &w : r.weights)
    {
      w *= 0.5;
    }
    return r;
  }();
  return rule;
}

const LineRule &GaussLegendre4()
{
  static const LineRule rule = []
  {
    const double r = std::sqrt(6.0 / 5.0);
    const double x_in = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * r);
    const double x_out = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * r);
    const double w_in = (18.0 + std::sqrt(30.0)) / 36.0;
    const double w_out = (18.0 - std::sqrt(30.0)) / 36.0;
    LineRule l;
    // Map from [-1, 1] to [0, 1].
    l.points = {0.5 * (1.0 - x_out), 0.5 * (1.0 - x_in), 0.5 * (1.0 + x_in),
                0.5 * (1.0 + x_out)};
    l.weights = {0.5 * w_out, 0.5 * w_in, 0.5 * w_in, 0.5 * w_out};
    return l;
  }();
  return rule;
}

}  // namespace esmor
