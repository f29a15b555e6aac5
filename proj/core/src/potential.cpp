// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/potential.hpp"

#include <cmath>
#include <sstream>

#include "esmor/quadrature.hpp"

namespace esmor
{

Potential::Potential(PotentialKind kind, double theta, double theta_c)
  : kind_(kind), theta_(theta), theta_c_(theta_c)
{
}

Potential Potential::Quartic()
{
  return Potential(PotentialKind::Quartic, 0.0, 0.0);
}

Potential Potential::Logarithmic(double theta, double theta_c)
{
  if (!(theta > 0.0) || !(theta_c > 0.0))
  {
    throw InvalidArgument("logarithmic potential requires theta > 0 and theta_c > 0");
  }
  return Potential(PotentialKind::Logarithmic, theta, theta_c);
}

void Potential::SetClamping(bool enabled, double delta)
{
  if (!(delta > 0.0) || delta >= 1.0)
  {
    throw InvalidArgument("clamp delta must lie in (0, 1)");
  }
  clamp_ = enabled;
  clamp_delta_ = delta;
}

double Potential::Admissible(double u) const
{
  if (kind_ == PotentialKind::Quartic)
  {
    return u;
  }
  if (clamp_)
  {
    const double hi = 1.0 - clamp_delta_;
    return std::fmin(std::fmax(u, -hi), hi);
  }
  if (!(std::abs(u) < 1.0))
  {
    std::ostringstream msg;
    msg << "logarithmic potential evaluated at u = " << u << " outside (-1, 1)";
    throw NonlinearDomainError(msg.str());
  }
  return u;
}

double Potential::Density(double u) const
{
  if (kind_ == PotentialKind::Quartic)
  {
    const double w = u * u - 1.0;
    return 0.25 * w * w;
  }
  u = Admissible(u);
  const double entropy = (1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u);
  return 0.5 * (theta_ * entropy - theta_c_ * u * u);
}

double Potential::Derivative(double u) const
{
  if (kind_ == PotentialKind::Quartic)
  {
    return u * u * u - u;
  }
  u = Admissible(u);
  return 0.5 * theta_ * (std::log1p(u) - std::log1p(-u)) - theta_c_ * u;
}

double Potential::SecondDerivative(double u) const
{
  if (kind_ == PotentialKind::Quartic)
  {
    return 3.0 * u * u - 1.0;
  }
  u = Admissible(u);
  return theta_ / ((1.0 - u) * (1.0 + u)) - theta_c_;
}

double Potential::AvfIntegral(double a, double b) const
{
  if (kind_ == PotentialKind::Quartic)
  {
    // Expanded form of (F(b) - F(a)) / (b - a); exact and free of cancellation as b -> a.
    return 0.25 * (a * a * a + a * a * b + a * b * b + b * b * b) - 0.5 * (a + b);
  }
  a = Admissible(a);
  b = Admissible(b);
  const auto &gl = GaussLegendre4();
  double sum = 0.0;
  for (std::size_t q = 0; q < gl.size(); ++q)
  {
    const double t = gl.points[q];
    sum += gl.weights[q] * Derivative(t * b + (1.0 - t) * a);
  }
  return sum;
}

double Potential::AvfIntegralDerivative(double a, double b) const
{
  if (kind_ == PotentialKind::Quartic)
  {
    return 0.25 * (a * a + 2.0 * a * b + 3.0 * b * b) - 0.5;
  }
  a = Admissible(a);
  b = Admissible(b);
  const auto &gl = GaussLegendre4();
  double sum = 0.0;
  for (std::size_t q = 0; q < gl.size(); ++q)
  {
    const double t = gl.points[q];
    sum += gl.weights[q] * t * SecondDerivative(t * b + (1.0 - t) * a);
  }
  return sum;
}

}  // namespace esmor
