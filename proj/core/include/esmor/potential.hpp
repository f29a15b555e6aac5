// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "esmor/common.hpp"

namespace esmor
{

enum class PotentialKind
{
  Quartic,
  Logarithmic
};

// Double-well free-energy density F and its derivatives.
//
//   Quartic:      F(u) = (u^2 - 1)^2 / 4,                f(u) = u^3 - u
//   Logarithmic:  F(u) = (theta [(1+u)ln(1+u) + (1-u)ln(1-u)] - theta_c u^2) / 2,
//                 f(u) = (theta/2) ln((1+u)/(1-u)) - theta_c u
//
// The logarithmic density is singular at |u| = 1. Arguments are clamped to
// [-1 + clamp_delta, 1 - clamp_delta] unless clamping is switched off, in which case an
// out-of-range argument raises NonlinearDomainError.
class Potential
{
public:
  static Potential Quartic();
  static Potential Logarithmic(double theta, double theta_c);

  PotentialKind Kind() const { return kind_; }
  double Theta() const { return theta_; }
  double ThetaC() const { return theta_c_; }

  void SetClamping(bool enabled, double delta = 1e-8);
  bool ClampingEnabled() const { return clamp_; }

  double Density(double u) const;           // F
  double Derivative(double u) const;        // f = F'
  double SecondDerivative(double u) const;  // f'

  // int_0^1 f(tau b + (1 - tau) a) dtau, the pointwise average vector field integrand.
  double AvfIntegral(double a, double b) const;

  // d/db of AvfIntegral, i.e. int_0^1 tau f'(tau b + (1 - tau) a) dtau.
  double AvfIntegralDerivative(double a, double b) const;

  // Applies the clamping policy; identity for the quartic potential.
  double Admissible(double u) const;

private:
  Potential(PotentialKind kind, double theta, double theta_c);

  PotentialKind kind_;
  double theta_ = 0.0;
  double theta_c_ = 0.0;
  bool clamp_ = true;
  double clamp_delta_ = 1e-8;
};

}  // namespace esmor
