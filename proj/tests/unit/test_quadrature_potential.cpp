// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>

#include <catch_amalgamated.hpp>

#include "esmor/potential.hpp"
#include "esmor/quadrature.hpp"
#include "esmor/random.hpp"
#include "oracles.hpp"

using namespace esmor;
using Catch::Approx;

namespace
{

// Exact integral of xi^p eta^q over the reference triangle: p! q! / (p + q + 2)!.
double MonomialIntegral(int p, int q)
{
  return std::tgamma(p + 1) * std::tgamma(q + 1) / std::tgamma(p + q + 3);
}

}  // namespace

TEST_CASE("Triangle rule integrates degree 5 exactly", "[quadrature_potential]")
{
  const TriangleRule &rule = TriangleDegree5();
  REQUIRE(rule.size() == 7);
  double total = 0.0;
  for (double w : rule.weights)
  {
    CHECK(w > 0.0);
    total += w;
  }
  CHECK(total == Approx(0.5).epsilon(1e-15));

  for (int p = 0; p <= 5; ++p)
  {
    for (int q = 0; p + q <= 5; ++q)
    {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i)
      {
        s += rule.weights[i] * std::pow(rule.points[i][0], p) * std::pow(rule.points[i][1], q);
      }
      CHECK(std::abs(s - MonomialIntegral(p, q)) < 1e-15);
    }
  }
}

TEST_CASE("Edge rule is 4-point Gauss-Legendre", "[quadrature_potential]")
{
  const LineRule &rule = GaussLegendre4();
  const auto ref = oracle::GaussLegendre(4);
  REQUIRE(rule.size() == 4);
  for (int p = 0; p <= 7; ++p)
  {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
    {
      s += rule.weights[i] * std::pow(rule.points[i], p);
    }
    CHECK(s == Approx(1.0 / (p + 1)).epsilon(1e-14));
  }
  for (std::size_t i = 0; i < 4; ++i)
  {
    CHECK(rule.points[i] == Approx(ref.x[i]).epsilon(1e-14));
    CHECK(rule.weights[i] == Approx(ref.w[i]).epsilon(1e-13));
  }
}

TEST_CASE("Quartic potential values", "[quadrature_potential]")
{
  const Potential p = Potential::Quartic();
  CHECK(p.Density(1.0) == 0.0);
  CHECK(p.Density(-1.0) == 0.0);
  CHECK(p.Density(0.0) == 0.25);
  CHECK(p.Derivative(-1.0) == 0.0);
  CHECK(p.Derivative(0.0) == 0.0);
  CHECK(p.Derivative(1.0) == 0.0);
  CHECK(p.Derivative(2.0) == 6.0);
  CHECK(p.SecondDerivative(0.0) == -1.0);
  for (double u = -3.0; u <= 3.0; u += 0.01)
  {
    CHECK(p.Density(u) >= 0.0);
  }
}

TEST_CASE("Logarithmic potential values and parameters", "[quadrature_potential]")
{
  const Potential p = Potential::Logarithmic(0.1, 1.0);
  CHECK(p.Density(0.0) == 0.0);
  CHECK(p.Derivative(0.0) == 0.0);
  CHECK(p.SecondDerivative(0.0) == Approx(0.1 - 1.0));
  CHECK_THROWS_AS(Potential::Logarithmic(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Potential::Logarithmic(0.1, -1.0), InvalidArgument);
}

TEST_CASE("Derivatives match central differences", "[quadrature_potential]")
{
  SplitMix64 rng(7);
  for (const Potential &p : {Potential::Quartic(), Potential::Logarithmic(0.1, 1.0),
                             Potential::Logarithmic(0.17, 1.0)})
  {
    for (int i = 0; i < 100; ++i)
    {
      const double u = 1.8 * rng.Uniform() - 0.9;
      const double h = 1e-5;
      const double df = (p.Density(u + h) - p.Density(u - h)) / (2 * h);
      const double d2f = (p.Derivative(u + h) - p.Derivative(u - h)) / (2 * h);
      CHECK(std::abs(df - p.Derivative(u)) < 1e-7);
      CHECK(std::abs(d2f - p.SecondDerivative(u)) < 1e-5 * std::max(1.0, std::abs(d2f)));
      // Odd symmetry of f.
      CHECK(p.Derivative(-u) == Approx(-p.Derivative(u)).margin(1e-15));
    }
  }
}

TEST_CASE("AVF line integral", "[quadrature_potential]")
{
  const Potential q = Potential::Quartic();
  CHECK(q.AvfIntegral(0.0, 0.0) == 0.0);
  CHECK(q.AvfIntegral(-1.0, 1.0) == Approx(0.0).margin(1e-15));
  CHECK(q.AvfIntegral(0.3, 0.3) == Approx(q.Derivative(0.3)).epsilon(1e-15));

  const Potential lg = Potential::Logarithmic(0.1, 1.0);
  const double trap = oracle::Trapezoid(
      [&](double t) { return lg.Derivative(t * 0.4 + (1 - t) * -0.3); }, 1000);
  CHECK(std::abs(lg.AvfIntegral(-0.3, 0.4) - trap) < 1e-8);

  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i)
  {
    const double a = 1.6 * rng.Uniform() - 0.8;
    const double b = 1.6 * rng.Uniform() - 0.8;
    // (b - a) * avf(a, b) = F(b) - F(a).
    CHECK(std::abs((b - a) * q.AvfIntegral(a, b) - (q.Density(b) - q.Density(a))) < 1e-14);
    // Four Gauss points resolve the logarithm well away from the singularities at +-theta_c.
    const double a5 = 0.625 * a, b5 = 0.625 * b;
    CHECK(std::abs((b5 - a5) * lg.AvfIntegral(a5, b5) - (lg.Density(b5) - lg.Density(a5))) <
          1e-7);
    CHECK(std::abs((b - a) * lg.AvfIntegral(a, b) - (lg.Density(b) - lg.Density(a))) < 1e-4);

    const double h = 1e-6;
    for (const Potential *p : {&q, &lg})
    {
      const double fd = (p->AvfIntegral(a, b + h) - p->AvfIntegral(a, b - h)) / (2 * h);
      CHECK(std::abs(fd - p->AvfIntegralDerivative(a, b)) < 1e-6);
    }
  }
}

TEST_CASE("Logarithmic clamping policy", "[quadrature_potential]")
{
  Potential p = Potential::Logarithmic(0.1, 1.0);
  CHECK(std::isfinite(p.Derivative(1.0)));
  CHECK(std::isfinite(p.Density(-1.5)));
  CHECK(p.Admissible(2.0) == 1.0 - 1e-8);
  p.SetClamping(false);
  CHECK_THROWS_AS(p.Derivative(1.0), NonlinearDomainError);
  CHECK_THROWS_AS(p.AvfIntegral(0.5, 1.2), NonlinearDomainError);
  CHECK_NOTHROW(p.Derivative(0.999));
}
