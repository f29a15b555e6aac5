// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <catch_amalgamated.hpp>

#include "esmor/avf.hpp"
#include "esmor/operators.hpp"
#include "esmor/random.hpp"
#include "oracles.hpp"

using namespace esmor;

namespace
{

Vector RandomVector(Index n, std::uint64_t seed, double lo, double hi)
{
  SplitMix64 rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i)
  {
    v[i] = lo + (hi - lo) * rng.Uniform();
  }
  return v;
}

double MaxAbs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Mass matrix blocks", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 1.0, BoundaryKind::Neumann));
  const SparseMatrix M = AssembleMass(space);
  Eigen::Matrix3d ref;
  ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  ref *= 0.5 / 12.0;
  const Matrix dense(M);
  for (Index k = 0; k < 2; ++k)
  {
    CHECK(MaxAbs(dense.block<3, 3>(3 * k, 3 * k) - ref) < 1e-15);
  }
  CHECK(MaxAbs(dense.block<3, 3>(0, 3)) == 0.0);

  const DGSpace fine(BuildMesh({0, 0, 2, 1}, 0.25, BoundaryKind::Neumann));
  const SparseMatrix Mf = AssembleMass(fine);
  const Vector one = Vector::Ones(fine.NumDofs());
  CHECK(one.dot(Mf * one) == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(MaxAbs(Matrix(Mf) - Matrix(Mf).transpose()) == 0.0);
  CHECK(MaxAbs(Matrix(Mf) - oracle::DenseMass(fine.GetMesh())) < 1e-15);
}

TEST_CASE("Stiffness matrix matches the dense oracle", "[operators]")
{
  struct Case
  {
    Rectangle domain;
    double h;
    BoundaryKind bc;
    double sigma;
  };
  for (const Case &c : {Case{{0, 0, 1, 1}, 1.0, BoundaryKind::Neumann, 18.0},
                        Case{{0, 0, 1.5, 1}, 0.5, BoundaryKind::Neumann, 18.0},
                        Case{{0, 0, 1, 1}, 1.0 / 3, BoundaryKind::Periodic, 18.0},
                        Case{{-1, 0, 1, 1}, 0.25, BoundaryKind::Periodic, 7.0}})
  {
    const DGSpace space(BuildMesh(c.domain, c.h, c.bc), c.sigma);
    const Matrix A(AssembleStiffnessUnit(space));
    const Matrix ref = oracle::DenseStiffness(space.GetMesh(), c.sigma);
    CHECK(MaxAbs(A - ref) <= 1e-12 * MaxAbs(ref));
    CHECK(MaxAbs(A - A.transpose()) <= 1e-14 * MaxAbs(A));
    CHECK((A * Vector::Ones(A.rows())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Operator bundle and coercivity", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.125, BoundaryKind::Neumann));
  const FomOperators ops = AssembleOperators(space);
  CHECK(MaxAbs(Matrix(ops.stiffness_unit) - Matrix(AssembleStiffnessUnit(space))) == 0.0);
  CHECK(MaxAbs(Matrix(ops.mass_blocks.ToSparse()) - Matrix(ops.mass)) == 0.0);
  // M = R^T R blockwise.
  const Matrix R(ops.mass_factor.ToSparse());
  CHECK(MaxAbs(R.transpose() * R - Matrix(ops.mass)) < 1e-15);
  CHECK(MinRandomRayleighQuotient(ops.stiffness_unit, 100, 3) >= 0.0);

  const Vector x = RandomVector(space.NumDofs(), 5, -1, 1);
  CHECK((ops.mass_factor.Apply(x) - R * x).norm() < 1e-14);
  CHECK((ops.mass_factor.ApplyTranspose(x) - R.transpose() * x).norm() < 1e-14);
}

TEST_CASE("Nonlinear vector", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 1.0 / 3, BoundaryKind::Neumann));
  const Index n = space.NumDofs();
  const Potential quartic = Potential::Quartic();
  CHECK(EvalNonlinear(Vector::Zero(n), quartic, space).cwiseAbs().maxCoeff() == 0.0);
  CHECK(EvalNonlinear(Vector::Ones(n), quartic, space).cwiseAbs().maxCoeff() < 1e-15);

  const Vector u = RandomVector(n, 1, -1.2, 1.2);
  const Vector ref = oracle::Nonlinear(space.GetMesh(), u, quartic);
  CHECK((EvalNonlinear(u, quartic, space) - ref).cwiseAbs().maxCoeff() < 1e-10);

  // The logarithmic integrand is not polynomial; agreement is limited by the 7-point rule.
  const Potential lg = Potential::Logarithmic(0.1, 1.0);
  const Vector v = RandomVector(n, 2, -0.3, 0.3);
  const Vector ref_log = oracle::Nonlinear(space.GetMesh(), v, lg);
  CHECK((EvalNonlinear(v, lg, space) - ref_log).cwiseAbs().maxCoeff() <
        1e-5 * ref_log.cwiseAbs().maxCoeff());
}

TEST_CASE("Nonlinear Jacobian", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.5, BoundaryKind::Periodic));
  const Index n = space.NumDofs();
  const FomOperators ops = AssembleOperators(space);
  const Potential quartic = Potential::Quartic();

  const Matrix J0(EvalNonlinearJacobian(Vector::Zero(n), quartic, space).ToSparse());
  CHECK(MaxAbs(J0 + Matrix(ops.mass)) < 1e-15);

  for (const Potential &p : {quartic, Potential::Logarithmic(0.1, 1.0)})
  {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
      const Vector u = RandomVector(n, 100 + seed, -0.8, 0.8);
      const Matrix J(EvalNonlinearJacobian(u, p, space).ToSparse());
      const Matrix fd = oracle::FiniteDifferenceJacobian(
          [&](const Vector &x) { return EvalNonlinear(x, p, space); }, u, 1e-6);
      CHECK(MaxAbs(J - fd) <= 1e-5 * MaxAbs(fd));
      // Block pattern.
      for (Index i = 0; i < n; ++i)
      {
        for (Index j = 0; j < n; ++j)
        {
          if (i / 3 != j / 3)
          {
            CHECK(J(i, j) == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("Nonlinear evaluation is element-local", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.25, BoundaryKind::Neumann));
  const Potential p = Potential::Quartic();
  const Vector u = RandomVector(space.NumDofs(), 9, -1, 1);
  Vector v = u;
  v.segment<3>(3 * 7) += Eigen::Vector3d(0.1, -0.2, 0.3);
  const Vector d = EvalNonlinear(v, p, space) - EvalNonlinear(u, p, space);
  const Vector g = AvfNonlinear(u, v, p, space) - AvfNonlinear(u, u, p, space);
  for (Index i = 0; i < d.size(); ++i)
  {
    if (i / 3 != 7)
    {
      CHECK(d[i] == 0.0);
      CHECK(g[i] == 0.0);
    }
  }
  CHECK(d.segment<3>(21).norm() > 0.0);
}

TEST_CASE("AVF nonlinear term and residual match the dense oracle", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.25, BoundaryKind::Periodic));
  const Index n = space.NumDofs();
  const FomOperators ops = AssembleOperators(space);
  const Matrix A = oracle::DenseStiffness(space.GetMesh(), space.Sigma());
  const Matrix M = oracle::DenseMass(space.GetMesh());
  const double eps = 0.05, dt = 0.1;

  const Potential quartic = Potential::Quartic();
  const Vector a = RandomVector(n, 21, -1, 1);
  const Vector b = RandomVector(n, 22, -1, 1);
  const Vector ref = M * (b - a) + 0.5 * dt * eps * A * (b + a) +
                     dt * oracle::AvfNonlinear(space.GetMesh(), a, b, quartic);
  const Vector r = AvfResidual(b, a, ops, quartic, eps, dt, space);
  CHECK((r - ref).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((r - ref).cwiseAbs().maxCoeff() < 1e-13 * ref.cwiseAbs().maxCoeff() + 1e-15);

  const Potential lg = Potential::Logarithmic(0.1, 1.0);
  const Vector c = RandomVector(n, 23, -0.2, 0.2);
  const Vector d = RandomVector(n, 24, -0.2, 0.2);
  const Vector ref_log = oracle::AvfNonlinear(space.GetMesh(), c, d, lg);
  CHECK((AvfNonlinear(c, d, lg, space) - ref_log).cwiseAbs().maxCoeff() < 1e-8);

  // Stationary well.
  const Vector one = Vector::Ones(n);
  CHECK(AvfResidual(one, one, ops, quartic, eps, dt, space).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("AVF Jacobian matches finite differences", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.5, BoundaryKind::Neumann));
  const Index n = space.NumDofs();
  for (const Potential &p : {Potential::Quartic(), Potential::Logarithmic(0.1, 1.0)})
  {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
      const Vector a = RandomVector(n, 300 + seed, -0.8, 0.8);
      const Vector b = RandomVector(n, 400 + seed, -0.8, 0.8);
      const Matrix J(AvfNonlinearJacobian(a, b, p, space).ToSparse());
      const Matrix fd = oracle::FiniteDifferenceJacobian(
          [&](const Vector &x) { return AvfNonlinear(a, x, p, space); }, b, 1e-6);
      CHECK(MaxAbs(J - fd) <= 1e-5 * MaxAbs(fd));
    }
  }
}

TEST_CASE("Discrete energy", "[operators]")
{
  const DGSpace space(BuildMesh({0, 0, 2, 1}, 0.25, BoundaryKind::Neumann));
  const FomOperators ops = AssembleOperators(space);
  const Index n = space.NumDofs();
  const Potential quartic = Potential::Quartic();
  CHECK(std::abs(DiscreteEnergy(Vector::Ones(n), space, 0.1, quartic)) < 1e-14);
  CHECK(DiscreteEnergy(Vector::Zero(n), space, 0.1, quartic) ==
        Catch::Approx(2.0 / 4).epsilon(1e-14));

  const Matrix A = oracle::DenseStiffness(space.GetMesh(), space.Sigma());
  for (const Potential &p : {quartic, Potential::Logarithmic(0.1, 1.0)})
  {
    // A smooth interpolant and a rough random vector.
    const Vector smooth = ProjectInitial(
        [](const Point &x) { return 0.5 * std::sin(3 * x.x()) * std::cos(2 * x.y()); }, space);
    for (const Vector &u : {smooth, RandomVector(n, 77, -0.5, 0.5)})
    {
      for (double eps : {1.0, 0.01})
      {
        const double direct = DiscreteEnergy(u, space, eps, p);
        const double matrix = DiscreteEnergyMatrixForm(u, ops, eps, p, space);
        CHECK(std::abs(direct - matrix) <= 1e-10 * std::max(1.0, std::abs(matrix)));
        const double ref =
            0.5 * eps * u.dot(A * u) + oracle::PotentialIntegral(space.GetMesh(), u, p);
        CHECK(std::abs(matrix - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}
