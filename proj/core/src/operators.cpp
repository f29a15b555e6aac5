// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/operators.hpp"

#include <atomic>
#include <cmath>

#include <Eigen/Cholesky>

#include "esmor/random.hpp"

namespace esmor
{

namespace
{

std::atomic<std::uint64_t> full_nonlinear_evaluations{0};

// Traces of both owners' basis functions at a point on an interior edge.
struct EdgeTrace
{
  Eigen::Matrix<double, 6, 1> jump;    // [phi_left; -phi_right]
  Eigen::Matrix<double, 6, 1> normal;  // 1/2 [grad phi_left . n; grad phi_right . n]
};

EdgeTrace TraceAt(const DGSpace &space, const InteriorEdge &edge, double t)
{
  const auto &v = space.GetMesh().vertices;
  const Point x = (1.0 - t) * v[edge.vertices[0]] + t * v[edge.vertices[1]];
  EdgeTrace tr;
  tr.jump.head<3>() = space.EvaluateBasis(edge.left, x);
  tr.jump.tail<3>() = -space.EvaluateBasis(edge.right, x + edge.shift);
  tr.normal.head<3>() = 0.5 * space.Element(edge.left).grads * edge.normal;
  tr.normal.tail<3>() = 0.5 * space.Element(edge.right).grads * edge.normal;
  return tr;
}

Eigen::Matrix<double, 6, 1> EdgeCoefficients(const Vector &u, const InteriorEdge &edge)
{
  Eigen::Matrix<double, 6, 1> c;
  c.head<3>() = u.segment<3>(3 * edge.left);
  c.tail<3>() = u.segment<3>(3 * edge.right);
  return c;
}

}  // namespace

Vector BlockDiagonal::Apply(const Vector &x) const
{
  Vector y(Rows());
  for (Index k = 0; k < NumBlocks(); ++k)
  {
    y.segment<3>(3 * k).noalias() = blocks_[k] * x.segment<3>(3 * k);
  }
  return y;
}

Vector BlockDiagonal::ApplyTranspose(const Vector &x) const
{
  Vector y(Rows());
  for (Index k = 0; k < NumBlocks(); ++k)
  {
    y.segment<3>(3 * k).noalias() = blocks_[k].transpose() * x.segment<3>(3 * k);
  }
  return y;
}

SparseMatrix BlockDiagonal::ToSparse() const
{
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * blocks_.size());
  for (Index k = 0; k < NumBlocks(); ++k)
  {
    for (int i = 0; i < 3; ++i)
    {
      for (int j = 0; j < 3; ++j)
      {
        trip.emplace_back(3 * k + i, 3 * k + j, blocks_[k](i, j));
      }
    }
  }
  SparseMatrix m(Rows(), Rows());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix AssembleMass(const DGSpace &space)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  Eigen::Matrix3d ref = Eigen::Matrix3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Eigen::Vector3d p = phi.row(static_cast<Index>(q)).transpose();
    ref += rule.weights[q] * p * p.transpose();
  }
  BlockDiagonal m(space.NumElements());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    m.Block(k) = 2.0 * space.Element(k).area * ref;
  }
  return m.ToSparse();
}

SparseMatrix AssembleStiffnessUnit(const DGSpace &space)
{
  const auto &mesh = space.GetMesh();
  const auto &line = space.EdgeRule();
  const double sigma = space.Sigma();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * space.NumElements() + 36 * mesh.interior_edges.size());

  // Element loop in ascending order, then edges in mesh order; duplicates are summed by
  // setFromTriplets in insertion order, so the result is deterministic.
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    const auto &e = space.Element(k);
    const Eigen::Matrix3d local = e.area * e.grads * e.grads.transpose();
    for (int i = 0; i < 3; ++i)
    {
      for (int j = 0; j < 3; ++j)
      {
        trip.emplace_back(3 * k + i, 3 * k + j, local(i, j));
      }
    }
  }

  for (const auto &edge : mesh.interior_edges)
  {
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t q = 0; q < line.size(); ++q)
    {
      const auto tr = TraceAt(space, edge, line.points[q]);
      const double w = line.weights[q] * edge.length;
      local += w * (-tr.jump * tr.normal.transpose() - tr.normal * tr.jump.transpose() +
                    (sigma / edge.length) * tr.jump * tr.jump.transpose());
    }
    const Index owners[2] = {edge.left, edge.right};
    for (int a = 0; a < 6; ++a)
    {
      for (int b = 0; b < 6; ++b)
      {
        trip.emplace_back(3 * owners[a / 3] + a % 3, 3 * owners[b / 3] + b % 3, local(a, b));
      }
    }
  }

  SparseMatrix a(space.NumDofs(), space.NumDofs());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

FomOperators AssembleOperators(const DGSpace &space)
{
  FomOperators ops;
  ops.mass = AssembleMass(space);
  ops.stiffness_unit = AssembleStiffnessUnit(space);
  ops.mass_blocks = BlockDiagonal(space.NumElements());
  ops.mass_factor = BlockDiagonal(space.NumElements());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    Eigen::Matrix3d block;
    for (int i = 0; i < 3; ++i)
    {
      for (int j = 0; j < 3; ++j)
      {
        block(i, j) = ops.mass.coeff(3 * k + i, 3 * k + j);
      }
    }
    ops.mass_blocks.Block(k) = block;
    Eigen::LLT<Eigen::Matrix3d> llt(block);
    if (llt.info() != Eigen::Success)
    {
      throw FactorizationError("mass block is not positive definite");
    }
    ops.mass_factor.Block(k) = llt.matrixU();
  }
  return ops;
}

double MinRandomRayleighQuotient(const SparseMatrix &a, int trials, std::uint64_t seed)
{
  SplitMix64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  Vector x(a.cols());
  for (int t = 0; t < trials; ++t)
  {
    for (Index i = 0; i < x.size(); ++i)
    {
      x[i] = 2.0 * rng.Uniform() - 1.0;
    }
    worst = std::min(worst, x.dot(a * x) / x.squaredNorm());
  }
  return worst;
}

Eigen::Vector3d ElementNonlinear(const DGSpace &space, Index k, const Eigen::Vector3d &u,
                                 const Potential &potential)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  const double det = 2.0 * space.Element(k).area;
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const auto p = phi.row(static_cast<Index>(q));
    out += (rule.weights[q] * det * potential.Derivative(p.dot(u))) * p.transpose();
  }
  return out;
}

Eigen::Vector3d ElementAvfNonlinear(const DGSpace &space, Index k, const Eigen::Vector3d &a,
                                    const Eigen::Vector3d &b, const Potential &potential)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  const double det = 2.0 * space.Element(k).area;
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const auto p = phi.row(static_cast<Index>(q));
    const double g = potential.AvfIntegral(p.dot(a), p.dot(b));
    out += (rule.weights[q] * det * g) * p.transpose();
  }
  return out;
}

Eigen::Matrix3d ElementAvfJacobian(const DGSpace &space, Index k, const Eigen::Vector3d &a,
                                   const Eigen::Vector3d &b, const Potential &potential)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  const double det = 2.0 * space.Element(k).area;
  Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Eigen::Vector3d p = phi.row(static_cast<Index>(q)).transpose();
    const double dg = potential.AvfIntegralDerivative(p.dot(a), p.dot(b));
    out += (rule.weights[q] * det * dg) * p * p.transpose();
  }
  return out;
}

Vector EvalNonlinear(const Vector &u, const Potential &potential, const DGSpace &space)
{
  ++full_nonlinear_evaluations;
  Vector f(space.NumDofs());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    f.segment<3>(3 * k) = ElementNonlinear(space, k, u.segment<3>(3 * k), potential);
  }
  return f;
}

BlockDiagonal EvalNonlinearJacobian(const Vector &u, const Potential &potential,
                                    const DGSpace &space)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  BlockDiagonal jac(space.NumElements());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    const double det = 2.0 * space.Element(k).area;
    const Eigen::Vector3d uk = u.segment<3>(3 * k);
    Eigen::Matrix3d &block = jac.Block(k);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Eigen::Vector3d p = phi.row(static_cast<Index>(q)).transpose();
      block += (rule.weights[q] * det * potential.SecondDerivative(p.dot(uk))) * p *
               p.transpose();
    }
  }
  return jac;
}

Vector AvfNonlinear(const Vector &a, const Vector &b, const Potential &potential,
                    const DGSpace &space)
{
  ++full_nonlinear_evaluations;
  Vector g(space.NumDofs());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    g.segment<3>(3 * k) =
        ElementAvfNonlinear(space, k, a.segment<3>(3 * k), b.segment<3>(3 * k), potential);
  }
  return g;
}

BlockDiagonal AvfNonlinearJacobian(const Vector &a, const Vector &b, const Potential &potential,
                                   const DGSpace &space)
{
  BlockDiagonal jac(space.NumElements());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    jac.Block(k) =
        ElementAvfJacobian(space, k, a.segment<3>(3 * k), b.segment<3>(3 * k), potential);
  }
  return jac;
}

std::uint64_t FullNonlinearEvaluationCount()
{
  return full_nonlinear_evaluations.load();
}

double IntegratePotential(const Vector &u, const Potential &potential, const DGSpace &space)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  double sum = 0.0;
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    const double det = 2.0 * space.Element(k).area;
    const Eigen::Vector3d uk = u.segment<3>(3 * k);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      sum += rule.weights[q] * det * potential.Density(phi.row(static_cast<Index>(q)).dot(uk));
    }
  }
  return sum;
}

double DiscreteEnergy(const Vector &u, const DGSpace &space, double epsilon,
                      const Potential &potential)
{
  double gradient = 0.0;
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    const auto &e = space.Element(k);
    const Eigen::Vector2d g = e.grads.transpose() * u.segment<3>(3 * k);
    gradient += e.area * g.squaredNorm();
  }

  const auto &line = space.EdgeRule();
  double consistency = 0.0, penalty = 0.0;
  for (const auto &edge : space.GetMesh().interior_edges)
  {
    const auto c = EdgeCoefficients(u, edge);
    double cons_e = 0.0, pen_e = 0.0;
    for (std::size_t q = 0; q < line.size(); ++q)
    {
      const auto tr = TraceAt(space, edge, line.points[q]);
      const double jump = tr.jump.dot(c);
      cons_e += line.weights[q] * tr.normal.dot(c) * jump;
      pen_e += line.weights[q] * jump * jump;
    }
    consistency += edge.length * cons_e;
    penalty += space.Sigma() / (2.0 * edge.length) * edge.length * pen_e;
  }

  return 0.5 * epsilon * gradient + IntegratePotential(u, potential, space) -
         epsilon * consistency + epsilon * penalty;
}

double DiscreteEnergyMatrixForm(const Vector &u, const FomOperators &ops, double epsilon,
                                const Potential &potential, const DGSpace &space)
{
  return 0.5 * epsilon * u.dot(ops.stiffness_unit * u) + IntegratePotential(u, potential, space);
}

double MassNorm(const Vector &u, const SparseMatrix &mass)
{
  return std::sqrt(std::max(0.0, u.dot(mass * u)));
}

}  // namespace esmor
