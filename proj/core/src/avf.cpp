// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/avf.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace esmor
{

TimeGrid TimeGrid::Uniform(double t0, double T, double dt)
{
  if (!(dt > 0.0) || !(T > t0))
  {
    throw InvalidArgument("time grid requires dt > 0 and T > t0");
  }
  const double ratio = (T - t0) / dt;
  const auto steps = static_cast<Index>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
  {
    throw InvalidArgument("(T - t0) / dt must be a positive integer");
  }
  return TimeGrid{t0, T, dt, steps};
}

double Trajectory::MeanNewtonIterations() const
{
  if (newton_iters.empty())
  {
    return 0.0;
  }
  double s = 0.0;
  for (int it : newton_iters)
  {
    s += it;
  }
  return s / static_cast<double>(newton_iters.size());
}

StepResult NewtonSolve(AvfSystem &system, const Vector &current, const NewtonConfig &cfg)
{
  StepResult out;
  out.next = current;
  Vector r = system.Residual(current, out.next);
  out.residual_norm = r.norm();
  while (out.residual_norm > cfg.tol)
  {
    if (out.iterations >= cfg.max_iters || !std::isfinite(out.residual_norm))
    {
      std::ostringstream msg;
      msg << "Newton did not converge after " << out.iterations
          << " iterations (residual " << out.residual_norm << ")";
      throw NewtonDivergence(msg.str());
    }
    Vector delta = system.SolveJacobian(current, out.next, -r);
    ++out.iterations;
    // Backtrack on the residual norm; the full step is taken whenever it makes progress.
    const double previous = out.residual_norm;
    Vector trial = out.next + delta;
    r = system.Residual(current, trial);
    double trial_norm = r.norm();
    for (int halving = 0; halving < 30 && !(std::isfinite(trial_norm) && trial_norm < previous);
         ++halving)
    {
      delta *= 0.5;
      trial = out.next + delta;
      r = system.Residual(current, trial);
      trial_norm = r.norm();
    }
    out.next = std::move(trial);
    out.residual_norm = trial_norm;
    if (delta.lpNorm<Eigen::Infinity>() <= cfg.step_tol && std::isfinite(out.residual_norm))
    {
      break;
    }
  }
  return out;
}

Vector AvfResidual(const Vector &next, const Vector &current, const FomOperators &ops,
                   const Potential &potential, double epsilon, double dt, const DGSpace &space)
{
  Vector r = ops.mass * (next - current);
  r.noalias() += (0.5 * dt * epsilon) * (ops.stiffness_unit * (next + current));
  r += dt * AvfNonlinear(current, next, potential, space);
  return r;
}

struct FomAvfSystem::Impl
{
  const DGSpace &space;
  const FomOperators &ops;
  const Potential &potential;
  double epsilon;
  double dt;
  SparseMatrix base;                 // M + dt/2 eps A1
  std::vector<Index> block_entries;  // value-array position of every diagonal-block entry
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> solver;

  Impl(const DGSpace &s, const FomOperators &o, const Potential &p, double eps, double step)
    : space(s), ops(o), potential(p), epsilon(eps), dt(step)
  {
    base = ops.mass + (0.5 * dt * epsilon) * ops.stiffness_unit;
    base.makeCompressed();
    block_entries.resize(9 * static_cast<std::size_t>(space.NumElements()));
    for (Index k = 0; k < space.NumElements(); ++k)
    {
      for (int j = 0; j < 3; ++j)
      {
        const Index col = 3 * k + j;
        const auto *inner = base.innerIndexPtr();
        for (Index p = base.outerIndexPtr()[col]; p < base.outerIndexPtr()[col + 1]; ++p)
        {
          const Index row = inner[p];
          if (row >= 3 * k && row < 3 * k + 3)
          {
            block_entries[9 * k + 3 * j + (row - 3 * k)] = p;
          }
        }
      }
    }
    solver.analyzePattern(base);
  }

  SparseMatrix Assemble(const Vector &current, const Vector &next) const
  {
    SparseMatrix jac = base;
    const BlockDiagonal g = AvfNonlinearJacobian(current, next, potential, space);
    double *values = jac.valuePtr();
    for (Index k = 0; k < space.NumElements(); ++k)
    {
      for (int j = 0; j < 3; ++j)
      {
        for (int i = 0; i < 3; ++i)
        {
          values[block_entries[9 * k + 3 * j + i]] += dt * g.Block(k)(i, j);
        }
      }
    }
    return jac;
  }
};

FomAvfSystem::FomAvfSystem(const DGSpace &space, const FomOperators &ops,
                           const Potential &potential, double epsilon, double dt)
  : impl_(std::make_unique<Impl>(space, ops, potential, epsilon, dt))
{
}

FomAvfSystem::~FomAvfSystem() = default;

Vector FomAvfSystem::Residual(const Vector &current, const Vector &next)
{
  return AvfResidual(next, current, impl_->ops, impl_->potential, impl_->epsilon, impl_->dt,
                     impl_->space);
}

SparseMatrix FomAvfSystem::Jacobian(const Vector &current, const Vector &next) const
{
  return impl_->Assemble(current, next);
}

Vector FomAvfSystem::SolveJacobian(const Vector &current, const Vector &next, const Vector &rhs)
{
  impl_->solver.factorize(impl_->Assemble(current, next));
  if (impl_->solver.info() != Eigen::Success)
  {
    throw FactorizationError("sparse LDL^T factorization of the Newton matrix failed");
  }
  return impl_->solver.solve(rhs);
}

StepResult AvfStep(const Vector &current, const FomOperators &ops, const Potential &potential,
                   double epsilon, double dt, const NewtonConfig &cfg, const DGSpace &space)
{
  FomAvfSystem system(space, ops, potential, epsilon, dt);
  return NewtonSolve(system, current, cfg);
}

std::vector<std::string> EnergyViolations(const Vector &energies, double slack)
{
  std::vector<std::string> out;
  for (Index n = 0; n + 1 < energies.size(); ++n)
  {
    const double inc = energies[n + 1] - energies[n];
    if (!(inc <= slack))
    {
      std::ostringstream msg;
      msg.precision(6);
      msg << "energy increased by " << std::scientific << inc << " at step " << n + 1;
      out.push_back(msg.str());
    }
  }
  return out;
}

Trajectory SolveFom(const Vector &initial, const FomOperators &ops, const Potential &potential,
                    double epsilon, const TimeGrid &grid, const DGSpace &space,
                    const FomOptions &options)
{
  if (initial.size() != space.NumDofs() || !initial.allFinite())
  {
    throw InvalidArgument("initial condition has the wrong size or non-finite entries");
  }
  const Index steps = grid.steps;
  Trajectory traj;
  traj.snapshots.resize(initial.size(), steps + 1);
  traj.energies.resize(steps + 1);
  traj.newton_iters.reserve(static_cast<std::size_t>(steps));
  if (options.record_nonlinear)
  {
    traj.nonlinear.resize(initial.size(), steps);
  }

  traj.snapshots.col(0) = initial;
  traj.energies.setConstant(std::numeric_limits<double>::quiet_NaN());
  auto energy = [&](const Vector &u)
  { return DiscreteEnergyMatrixForm(u, ops, epsilon, potential, space); };
  if (options.compute_energy)
  {
    traj.energies[0] = energy(initial);
  }

  FomAvfSystem system(space, ops, potential, epsilon, grid.dt);
  for (Index n = 0; n < steps; ++n)
  {
    const Vector current = traj.snapshots.col(n);
    StepResult step = NewtonSolve(system, current, options.newton);
    traj.snapshots.col(n + 1) = step.next;
    if (options.compute_energy)
    {
      traj.energies[n + 1] = energy(step.next);
    }
    traj.newton_iters.push_back(step.iterations);
    if (options.record_nonlinear)
    {
      traj.nonlinear.col(n) = EvalNonlinear(step.next, potential, space);
    }
  }

  if (options.compute_energy && options.energy_check != EnergyCheck::Off)
  {
    auto violations = EnergyViolations(traj.energies, options.energy_slack);
    if (!violations.empty() && options.energy_check == EnergyCheck::Fail)
    {
      throw AssertionFailure("full-order " + violations.front());
    }
    traj.warnings = std::move(violations);
  }
  return traj;
}

Vector ProjectInitial(const std::function<double(const Point &)> &g, const DGSpace &space)
{
  const auto &rule = space.VolumeRule();
  const auto &phi = space.BasisAtQuadrature();
  Eigen::Matrix3d ref = Eigen::Matrix3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Eigen::Vector3d p = phi.row(static_cast<Index>(q)).transpose();
    ref += rule.weights[q] * p * p.transpose();
  }
  // The local mass matrix is 2|K| * ref, so the determinant factor cancels.
  const Eigen::LLT<Eigen::Matrix3d> ref_llt(ref);

  Vector u(space.NumDofs());
  for (Index k = 0; k < space.NumElements(); ++k)
  {
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const auto [xi, eta] = rule.points[q];
      rhs += rule.weights[q] * g(space.MapToPhysical(k, xi, eta)) *
             phi.row(static_cast<Index>(q)).transpose();
    }
    u.segment<3>(3 * k) = ref_llt.solve(rhs);
  }
  return u;
}

}  // namespace esmor
