// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/rom.hpp"

#include <cmath>

#include <Eigen/LU>

namespace esmor
{

RomAvfSystem::RomAvfSystem(const Matrix &psi, const ReducedOperators &red,
                           const Potential &potential, const DGSpace &space, double dt,
                           NonlinearMode mode, const DeimData *deim)
  : psi_(psi), potential_(potential), space_(space), dt_(dt), mode_(mode), deim_(deim)
{
  if (mode == NonlinearMode::Deim)
  {
    if (deim == nullptr)
    {
      throw InvalidArgument("DEIM mode requires DEIM data");
    }
    if (deim->BoundBasisSize() != psi.cols() || deim->W.rows() != psi.rows())
    {
      throw InvalidArgument("DEIM data dimensions do not match the reduced basis");
    }
  }
  mass_ = red.mass;
  half_stiffness_ = (0.5 * dt) * red.Stiffness();
  linear_ = mass_ + half_stiffness_;
}

Vector RomAvfSystem::Residual(const Vector &current, const Vector &next)
{
  Vector r = mass_ * (next - current) + half_stiffness_ * (next + current);
  if (mode_ == NonlinearMode::Exact)
  {
    const Vector g = AvfNonlinear(psi_ * current, psi_ * next, potential_, space_);
    r.noalias() += dt_ * (psi_.transpose() * g);
  }
  else
  {
    const Vector gm = DeimAvfSample(current, next, *deim_, potential_, space_);
    r.noalias() += dt_ * (deim_->psi_t_q * gm);
  }
  return r;
}

Matrix RomAvfSystem::Jacobian(const Vector &current, const Vector &next) const
{
  Matrix jac = linear_;
  if (mode_ == NonlinearMode::Exact)
  {
    const Vector a = psi_ * current;
    const Vector b = psi_ * next;
    Matrix g_psi(psi_.rows(), psi_.cols());
    for (Index k = 0; k < space_.NumElements(); ++k)
    {
      const Eigen::Matrix3d blk =
          ElementAvfJacobian(space_, k, a.segment<3>(3 * k), b.segment<3>(3 * k), potential_);
      g_psi.middleRows<3>(3 * k).noalias() = blk * psi_.middleRows<3>(3 * k);
    }
    jac.noalias() += dt_ * (psi_.transpose() * g_psi);
  }
  else
  {
    const Matrix dg = DeimAvfSampleJacobian(current, next, *deim_, potential_, space_);
    jac.noalias() += dt_ * (deim_->psi_t_q * dg);
  }
  return jac;
}

Vector RomAvfSystem::SolveJacobian(const Vector &current, const Vector &next, const Vector &rhs)
{
  return Jacobian(current, next).partialPivLu().solve(rhs);
}

Trajectory SolveRom(const Vector &initial_reduced, const ReducedOperators &red,
                    const Matrix &psi, const Potential &potential, const TimeGrid &grid,
                    const DGSpace &space, NonlinearMode mode,
                    const DeimData *deim, const RomOptions &options)
{
  if (initial_reduced.size() != psi.cols() || red.stiffness_unit.rows() != psi.cols())
  {
    throw InvalidArgument("reduced initial condition, operators and basis disagree in size");
  }
  const Index steps = grid.steps;
  Trajectory traj;
  traj.snapshots.resize(psi.cols(), steps + 1);
  traj.energies = Vector::Constant(steps + 1, std::numeric_limits<double>::quiet_NaN());
  traj.newton_iters.reserve(static_cast<std::size_t>(steps));
  traj.snapshots.col(0) = initial_reduced;

  auto energy = [&](const Vector &ur)
  {
    // (eps/2) u_r^T (Psi^T A1 Psi) u_r + int F(Psi u_r) equals E_h of the lifted state.
    return 0.5 * red.epsilon * ur.dot(red.stiffness_unit * ur) +
           IntegratePotential(psi * ur, potential, space);
  };
  if (options.compute_energy)
  {
    traj.energies[0] = energy(initial_reduced);
  }

  RomAvfSystem system(psi, red, potential, space, grid.dt, mode, deim);
  for (Index n = 0; n < steps; ++n)
  {
    const Vector current = traj.snapshots.col(n);
    StepResult step = NewtonSolve(system, current, options.newton);
    traj.snapshots.col(n + 1) = step.next;
    traj.newton_iters.push_back(step.iterations);
    if (options.compute_energy)
    {
      traj.energies[n + 1] = energy(step.next);
    }
  }

  if (options.compute_energy && options.energy_check != EnergyCheck::Off)
  {
    auto violations = EnergyViolations(traj.energies, options.energy_slack);
    if (!violations.empty() && options.energy_check == EnergyCheck::Fail)
    {
      throw AssertionFailure("reduced-order " + violations.front());
    }
    traj.warnings = std::move(violations);
  }
  return traj;
}

Matrix LiftTrajectory(const Matrix &psi, const Matrix &reduced_snapshots)
{
  return psi * reduced_snapshots;
}

}  // namespace esmor
