// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "esmor/avf.hpp"
#include "esmor/deim.hpp"
#include "esmor/pod.hpp"

namespace esmor
{

enum class NonlinearMode
{
  Exact,  // Psi^T f(Psi u_r), full-length evaluation
  Deim    // Psi^T Q f_m(Psi u_r), sampled entries only
};

// Reduced AVF step
//   Mr (next - current) + dt/2 Ar (next + current) + dt Psi^T G(current, next) = 0,
// where G is the full-order AVF nonlinear vector or its DEIM surrogate Q P^T G.
class RomAvfSystem : public AvfSystem
{
public:
  RomAvfSystem(const Matrix &psi, const ReducedOperators &red, const Potential &potential,
               const DGSpace &space, double dt, NonlinearMode mode, const DeimData *deim);

  Vector Residual(const Vector &current, const Vector &next) override;
  Vector SolveJacobian(const Vector &current, const Vector &next, const Vector &rhs) override;
  Matrix Jacobian(const Vector &current, const Vector &next) const;

private:
  const Matrix &psi_;
  const Potential &potential_;
  const DGSpace &space_;
  double dt_;
  NonlinearMode mode_;
  const DeimData *deim_;
  Matrix linear_;  // Mr + dt/2 Ar
  Matrix mass_;    // Mr
  Matrix half_stiffness_;  // dt/2 Ar
};

struct RomOptions
{
  NewtonConfig newton;
  EnergyCheck energy_check = EnergyCheck::Warn;
  double energy_slack = 1e-8;
  // Energies of the lifted solution cost a full-order potential integral per step.
  bool compute_energy = true;
};

// Reduced trajectory (columns are reduced coefficient vectors) with the energy trace of the
// lifted solution E_h(Psi u_r^n) when requested (NaN otherwise).
Trajectory SolveRom(const Vector &initial_reduced, const ReducedOperators &red,
                    const Matrix &psi, const Potential &potential, const TimeGrid &grid,
                    const DGSpace &space, NonlinearMode mode,
                    const DeimData *deim, const RomOptions &options = {});

// Lifts every column of a reduced trajectory.
Matrix LiftTrajectory(const Matrix &psi, const Matrix &reduced_snapshots);

}  // namespace esmor
