// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "esmor/common.hpp"
#include "esmor/dg_space.hpp"
#include "esmor/operators.hpp"
#include "esmor/potential.hpp"

namespace esmor
{

// Uniform partition t0 < t0 + dt < ... < t0 + J dt = T.
struct TimeGrid
{
  double t0 = 0.0;
  double T = 1.0;
  double dt = 0.01;
  Index steps = 100;

  // Throws InvalidArgument unless (T - t0) / dt is an integer to 1e-9 relative.
  static TimeGrid Uniform(double t0, double T, double dt);

  double Time(Index n) const { return t0 + static_cast<double>(n) * dt; }
};

struct NewtonConfig
{
  double tol = 1e-10;        // on the residual 2-norm
  double step_tol = 1e-12;   // on the update infinity-norm
  int max_iters = 25;
};

enum class EnergyCheck
{
  Fail,
  Warn,
  Off
};

struct Trajectory
{
  Matrix snapshots;               // column n holds u^n, n = 0..J
  Vector energies;                // E_h(u^n)
  std::vector<int> newton_iters;  // per step
  Matrix nonlinear;               // column n - 1 holds f(u^n), n = 1..J (if recorded)
  std::vector<std::string> warnings;

  Index Steps() const { return static_cast<Index>(newton_iters.size()); }
  double MeanNewtonIterations() const;
};

// One AVF step seen as a nonlinear system R(next) = 0 for a fixed current state. Full- and
// reduced-order models implement this, and share the Newton driver below.
class AvfSystem
{
public:
  virtual ~AvfSystem() = default;

  virtual Vector Residual(const Vector &current, const Vector &next) = 0;

  // Solves J(next) delta = rhs with J = dR/dnext.
  virtual Vector SolveJacobian(const Vector &current, const Vector &next, const Vector &rhs) = 0;
};

struct StepResult
{
  Vector next;
  int iterations = 0;
  double residual_norm = 0.0;
};

// Newton iteration warm-started from `current`, with step halving until the residual norm
// decreases. Converged when ||R||_2 <= tol or the last update satisfies
// ||delta||_inf <= step_tol; NewtonDivergence after max_iters.
StepResult NewtonSolve(AvfSystem &system, const Vector &current, const NewtonConfig &cfg);

// Full-order AVF residual
//   M (next - current) + dt/2 eps A1 (next + current)
//     + dt int_0^1 f(tau next + (1 - tau) current) dtau   (tested against phi_i).
Vector AvfResidual(const Vector &next, const Vector &current, const FomOperators &ops,
                   const Potential &potential, double epsilon, double dt, const DGSpace &space);

// Full-order step system with a sparse LDL^T factorization of the Newton matrix
// M + dt/2 eps A1 + dt dG/dnext. The sparsity pattern is analysed once.
class FomAvfSystem : public AvfSystem
{
public:
  FomAvfSystem(const DGSpace &space, const FomOperators &ops, const Potential &potential,
               double epsilon, double dt);
  ~FomAvfSystem() override;

  Vector Residual(const Vector &current, const Vector &next) override;
  Vector SolveJacobian(const Vector &current, const Vector &next, const Vector &rhs) override;

  // Assembled Newton matrix at (current, next), for testing.
  SparseMatrix Jacobian(const Vector &current, const Vector &next) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

StepResult AvfStep(const Vector &current, const FomOperators &ops, const Potential &potential,
                   double epsilon, double dt, const NewtonConfig &cfg, const DGSpace &space);

struct FomOptions
{
  NewtonConfig newton;
  EnergyCheck energy_check = EnergyCheck::Fail;
  double energy_slack = 1e-10;
  bool record_nonlinear = false;
  bool compute_energy = true;  // when false energies are NaN and no check is made
};

// Integrates the full-order model over the grid and records the energy trace. Energy
// monotonicity is checked after the run according to options.energy_check.
Trajectory SolveFom(const Vector &initial, const FomOperators &ops, const Potential &potential,
                    double epsilon, const TimeGrid &grid, const DGSpace &space,
                    const FomOptions &options = {});

// Checks E^{n+1} - E^n <= slack for all n; returns a message per violation.
std::vector<std::string> EnergyViolations(const Vector &energies, double slack);

// Elementwise L2 projection of g onto the dG space.
Vector ProjectInitial(const std::function<double(const Point &)> &g, const DGSpace &space);

}  // namespace esmor
