// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esmor/avf.hpp"
#include "esmor/deim.hpp"
#include "esmor/pod.hpp"
#include "esmor/rom.hpp"

namespace esmor
{

// Everything that changes with the parameter mu: the diffusivity, the potential and the
// full-order initial condition.
struct ParameterInstance
{
  double epsilon = 1.0;
  Potential potential = Potential::Quartic();
  Vector initial;
};

struct ParametrizedProblem
{
  const DGSpace *space = nullptr;
  const FomOperators *ops = nullptr;
  TimeGrid grid;
  std::function<ParameterInstance(double mu)> instance;
};

enum class IndicatorNorm
{
  DualH1,      // sqrt(r^T K^{-1} r), K = M + A1 (unit diffusivity, with jump penalty)
  L2Surrogate  // sqrt(r^T M^{-1} r)
};

enum class IndicatorNonlinear
{
  Deim,   // nonlinear residual term through the DEIM surrogate Q P^T G
  Exact   // full-length AVF nonlinear vector
};

// Dual norm of full-order residual vectors. K is factorised once.
class ResidualNorm
{
public:
  ResidualNorm(const FomOperators &ops, IndicatorNorm kind);
  ~ResidualNorm();
  ResidualNorm(ResidualNorm &&) noexcept;
  ResidualNorm &operator=(ResidualNorm &&) noexcept;

  double operator()(const Vector &r) const;
  IndicatorNorm Kind() const { return kind_; }

private:
  struct Impl;
  IndicatorNorm kind_;
  std::unique_ptr<Impl> impl_;
};

// Full-order AVF residual of a lifted reduced trajectory at every time level n >= 1,
//   R^n = M (u^n - u^{n-1}) / dt + (eps/2) A1 (u^n + u^{n-1}) + G(u^{n-1}, u^n),
// combined into (dt sum_n ||R^n||_{H^-1})^{1/2}. With `deim` set, G is replaced by its DEIM
// surrogate (the data must be bound to psi).
double ErrorIndicator(const Trajectory &reduced, const Matrix &psi, double epsilon,
                      const Potential &potential, const TimeGrid &grid, const DGSpace &space,
                      const FomOperators &ops, const ResidualNorm &norm,
                      const DeimData *deim = nullptr);

struct Projection
{
  Vector projection;
  Vector error;
};

// M-orthogonal projection onto span(psi); an empty basis projects to zero.
Projection ProjectOntoBasis(const Vector &u, const Matrix &psi, const SparseMatrix &mass);

struct GreedyConfig
{
  std::vector<double> train_set;
  double tol = 1e-3;
  Index n_max = 20;
  IndicatorNorm indicator_norm = IndicatorNorm::DualH1;
  IndicatorNonlinear indicator_nonlinear = IndicatorNonlinear::Deim;
  double inner_deim_rank_cutoff = 1e-10;
  Index inner_deim_max = 100;
  Index outer_deim_size = 50;
  NewtonConfig newton;

  void Validate() const;
};

struct GreedyIteration;

// Called after every completed iteration, e.g. for progress output.
using GreedyObserver = std::function<void(const GreedyIteration &)>;

struct GreedyIteration
{
  Index basis_size = 0;
  Index selected_index = 0;           // training index whose FOM extended the basis
  std::vector<double> indicators;     // Delta_N(mu_i), NaN where the ROM solve failed
  std::vector<bool> rom_failed;
  std::vector<Index> inner_deim_sizes;
  Index argmax = 0;
  double max_indicator = 0.0;
  double wall_seconds = 0.0;
};

struct GreedyResult
{
  Matrix psi;
  Vector extension_singular_values;  // leading singular value of each error POD
  DeimData outer_deim;               // bound to psi
  std::vector<double> selected;      // mu* per iteration, in order
  std::vector<Index> selected_indices;
  std::vector<GreedyIteration> history;
  std::string termination;           // "tol" or "n_max"
  std::vector<Index> cached_indices; // training indices with a stored FOM trajectory
  std::vector<Trajectory> fom_cache; // parallel to cached_indices
  Index fom_solves = 0;
  Index cache_hits = 0;
};

GreedyResult PodGreedy(const GreedyConfig &config, const ParametrizedProblem &problem,
                       const GreedyObserver &observer = {});

}  // namespace esmor
