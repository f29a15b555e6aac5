// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "esmor/config.hpp"
#include "esmor/deim.hpp"
#include "esmor/greedy.hpp"

namespace esmor
{

// Discretisation and parameter map of one configured study. Owns the space and operators.
class Experiment
{
public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig &Config() const { return config_; }
  const DGSpace &Space() const { return *space_; }
  const FomOperators &Ops() const { return ops_; }
  const TimeGrid &Grid() const { return grid_; }

  // Diffusivity, potential and projected initial condition at parameter value mu.
  ParameterInstance Instance(double mu) const;

  ParametrizedProblem Problem() const;
  GreedyConfig MakeGreedyConfig() const;

private:
  ExperimentConfig config_;
  std::unique_ptr<DGSpace> space_;
  FomOperators ops_;
  TimeGrid grid_;
};

// Online data of a reduced model: the basis, the DEIM interpolant bound to it and the
// parameters it was trained on.
struct RomModel
{
  Matrix psi;
  Vector singular_values;
  DeimData deim;
  std::vector<double> selected;
};

RomModel ModelFromGreedy(const GreedyResult &result);

// Writes psi.bin, singular_values.csv, deim_W.bin, deim_indices.csv, selected.csv and
// indicators.csv (one row per greedy iteration and training parameter) into `dir`.
void SaveGreedy(const std::filesystem::path &dir, const GreedyResult &result);

// Reads what SaveGreedy wrote. The DEIM indices are reselected from W and must match the
// stored ones.
RomModel LoadModel(const std::filesystem::path &dir);

struct ComparisonReport
{
  double mu = 0.0;
  Index basis_size = 0;
  Index deim_size = 0;
  double sol_err_podg = 0.0;
  double sol_err_deim = 0.0;
  double energy_err_podg = 0.0;
  double energy_err_deim = 0.0;
  double wall_fom = 0.0;
  double wall_podg = 0.0;
  double wall_deim = 0.0;
  double speedup_podg = 0.0;
  double speedup_deim = 0.0;
  double newton_fom = 0.0;  // mean Newton iterations per step
  double newton_podg = 0.0;
  double newton_deim = 0.0;
};

// Solves FOM, PODG and PODG-DEIM at mu, checks FOM energy monotonicity, and measures the
// online wall time of each as the best of `repetitions` runs (energies off while timed).
// repetitions = 0 skips timing.
ComparisonReport Compare(const Experiment &experiment, const RomModel &model, double mu,
                         int repetitions = 3);

// Appends one row, writing the header first if the file is new or empty.
void AppendReportCsv(const std::filesystem::path &path, const ComparisonReport &report);

}  // namespace esmor
