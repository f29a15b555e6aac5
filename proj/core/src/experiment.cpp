// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "esmor/matrix_io.hpp"
#include "esmor/metrics.hpp"
#include "esmor/random.hpp"

namespace esmor
{

namespace
{

double Seconds(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename F>
double BestOf(int repetitions, F &&run)
{
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repetitions; ++r)
  {
    const auto start = std::chrono::steady_clock::now();
    run();
    best = std::min(best, Seconds(start));
  }
  return best;
}

std::vector<double> ReadValueCsv(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidArgument("cannot open " + path.string());
  }
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> out;
  while (std::getline(in, line))
  {
    if (!line.empty())
    {
      out.push_back(std::stod(line));
    }
  }
  return out;
}

}  // namespace

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config))
{
  config_.Validate();
  space_ = std::make_unique<DGSpace>(BuildMesh(config_.domain, config_.h, config_.bc),
                                     config_.sigma);
  ops_ = AssembleOperators(*space_);
  // Coercivity guard for the chosen penalty: u^T A1 u >= 0 on random directions.
  if (MinRandomRayleighQuotient(ops_.stiffness_unit, 100, 0x5eed) < -1e-10)
  {
    throw AssertionFailure("stiffness matrix is indefinite; increase mesh.sigma");
  }
  grid_ = TimeGrid::Uniform(config_.t0, config_.T, config_.dt);
}

ParameterInstance Experiment::Instance(double mu) const
{
  if (!(mu > 0.0))
  {
    throw InvalidArgument("parameter value must be positive");
  }
  ParameterInstance inst;
  const bool temperature = config_.parameter == ParameterKind::Temperature;
  inst.epsilon = temperature ? config_.epsilon : 1.0 / mu;
  if (config_.potential == PotentialKind::Quartic)
  {
    inst.potential = Potential::Quartic();
  }
  else
  {
    inst.potential =
        Potential::Logarithmic(temperature ? mu : config_.theta, config_.theta_c.value());
    inst.potential.SetClamping(config_.clamp, config_.clamp_delta);
  }

  if (config_.initial == InitialKind::Random)
  {
    inst.initial = RandomInitial(*config_.seed, *space_, config_.initial_amplitude);
  }
  else
  {
    const Rectangle &d = config_.domain;
    const Point centre(0.5 * (d.x0 + d.x1), 0.5 * (d.y0 + d.y1));
    const double width = std::sqrt(2.0) * inst.epsilon;
    inst.initial = ProjectInitial(
        [&](const Point &x) { return std::tanh((0.25 - (x - centre).norm()) / width); },
        *space_);
  }
  return inst;
}

ParametrizedProblem Experiment::Problem() const
{
  ParametrizedProblem p;
  p.space = space_.get();
  p.ops = &ops_;
  p.grid = grid_;
  p.instance = [this](double mu) { return Instance(mu); };
  return p;
}

GreedyConfig Experiment::MakeGreedyConfig() const
{
  GreedyConfig g;
  g.train_set = config_.train_set;
  g.tol = config_.tol;
  g.n_max = config_.n_max;
  g.indicator_norm = config_.indicator_norm;
  g.indicator_nonlinear = config_.indicator_nonlinear;
  g.inner_deim_rank_cutoff = config_.inner_deim_rank_cutoff;
  g.inner_deim_max = config_.inner_deim_max;
  g.outer_deim_size = config_.deim_size;
  g.newton = config_.newton;
  return g;
}

RomModel ModelFromGreedy(const GreedyResult &result)
{
  RomModel model;
  model.psi = result.psi;
  model.singular_values = result.extension_singular_values;
  model.deim = result.outer_deim;
  model.selected = result.selected;
  return model;
}

void SaveGreedy(const std::filesystem::path &dir, const GreedyResult &result)
{
  std::filesystem::create_directories(dir);
  WriteMatrix(dir / "psi.bin", result.psi);
  WriteColumnCsv(dir / "singular_values.csv", "sigma", result.extension_singular_values);
  WriteMatrix(dir / "deim_W.bin", result.outer_deim.W);
  WriteIndexCsv(dir / "deim_indices.csv", "index", result.outer_deim.indices);
  WriteColumnCsv(dir / "selected.csv", "mu",
                 Eigen::Map<const Vector>(result.selected.data(),
                                          static_cast<Index>(result.selected.size())));

  std::ofstream out(dir / "indicators.csv");
  out << "iteration,basis_size,train_index,indicator,rom_failed,selected\n";
  out.precision(17);
  for (std::size_t it = 0; it < result.history.size(); ++it)
  {
    const GreedyIteration &h = result.history[it];
    for (std::size_t i = 0; i < h.indicators.size(); ++i)
    {
      out << it + 1 << ',' << h.basis_size << ',' << i << ',' << h.indicators[i] << ','
          << (h.rom_failed[i] ? 1 : 0) << ','
          << (static_cast<Index>(i) == h.argmax ? 1 : 0) << '\n';
    }
  }
  if (!out)
  {
    throw Error("failed writing " + (dir / "indicators.csv").string());
  }
}

RomModel LoadModel(const std::filesystem::path &dir)
{
  RomModel model;
  model.psi = ReadMatrix(dir / "psi.bin");
  const auto sv = ReadValueCsv(dir / "singular_values.csv");
  model.singular_values = Eigen::Map<const Vector>(sv.data(), static_cast<Index>(sv.size()));
  model.selected = ReadValueCsv(dir / "selected.csv");

  const Matrix W = ReadMatrix(dir / "deim_W.bin");
  if (W.rows() != model.psi.rows())
  {
    throw InvalidArgument("DEIM basis and reduced basis have different row counts");
  }
  model.deim = DeimSelect(W);
  if (model.deim.indices != ReadIndexCsv(dir / "deim_indices.csv"))
  {
    throw AssertionFailure("stored DEIM indices do not match the reselected ones");
  }
  BindToBasis(model.deim, model.psi);
  return model;
}

ComparisonReport Compare(const Experiment &experiment, const RomModel &model, double mu,
                         int repetitions)
{
  const DGSpace &space = experiment.Space();
  const FomOperators &ops = experiment.Ops();
  const TimeGrid &grid = experiment.Grid();
  const ParameterInstance inst = experiment.Instance(mu);
  const NewtonConfig &newton = experiment.Config().newton;

  FomOptions fom_options;
  fom_options.newton = newton;
  fom_options.energy_check = EnergyCheck::Fail;  // guard before anything is reported
  const Trajectory fom =
      SolveFom(inst.initial, ops, inst.potential, inst.epsilon, grid, space, fom_options);

  const ReducedOperators red = BuildReducedOperators(model.psi, ops, inst.epsilon);
  const Vector ur0 = ProjectCoefficients(model.psi, ops.mass, inst.initial);
  RomOptions rom_options;
  rom_options.newton = newton;
  const Trajectory podg = SolveRom(ur0, red, model.psi, inst.potential, grid, space,
                                   NonlinearMode::Exact, nullptr, rom_options);
  const Trajectory deim = SolveRom(ur0, red, model.psi, inst.potential, grid, space,
                                   NonlinearMode::Deim, &model.deim, rom_options);

  ComparisonReport r;
  r.mu = mu;
  r.basis_size = model.psi.cols();
  r.deim_size = model.deim.Size();
  r.sol_err_podg =
      L2TimeError(fom.snapshots, LiftTrajectory(model.psi, podg.snapshots), ops.mass, grid.dt);
  r.sol_err_deim =
      L2TimeError(fom.snapshots, LiftTrajectory(model.psi, deim.snapshots), ops.mass, grid.dt);
  r.energy_err_podg = LinfEnergyError(fom.energies, podg.energies);
  r.energy_err_deim = LinfEnergyError(fom.energies, deim.energies);
  r.newton_fom = fom.MeanNewtonIterations();
  r.newton_podg = podg.MeanNewtonIterations();
  r.newton_deim = deim.MeanNewtonIterations();

  if (repetitions > 0)
  {
    FomOptions timed_fom = fom_options;
    timed_fom.energy_check = EnergyCheck::Off;
    timed_fom.compute_energy = false;
    RomOptions timed_rom = rom_options;
    timed_rom.energy_check = EnergyCheck::Off;
    timed_rom.compute_energy = false;

    r.wall_fom = BestOf(repetitions, [&]
                        { SolveFom(inst.initial, ops, inst.potential, inst.epsilon, grid,
                                   space, timed_fom); });
    r.wall_podg = BestOf(repetitions, [&]
                         {
                           const ReducedOperators ro =
                               BuildReducedOperators(model.psi, ops, inst.epsilon);
                           SolveRom(ProjectCoefficients(model.psi, ops.mass, inst.initial), ro,
                                    model.psi, inst.potential, grid, space,
                                    NonlinearMode::Exact, nullptr, timed_rom);
                         });
    r.wall_deim = BestOf(repetitions, [&]
                         {
                           const ReducedOperators ro =
                               BuildReducedOperators(model.psi, ops, inst.epsilon);
                           SolveRom(ProjectCoefficients(model.psi, ops.mass, inst.initial), ro,
                                    model.psi, inst.potential, grid, space,
                                    NonlinearMode::Deim, &model.deim, timed_rom);
                         });
    r.speedup_podg = r.wall_fom / r.wall_podg;
    r.speedup_deim = r.wall_fom / r.wall_deim;
  }
  return r;
}

void AppendReportCsv(const std::filesystem::path &path, const ComparisonReport &r)
{
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::app);
  if (fresh)
  {
    out << "mu,N,M,sol_err_podg,sol_err_deim,energy_err_podg,energy_err_deim,wall_fom,"
           "wall_podg,wall_deim,speedup_podg,speedup_deim,newton_fom,newton_podg,"
           "newton_deim\n";
  }
  out.precision(17);
  out << r.mu << ',' << r.basis_size << ',' << r.deim_size << ',' << r.sol_err_podg << ','
      << r.sol_err_deim << ',' << r.energy_err_podg << ',' << r.energy_err_deim << ','
      << r.wall_fom << ',' << r.wall_podg << ',' << r.wall_deim << ',' << r.speedup_podg << ','
      << r.speedup_deim << ',' << r.newton_fom << ',' << r.newton_podg << ','
      << r.newton_deim << '\n';
  if (!out)
  {
    throw Error("failed writing " + path.string());
  }
}

}  // namespace esmor
