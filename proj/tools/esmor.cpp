// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: fom | greedy | rom | compare | bench | stability.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "esmor/experiment.hpp"
#include "esmor/matrix_io.hpp"

namespace fs = std::filesystem;
using namespace esmor;

namespace
{

enum ExitCode
{
  kOk = 0,
  kConfig = 2,
  kSolver = 3,
  kAssertion = 4
};

struct Options
{
  std::string config;
  std::optional<double> mu;
  std::string mode = "deim";
  std::string out;
  std::string model;
  std::optional<std::uint64_t> seed;
  int repetitions = 3;
};

ExperimentConfig Load(const Options &opt)
{
  ExperimentConfig cfg = LoadConfig(opt.config);
  if (opt.seed)
  {
    cfg.seed = *opt.seed;
  }
  if (!opt.out.empty())
  {
    cfg.output = opt.out;
  }
  cfg.Validate();
  return cfg;
}

double RequireMu(const Options &opt)
{
  if (!opt.mu)
  {
    throw ConfigError("--mu is required for this subcommand");
  }
  return *opt.mu;
}

fs::path ModelDir(const Options &opt, const ExperimentConfig &cfg)
{
  return opt.model.empty() ? cfg.output : fs::path(opt.model);
}

Vector Times(const TimeGrid &grid)
{
  Vector t(grid.steps + 1);
  for (Index n = 0; n <= grid.steps; ++n)
  {
    t[n] = grid.Time(n);
  }
  return t;
}

void WriteNewton(const fs::path &path, const Trajectory &traj)
{
  std::ofstream out(path);
  out << "step,iterations\n";
  for (std::size_t n = 0; n < traj.newton_iters.size(); ++n)
  {
    out << n + 1 << ',' << traj.newton_iters[n] << '\n';
  }
}

void PrintReport(const ComparisonReport &r, bool timings)
{
  std::printf("mu               %.6g\n", r.mu);
  std::printf("N, M             %lld, %lld\n", static_cast<long long>(r.basis_size),
              static_cast<long long>(r.deim_size));
  std::printf("sol_err_podg     %.3e\n", r.sol_err_podg);
  std::printf("sol_err_deim     %.3e\n", r.sol_err_deim);
  std::printf("energy_err_podg  %.3e\n", r.energy_err_podg);
  std::printf("energy_err_deim  %.3e\n", r.energy_err_deim);
  std::printf("newton fom/podg/deim  %.2f / %.2f / %.2f\n", r.newton_fom, r.newton_podg,
              r.newton_deim);
  if (timings)
  {
    std::printf("wall fom/podg/deim    %.3f / %.3f / %.3f s\n", r.wall_fom, r.wall_podg,
                r.wall_deim);
    std::printf("speedup podg/deim     %.2f / %.2f\n", r.speedup_podg, r.speedup_deim);
  }
}

int RunFom(const Options &opt)
{
  const ExperimentConfig cfg = Load(opt);
  const double mu = RequireMu(opt);
  const Experiment exp(cfg);
  const ParameterInstance inst = exp.Instance(mu);

  FomOptions fo;
  fo.newton = cfg.newton;
  fo.record_nonlinear = false;
  fo.energy_check = EnergyCheck::Fail;
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = SolveFom(inst.initial, exp.Ops(), inst.potential, inst.epsilon,
                                   exp.Grid(), exp.Space(), fo);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  WriteMatrix(dir / "fom_trajectory.bin", traj.snapshots);
  WriteEnergyCsv(dir / "fom_energy.csv", Times(exp.Grid()), traj.energies);
  WriteNewton(dir / "fom_newton.csv", traj);
  WriteMeshCsv(dir / "vertices.csv", dir / "triangles.csv", exp.Space().GetMesh());

  std::printf("dofs %lld, steps %lld, mean Newton %.2f, wall %.2f s\n",
              static_cast<long long>(exp.Space().NumDofs()),
              static_cast<long long>(traj.Steps()), traj.MeanNewtonIterations(), wall);
  std::printf("energy %.10g -> %.10g (non-increasing)\n", traj.energies[0],
              traj.energies[traj.energies.size() - 1]);
  return kOk;
}

int RunGreedy(const Options &opt)
{
  const ExperimentConfig cfg = Load(opt);
  const Experiment exp(cfg);
  const GreedyResult result =
      PodGreedy(exp.MakeGreedyConfig(), exp.Problem(),
                [&](const GreedyIteration &h)
                {
                  std::printf("N=%2lld  max indicator %.3e at mu=%.6g  (%.1f s)\n",
                              static_cast<long long>(h.basis_size), h.max_indicator,
                              cfg.train_set[static_cast<std::size_t>(h.argmax)],
                              h.wall_seconds);
                  std::fflush(stdout);
                });
  SaveGreedy(cfg.output, result);
  std::printf("terminated by %s; N=%lld, M=%lld, FOM solves %lld, cache hits %lld\n",
              result.termination.c_str(), static_cast<long long>(result.psi.cols()),
              static_cast<long long>(result.outer_deim.Size()),
              static_cast<long long>(result.fom_solves),
              static_cast<long long>(result.cache_hits));
  return kOk;
}

int RunRom(const Options &opt)
{
  const ExperimentConfig cfg = Load(opt);
  const double mu = RequireMu(opt);
  NonlinearMode mode;
  if (opt.mode == "exact")
  {
    mode = NonlinearMode::Exact;
  }
  else if (opt.mode == "deim")
  {
    mode = NonlinearMode::Deim;
  }
  else
  {
    throw ConfigError("--mode must be exact or deim");
  }

  const Experiment exp(cfg);
  const RomModel model = LoadModel(ModelDir(opt, cfg));
  const ParameterInstance inst = exp.Instance(mu);
  const ReducedOperators red = BuildReducedOperators(model.psi, exp.Ops(), inst.epsilon);
  const Vector ur0 = ProjectCoefficients(model.psi, exp.Ops().mass, inst.initial);

  RomOptions ro;
  ro.newton = cfg.newton;
  ro.compute_energy = false;
  const std::uint64_t before = FullNonlinearEvaluationCount();
  const auto start = std::chrono::steady_clock::now();
  Trajectory traj = SolveRom(ur0, red, model.psi, inst.potential, exp.Grid(), exp.Space(),
                             mode, mode == NonlinearMode::Deim ? &model.deim : nullptr, ro);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::uint64_t full_evals = FullNonlinearEvaluationCount() - before;

  // Energies of the lifted solution, outside the timed online loop.
  const Matrix lifted = LiftTrajectory(model.psi, traj.snapshots);
  Vector energies(lifted.cols());
  for (Index n = 0; n < lifted.cols(); ++n)
  {
    energies[n] = DiscreteEnergyMatrixForm(lifted.col(n), exp.Ops(), inst.epsilon,
                                           inst.potential, exp.Space());
  }

  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  const std::string tag = "rom_" + opt.mode;
  WriteMatrix(dir / (tag + "_reduced.bin"), traj.snapshots);
  WriteEnergyCsv(dir / (tag + "_energy.csv"), Times(exp.Grid()), energies);
  WriteNewton(dir / (tag + "_newton.csv"), traj);

  std::printf("mode %s, N=%lld, steps %lld, mean Newton %.2f, wall %.4f s, full nonlinear "
              "evaluations %llu\n",
              opt.mode.c_str(), static_cast<long long>(model.psi.cols()),
              static_cast<long long>(traj.Steps()), traj.MeanNewtonIterations(), wall,
              static_cast<unsigned long long>(full_evals));
  for (const auto &w : EnergyViolations(energies, ro.energy_slack))
  {
    std::printf("warning: %s\n", w.c_str());
  }
  if (mode == NonlinearMode::Deim && full_evals != 0)
  {
    throw AssertionFailure("DEIM online loop performed full-length nonlinear evaluations");
  }
  return kOk;
}

int RunCompare(const Options &opt, int repetitions)
{
  const ExperimentConfig cfg = Load(opt);
  const double mu = RequireMu(opt);
  const Experiment exp(cfg);
  const RomModel model = LoadModel(ModelDir(opt, cfg));
  const ComparisonReport r = Compare(exp, model, mu, repetitions);
  AppendReportCsv(fs::path(cfg.output) / "report.csv", r);
  PrintReport(r, repetitions > 0);
  return kOk;
}

int RunStability(const Options &opt)
{
  const ExperimentConfig cfg = Load(opt);
  const double mu = RequireMu(opt);
  const Experiment exp(cfg);
  const RomModel model = LoadModel(ModelDir(opt, cfg));
  const ParameterInstance inst = exp.Instance(mu);
  const ReducedOperators red = BuildReducedOperators(model.psi, exp.Ops(), inst.epsilon);
  const Vector ur0 = ProjectCoefficients(model.psi, exp.Ops().mass, inst.initial);
  RomOptions ro;
  ro.newton = cfg.newton;
  const Trajectory traj = SolveRom(ur0, red, model.psi, inst.potential, exp.Grid(),
                                   exp.Space(), NonlinearMode::Deim, &model.deim, ro);
  const StabilityReport s = StabilityBounds(traj, model.psi, model.deim, exp.Ops(),
                                            inst.potential, exp.Space(), exp.Grid().dt);

  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "stability.csv");
    out.precision(17);
    out << "step,step_norm,defect,bound\n";
    for (std::size_t n = 0; n < s.per_step_bounds.size(); ++n)
    {
      out << n << ',' << s.step_norms[n] << ',' << s.defects[n] << ',' << s.per_step_bounds[n]
          << '\n';
    }
  }
  std::printf("||R^-1|| %.4e, ||(P^T W)^-1|| %.4e\n", s.norm_r_inv, s.norm_ptw_inv);
  std::printf("global bound %.4e, dt %.4e, satisfied %s, steps below dt %lld\n",
              s.global_bound, s.dt_used, s.satisfied ? "true" : "false",
              static_cast<long long>(s.steps_violating));
  for (const auto &n : s.notes)
  {
    std::printf("note: %s\n", n.c_str());
  }
  const auto increases = EnergyViolations(traj.energies, ro.energy_slack);
  std::printf("lifted ROM energy increases: %zu\n", increases.size());
  return kOk;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Energy-stable reduced-order modelling of Allen-Cahn equations"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App *sub, bool needs_mu, bool needs_model)
  {
    sub->add_option("--config", opt.config, "Experiment configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (overrides run.output)");
    sub->add_option("--seed", opt.seed, "Seed for random initial data (overrides run.seed)");
    if (needs_mu)
    {
      sub->add_option("--mu", opt.mu, "Parameter value")->required();
    }
    if (needs_model)
    {
      sub->add_option("--model", opt.model,
                      "Directory holding greedy output (defaults to the output directory)");
    }
  };

  auto *fom = app.add_subcommand("fom", "Solve the full-order model");
  common(fom, true, false);
  auto *greedy = app.add_subcommand("greedy", "Build the reduced basis and DEIM interpolant");
  common(greedy, false, false);
  auto *rom = app.add_subcommand("rom", "Solve the reduced model at one parameter");
  common(rom, true, true);
  rom->add_option("--mode", opt.mode, "Nonlinear treatment")
      ->check(CLI::IsMember({"exact", "deim"}));
  auto *compare = app.add_subcommand("compare", "Errors and timings of PODG and PODG-DEIM");
  common(compare, true, true);
  compare->add_option("--repetitions", opt.repetitions, "Timed repetitions (0 skips timing)")
      ->check(CLI::NonNegativeNumber);
  auto *bench = app.add_subcommand("bench", "Online timings, best of three");
  common(bench, true, true);
  auto *stability = app.add_subcommand("stability", "DEIM time-step stability bounds");
  common(stability, true, true);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try
  {
    if (*fom)
    {
      return RunFom(opt);
    }
    if (*greedy)
    {
      return RunGreedy(opt);
    }
    if (*rom)
    {
      return RunRom(opt);
    }
    if (*compare)
    {
      return RunCompare(opt, opt.repetitions);
    }
    if (*bench)
    {
      return RunCompare(opt, 3);
    }
    if (*stability)
    {
      return RunStability(opt);
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "esmor: config error: " << e.what() << '\n';
    return kConfig;
  }
  catch (const AssertionFailure &e)
  {
    std::cerr << "esmor: assertion failed: " << e.what() << '\n';
    return kAssertion;
  }
  catch (const std::exception &e)
  {
    std::cerr << "esmor: " << e.what() << '\n';
    return kSolver;
  }
  return kSolver;
}
