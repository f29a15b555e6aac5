// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "esmor/config.hpp"
#include "esmor/experiment.hpp"
#include "esmor/matrix_io.hpp"
#include "esmor/random.hpp"

using namespace esmor;
namespace fs = std::filesystem;

namespace
{

fs::path ScratchDir(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("esmor-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string SmallConfig(const fs::path &out)
{
  return "[problem]\n"
         "domain = 0, 0, 1, 1\n"
         "bc = neumann\n"
         "potential = quartic\n"
         "initial = tanh_circle\n"
         "[mesh]\n"
         "h = 0.125\n"
         "[time]\n"
         "T = 0.1\n"
         "dt = 0.01\n"
         "[parameter]\n"
         "kind = inverse_diffusivity\n"
         "train = 10, 20, 30\n"
         "test = 15\n"
         "[rom]\n"
         "n_max = 4\n"
         "tol = 1e-8\n"
         "deim_size = 20\n"
         "[run]\n"
         "output = " +
         out.string() + "\n";
}

std::string Replace(std::string text, const std::string &from, const std::string &to)
{
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("Config parsing", "[harness]")
{
  const ExperimentConfig c = ParseConfig(SmallConfig("out"));
  CHECK(c.domain.Width() == 1.0);
  CHECK(c.bc == BoundaryKind::Neumann);
  CHECK(c.potential == PotentialKind::Quartic);
  CHECK(c.h == 0.125);
  CHECK(c.sigma == 18.0);
  CHECK(c.train_set == std::vector<double>{10, 20, 30});
  CHECK(c.test_values == std::vector<double>{15});
  CHECK(c.n_max == 4);
  CHECK(c.deim_size == 20);
  CHECK(c.newton.tol == 1e-10);
  CHECK(!c.seed);

  const std::string base = SmallConfig("out");
  CHECK_THROWS_AS(ParseConfig(Replace(base, "h = 0.125", "h = -1")), ConfigError);
  CHECK_THROWS_AS(ParseConfig(Replace(base, "h = 0.125\n", "")), ConfigError);
  CHECK_THROWS_AS(ParseConfig(Replace(base, "dt = 0.01", "dt = abc")), ConfigError);
  CHECK_THROWS_AS(ParseConfig(Replace(base, "bc = neumann", "bc = dirichlet")), ConfigError);
  CHECK_THROWS_AS(ParseConfig(Replace(base, "train = 10, 20, 30", "train = 10, -2")),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfig(Replace(base, "domain = 0, 0, 1, 1", "domain = 0, 0, 1")),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfig("[problem\nfoo"), ConfigError);

  // Random initial data need a seed; the logarithmic potential needs theta_c.
  const std::string random = Replace(base, "initial = tanh_circle", "initial = random");
  CHECK_THROWS_AS(ParseConfig(random), ConfigError);
  CHECK(ParseConfig(random + "seed = 4\n").seed == 4u);
  const std::string log = Replace(base, "potential = quartic", "potential = logarithmic\ntheta = 0.1");
  CHECK_THROWS_AS(ParseConfig(log), ConfigError);
  CHECK(*ParseConfig(Replace(log, "theta = 0.1", "theta = 0.1\ntheta_c = 1.0")).theta_c == 1.0);

  CHECK_THROWS_AS(LoadConfig("/nonexistent/esmor.ini"), ConfigError);
  for (const char *name : {"quartic_neumann.ini", "log_periodic.ini", "log_periodic_desk.ini"})
  {
    CHECK_NOTHROW(LoadConfig(fs::path(ESMOR_SOURCE_DIR) / "configs" / name));
  }
}

TEST_CASE("Random initial data", "[harness]")
{
  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.015, BoundaryKind::Neumann));
  const Vector a = RandomInitial(42, space, 0.05);
  const Vector b = RandomInitial(42, space, 0.05);
  CHECK(a.size() == 26934);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((RandomInitial(43, space, 0.05) - a).norm() > 0.0);
  CHECK(a.cwiseAbs().maxCoeff() <= 0.05);
  // Uniform on [-0.05, 0.05] has standard deviation 0.05 / sqrt(3).
  const double bound = 3.0 * 0.05 / std::sqrt(3.0) / std::sqrt(static_cast<double>(a.size()));
  CHECK(std::abs(a.mean()) < bound);
  CHECK_THROWS_AS(RandomInitial(1, space, 0.0), InvalidArgument);

  // Reference draws of the documented generator.
  SplitMix64 rng(0);
  CHECK(rng.Next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.Next() == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("Matrix files", "[harness]")
{
  const fs::path dir = ScratchDir("matrix");
  Matrix m(3, 2);
  m << 1.5, -2, 0, 1e-300, 3.25, std::nextafter(1.0, 2.0);
  WriteMatrix(dir / "m.bin", m);
  CHECK(fs::file_size(dir / "m.bin") == 24 + 6 * 8);
  const Matrix back = ReadMatrix(dir / "m.bin");
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 2);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

  std::ifstream in(dir / "m.bin", std::ios::binary);
  char head[9] = {};
  in.read(head, 8);
  CHECK(std::string(head) == "ESMORMAT");

  fs::resize_file(dir / "m.bin", 30);
  CHECK_THROWS_AS(ReadMatrix(dir / "m.bin"), Error);
  std::ofstream(dir / "bad.bin") << "NOTAMATRIX-----------------------";
  CHECK_THROWS_AS(ReadMatrix(dir / "bad.bin"), Error);

  WriteIndexCsv(dir / "idx.csv", "index", {4, 0, 17});
  CHECK(ReadIndexCsv(dir / "idx.csv") == std::vector<Index>{4, 0, 17});

  const DGSpace space(BuildMesh({0, 0, 1, 1}, 0.5, BoundaryKind::Neumann));
  WriteMeshCsv(dir / "v.csv", dir / "t.csv", space.GetMesh());
  WriteCoordinate(dir / "mass.txt", AssembleMass(space));
  std::ifstream coo(dir / "mass.txt");
  Index rows, cols, nnz;
  coo >> rows >> cols >> nnz;
  CHECK(rows == 24);
  CHECK(nnz == 8 * 9);
}

TEST_CASE("Experiment parameter map", "[harness]")
{
  const Experiment exp(ParseConfig(SmallConfig("out")));
  CHECK(exp.Space().NumDofs() == 3 * 128);
  CHECK(exp.Grid().steps == 10);
  const ParameterInstance inst = exp.Instance(20.0);
  CHECK(inst.epsilon == Catch::Approx(0.05));
  CHECK(inst.potential.Kind() == PotentialKind::Quartic);
  // Inside the circle the profile is positive (its far corner sits where tanh is about
  // 0.77), far outside close to -1.
  const Index centre_elem = 2 * (4 * 8 + 4);
  CHECK(inst.initial.segment<3>(3 * centre_elem).minCoeff() > 0.7);
  CHECK(inst.initial.head<3>().maxCoeff() < -0.9);
  CHECK_THROWS_AS(exp.Instance(0.0), InvalidArgument);

  std::string log = SmallConfig("out");
  log = Replace(log, "potential = quartic", "potential = logarithmic\ntheta_c = 1.0\nepsilon = 0.04");
  log = Replace(log, "kind = inverse_diffusivity", "kind = temperature");
  log = Replace(log, "initial = tanh_circle", "initial = random\ninitial_amplitude = 0.05");
  log = Replace(log, "train = 10, 20, 30", "train = 0.05, 0.08");
  log += "seed = 7\n";
  const Experiment lexp(ParseConfig(log));
  const ParameterInstance li = lexp.Instance(0.08);
  CHECK(li.epsilon == 0.04);
  CHECK(li.potential.Theta() == 0.08);
  CHECK(li.potential.ThetaC() == 1.0);
  CHECK((li.initial - RandomInitial(7, lexp.Space(), 0.05)).norm() == 0.0);
}

TEST_CASE("Greedy artifacts and comparison", "[harness]")
{
  const fs::path dir = ScratchDir("compare");
  const Experiment exp(ParseConfig(SmallConfig(dir)));
  const GreedyResult result = PodGreedy(exp.MakeGreedyConfig(), exp.Problem());
  SaveGreedy(dir, result);
  for (const char *f : {"psi.bin", "singular_values.csv", "deim_W.bin", "deim_indices.csv",
                        "selected.csv", "indicators.csv"})
  {
    CHECK(fs::exists(dir / f));
  }
  const RomModel model = LoadModel(dir);
  CHECK((model.psi - result.psi).cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.deim.indices == result.outer_deim.indices);
  CHECK((model.deim.Q - result.outer_deim.Q).cwiseAbs().maxCoeff() == 0.0);
  CHECK(model.selected == result.selected);

  const ComparisonReport r = Compare(exp, model, 15.0, 1);
  CHECK(r.sol_err_podg >= 0.0);
  CHECK(r.sol_err_deim >= 0.0);
  CHECK(r.energy_err_podg >= 0.0);
  CHECK(r.wall_fom > 0.0);
  CHECK(r.speedup_podg == Catch::Approx(r.wall_fom / r.wall_podg));
  CHECK(r.speedup_deim == Catch::Approx(r.wall_fom / r.wall_deim));

  // Errors are reproducible; timings are not part of the contract.
  const ComparisonReport again = Compare(exp, model, 15.0, 0);
  CHECK(std::abs(again.sol_err_podg - r.sol_err_podg) <= 1e-12);
  CHECK(std::abs(again.sol_err_deim - r.sol_err_deim) <= 1e-12);
  CHECK(std::abs(again.energy_err_deim - r.energy_err_deim) <= 1e-12);

  AppendReportCsv(dir / "report.csv", r);
  AppendReportCsv(dir / "report.csv", again);
  std::ifstream in(dir / "report.csv");
  std::string line;
  int lines = 0, headers = 0;
  while (std::getline(in, line))
  {
    ++lines;
    headers += line.rfind("mu,", 0) == 0 ? 1 : 0;
  }
  CHECK(lines == 3);
  CHECK(headers == 1);
}

TEST_CASE("Command-line exit codes", "[harness]")
{
  const std::string cli = ESMOR_CLI_PATH;
  if (cli.empty())
  {
    SKIP("command-line driver not built");
  }
  const fs::path dir = ScratchDir("cli");
  {
    std::ofstream(dir / "small.ini") << SmallConfig(dir / "out");
    std::ofstream(dir / "broken.ini") << Replace(SmallConfig(dir / "out"), "h = 0.125", "h = 0");
  }
  auto run = [&](const std::string &args)
  {
    const std::string cmd = cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const std::string cfg = "--config " + (dir / "small.ini").string();
  CHECK(run("fom " + cfg + " --mu 20") == 0);
  CHECK(fs::exists(dir / "out" / "fom_trajectory.bin"));
  CHECK(fs::exists(dir / "out" / "fom_energy.csv"));
  CHECK(run("fom " + cfg) == 2);
  CHECK(run("fom --config " + (dir / "broken.ini").string() + " --mu 20") == 2);
  CHECK(run("rom " + cfg + " --mu 20") == 3);  // no model yet
  CHECK(run("greedy " + cfg) == 0);
  CHECK(run("rom " + cfg + " --mu 15 --mode deim") == 0);
  std::ifstream log(dir / "log.txt");
  std::stringstream text;
  text << log.rdbuf();
  CHECK(text.str().find("full nonlinear evaluations 0") != std::string::npos);
  CHECK(run("rom " + cfg + " --mu 15 --mode exact") == 0);
  CHECK(run("rom " + cfg + " --mu 15 --mode fancy") == 2);
  CHECK(run("compare " + cfg + " --mu 15 --repetitions 1") == 0);
  CHECK(run("stability " + cfg + " --mu 15") == 0);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(fs::exists(dir / "out" / "stability.csv"));
}
