// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/config.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace esmor
{

namespace
{

namespace pt = boost::property_tree;

template <typename T>
T Required(const pt::ptree &tree, const std::string &key)
{
  try
  {
    return tree.get<T>(key);
  }
  catch (const pt::ptree_error &e)
  {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

template <typename T>
T Optional(const pt::ptree &tree, const std::string &key, T fallback)
{
  try
  {
    return tree.get<T>(key, fallback);
  }
  catch (const pt::ptree_error &e)
  {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

std::vector<double> NumberList(const std::string &text, const std::string &key)
{
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
  {
    std::istringstream token(item);
    double v;
    if (!(token >> v))
    {
      throw ConfigError("config key '" + key + "': bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

template <typename E>
E Choice(const std::string &value, const std::string &key,
         std::initializer_list<std::pair<const char *, E>> options)
{
  for (const auto &[name, e] : options)
  {
    if (value == name)
    {
      return e;
    }
  }
  throw ConfigError("config key '" + key + "': unknown value '" + value + "'");
}

}  // namespace

ExperimentConfig ParseConfig(const std::string &text)
{
  pt::ptree tree;
  try
  {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  }
  catch (const pt::ini_parser_error &e)
  {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig c;
  {
    const auto dom = NumberList(Required<std::string>(tree, "problem.domain"), "problem.domain");
    if (dom.size() != 4)
    {
      throw ConfigError("problem.domain needs four numbers: x0, y0, x1, y1");
    }
    c.domain = Rectangle{dom[0], dom[1], dom[2], dom[3]};
  }
  c.bc = Choice<BoundaryKind>(Optional<std::string>(tree, "problem.bc", "neumann"), "problem.bc",
                              {{"neumann", BoundaryKind::Neumann},
                               {"periodic", BoundaryKind::Periodic}});
  c.potential = Choice<PotentialKind>(
      Required<std::string>(tree, "problem.potential"), "problem.potential",
      {{"quartic", PotentialKind::Quartic}, {"logarithmic", PotentialKind::Logarithmic}});
  c.theta = Optional<double>(tree, "problem.theta", 0.0);
  if (auto tc = tree.get_optional<std::string>("problem.theta_c"))
  {
    c.theta_c = Required<double>(tree, "problem.theta_c");
  }
  c.epsilon = Optional<double>(tree, "problem.epsilon", 0.0);
  c.initial = Choice<InitialKind>(Optional<std::string>(tree, "problem.initial", "tanh_circle"),
                                  "problem.initial",
                                  {{"tanh_circle", InitialKind::TanhCircle},
                                   {"random", InitialKind::Random}});
  c.initial_amplitude = Optional<double>(tree, "problem.initial_amplitude", 0.05);

  c.h = Required<double>(tree, "mesh.h");
  c.sigma = Optional<double>(tree, "mesh.sigma", 18.0);

  c.t0 = Optional<double>(tree, "time.t0", 0.0);
  c.T = Required<double>(tree, "time.T");
  c.dt = Required<double>(tree, "time.dt");

  c.parameter = Choice<ParameterKind>(
      Required<std::string>(tree, "parameter.kind"), "parameter.kind",
      {{"inverse_diffusivity", ParameterKind::InverseDiffusivity},
       {"temperature", ParameterKind::Temperature}});
  c.train_set = NumberList(Required<std::string>(tree, "parameter.train"), "parameter.train");
  if (auto test = tree.get_optional<std::string>("parameter.test"))
  {
    c.test_values = NumberList(*test, "parameter.test");
  }

  c.n_max = Optional<Index>(tree, "rom.n_max", 20);
  c.tol = Optional<double>(tree, "rom.tol", 1e-3);
  c.deim_size = Optional<Index>(tree, "rom.deim_size", 50);
  c.inner_deim_max = Optional<Index>(tree, "rom.inner_deim_max", 100);
  c.inner_deim_rank_cutoff = Optional<double>(tree, "rom.inner_deim_rank_cutoff", 1e-10);
  c.indicator_norm = Choice<IndicatorNorm>(
      Optional<std::string>(tree, "rom.indicator_norm", "dual_h1"), "rom.indicator_norm",
      {{"dual_h1", IndicatorNorm::DualH1}, {"l2", IndicatorNorm::L2Surrogate}});
  c.indicator_nonlinear = Choice<IndicatorNonlinear>(
      Optional<std::string>(tree, "rom.indicator_nonlinear", "deim"), "rom.indicator_nonlinear",
      {{"deim", IndicatorNonlinear::Deim}, {"exact", IndicatorNonlinear::Exact}});

  if (auto seed = tree.get_optional<std::string>("run.seed"))
  {
    c.seed = Required<std::uint64_t>(tree, "run.seed");
  }
  c.output = Optional<std::string>(tree, "run.output", "esmor-out");
  c.newton.tol = Optional<double>(tree, "run.newton_tol", 1e-10);
  c.newton.max_iters = Optional<int>(tree, "run.newton_max_iters", 25);
  c.clamp = Optional<bool>(tree, "run.clamp", true);
  c.clamp_delta = Optional<double>(tree, "run.clamp_delta", 1e-8);

  c.Validate();
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

void ExperimentConfig::Validate() const
{
  auto positive = [](double v, const char *what)
  {
    if (!(v > 0.0))
    {
      throw ConfigError(std::string(what) + " must be positive");
    }
  };
  positive(domain.Width(), "domain width");
  positive(domain.Height(), "domain height");
  positive(h, "mesh.h");
  positive(sigma, "mesh.sigma");
  positive(dt, "time.dt");
  positive(T - t0, "time.T - time.t0");
  positive(tol, "rom.tol");
  if (h > domain.Width() || h > domain.Height())
  {
    throw ConfigError("mesh.h exceeds a domain side length");
  }
  if (train_set.empty())
  {
    throw ConfigError("parameter.train is empty");
  }
  for (double mu : train_set)
  {
    positive(mu, "every training parameter");
  }
  for (double mu : test_values)
  {
    positive(mu, "every test parameter");
  }
  if (n_max < 1 || deim_size < 1 || inner_deim_max < 1)
  {
    throw ConfigError("rom sizes must be at least one");
  }
  if (potential == PotentialKind::Logarithmic)
  {
    if (!theta_c)
    {
      throw ConfigError("problem.theta_c is required for the logarithmic potential");
    }
    positive(*theta_c, "problem.theta_c");
    if (parameter == ParameterKind::InverseDiffusivity)
    {
      positive(theta, "problem.theta");
    }
  }
  else if (parameter == ParameterKind::Temperature)
  {
    throw ConfigError("the temperature parameter needs the logarithmic potential");
  }
  if (parameter == ParameterKind::Temperature)
  {
    positive(epsilon, "problem.epsilon");
  }
  if (initial == InitialKind::Random)
  {
    positive(initial_amplitude, "problem.initial_amplitude");
    if (!seed)
    {
      throw ConfigError("run.seed is required for a random initial condition");
    }
  }
}

}  // namespace esmor
