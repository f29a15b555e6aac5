// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "esmor/avf.hpp"
#include "esmor/common.hpp"
#include "esmor/greedy.hpp"
#include "esmor/mesh.hpp"
#include "esmor/potential.hpp"

namespace esmor
{

class ConfigError : public Error
{
public:
  using Error::Error;
};

enum class ParameterKind
{
  InverseDiffusivity,  // mu = 1 / eps
  Temperature          // mu = theta
};

enum class InitialKind
{
  TanhCircle,  // tanh((0.25 - |x - c|) / (sqrt(2) eps)), c the domain centre
  Random       // amplitude (2 U - 1) per coefficient, seeded
};

// Flat key = value file with [sections]; see configs/ for annotated examples.
struct ExperimentConfig
{
  // [problem]
  Rectangle domain;
  BoundaryKind bc = BoundaryKind::Neumann;
  PotentialKind potential = PotentialKind::Quartic;
  double theta = 0.0;
  std::optional<double> theta_c;
  double epsilon = 0.0;  // fixed diffusivity when the parameter is the temperature
  InitialKind initial = InitialKind::TanhCircle;
  double initial_amplitude = 0.05;

  // [mesh]
  double h = 0.015;
  double sigma = 18.0;

  // [time]
  double t0 = 0.0;
  double T = 1.0;
  double dt = 0.01;

  // [parameter]
  ParameterKind parameter = ParameterKind::InverseDiffusivity;
  std::vector<double> train_set;
  std::vector<double> test_values;

  // [rom]
  Index n_max = 20;
  double tol = 1e-3;
  Index deim_size = 50;
  Index inner_deim_max = 100;
  double inner_deim_rank_cutoff = 1e-10;
  IndicatorNorm indicator_norm = IndicatorNorm::DualH1;
  IndicatorNonlinear indicator_nonlinear = IndicatorNonlinear::Deim;

  // [run]
  std::optional<std::uint64_t> seed;
  std::filesystem::path output = "esmor-out";
  NewtonConfig newton;
  double clamp_delta = 1e-8;
  bool clamp = true;

  void Validate() const;
};

ExperimentConfig LoadConfig(const std::filesystem::path &path);
ExperimentConfig ParseConfig(const std::string &text);

}  // namespace esmor
