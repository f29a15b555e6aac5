// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>

namespace esmor
{

struct ResidualNorm::Impl
{
  Eigen::SimplicialLLT<SparseMatrix> riesz;
  std::vector<Eigen::Matrix3d> mass_inverse;
};

ResidualNorm::ResidualNorm(const FomOperators &ops, IndicatorNorm kind)
  : kind_(kind), impl_(std::make_unique<Impl>())
{
  if (kind == IndicatorNorm::DualH1)
  {
    // A1 already carries the jump penalty, so M + A1 is SPD on the broken space.
    const SparseMatrix k = ops.mass + ops.stiffness_unit;
    impl_->riesz.compute(k);
    if (impl_->riesz.info() != Eigen::Success)
    {
      throw FactorizationError("Cholesky factorization of the H1 Riesz matrix failed");
    }
  }
  else
  {
    impl_->mass_inverse.resize(static_cast<std::size_t>(ops.mass_blocks.NumBlocks()));
    for (Index k = 0; k < ops.mass_blocks.NumBlocks(); ++k)
    {
      impl_->mass_inverse[k] = ops.mass_blocks.Block(k).inverse();
    }
  }
}

ResidualNorm::~ResidualNorm() = default;
ResidualNorm::ResidualNorm(ResidualNorm &&) noexcept = default;
ResidualNorm &ResidualNorm::operator=(ResidualNorm &&) noexcept = default;

double ResidualNorm::operator()(const Vector &r) const
{
  if (kind_ == IndicatorNorm::DualH1)
  {
    const Vector z = impl_->riesz.solve(r);
    return std::sqrt(std::max(0.0, r.dot(z)));
  }
  double s = 0.0;
  for (std::size_t k = 0; k < impl_->mass_inverse.size(); ++k)
  {
    const Eigen::Vector3d rk = r.segment<3>(3 * static_cast<Index>(k));
    s += rk.dot(impl_->mass_inverse[k] * rk);
  }
  return std::sqrt(std::max(0.0, s));
}

double ErrorIndicator(const Trajectory &reduced, const Matrix &psi, double epsilon,
                      const Potential &potential, const TimeGrid &grid, const DGSpace &space,
                      const FomOperators &ops, const ResidualNorm &norm, const DeimData *deim)
{
  const Index steps = reduced.snapshots.cols() - 1;
  if (steps < 1)
  {
    throw InvalidArgument("error indicator needs at least one time step");
  }
  const double dt = grid.dt;
  double sum = 0.0;
  Vector prev = psi * reduced.snapshots.col(0);
  for (Index n = 1; n <= steps; ++n)
  {
    const Vector next = psi * reduced.snapshots.col(n);
    Vector r = ops.mass * ((next - prev) / dt);
    r.noalias() += (0.5 * epsilon) * (ops.stiffness_unit * (next + prev));
    if (deim != nullptr)
    {
      const Vector gm = DeimAvfSample(reduced.snapshots.col(n - 1), reduced.snapshots.col(n),
                                      *deim, potential, space);
      r.noalias() += deim->Q * gm;
    }
    else
    {
      r += AvfNonlinear(prev, next, potential, space);
    }
    sum += norm(r);
    prev = next;
  }
  return std::sqrt(dt * sum);
}

Projection ProjectOntoBasis(const Vector &u, const Matrix &psi, const SparseMatrix &mass)
{
  Projection p;
  if (psi.cols() == 0)
  {
    p.projection = Vector::Zero(u.size());
    p.error = u;
    return p;
  }
  p.projection = psi * ProjectCoefficients(psi, mass, u);
  p.error = u - p.projection;
  return p;
}

void GreedyConfig::Validate() const
{
  if (train_set.empty())
  {
    throw InvalidArgument("greedy training set is empty");
  }
  if (!(tol > 0.0))
  {
    throw InvalidArgument("greedy tolerance must be positive");
  }
  if (n_max < 1 || outer_deim_size < 1 || inner_deim_max < 1)
  {
    throw InvalidArgument("greedy sizes must be at least one");
  }
  if (!(inner_deim_rank_cutoff > 0.0))
  {
    throw InvalidArgument("inner DEIM rank cutoff must be positive");
  }
}

namespace
{

bool SamePotential(const Potential &a, const Potential &b)
{
  return a.Kind() == b.Kind() && a.Theta() == b.Theta() && a.ThetaC() == b.ThetaC();
}

// Nonlinear snapshots f(u^n; potential), n = 1..J, of every cached trajectory, side by side.
Matrix NonlinearSnapshots(const std::vector<const Trajectory *> &trajs,
                          const Potential &potential, const DGSpace &space)
{
  Index cols = 0;
  for (const auto *t : trajs)
  {
    cols += t->snapshots.cols() - 1;
  }
  Matrix f(space.NumDofs(), cols);
  Index c = 0;
  for (const auto *t : trajs)
  {
    for (Index n = 1; n < t->snapshots.cols(); ++n)
    {
      f.col(c++) = EvalNonlinear(t->snapshots.col(n), potential, space);
    }
  }
  return f;
}

DeimData DeimFromSnapshots(const Matrix &f, double rank_cutoff, Index cap)
{
  Eigen::BDCSVD<Matrix> svd(f, Eigen::ComputeThinU);
  const Index rank = NumericalRank(svd.singularValues(), rank_cutoff);
  if (rank < 1)
  {
    throw RankDeficiency("nonlinear snapshot matrix is numerically zero");
  }
  return DeimSelect(svd.matrixU().leftCols(std::min(rank, cap)));
}

}  // namespace

GreedyResult PodGreedy(const GreedyConfig &config, const ParametrizedProblem &problem,
                       const GreedyObserver &observer)
{
  config.Validate();
  const DGSpace &space = *problem.space;
  const FomOperators &ops = *problem.ops;
  const TimeGrid &grid = problem.grid;
  const Index ns = static_cast<Index>(config.train_set.size());

  std::vector<ParameterInstance> instances;
  instances.reserve(static_cast<std::size_t>(ns));
  for (double mu : config.train_set)
  {
    instances.push_back(problem.instance(mu));
  }

  GreedyResult result;
  result.psi.resize(space.NumDofs(), 0);
  std::vector<double> extension_sv;
  const ResidualNorm norm(ops, config.indicator_norm);

  auto cached = [&](Index i) -> const Trajectory *
  {
    for (std::size_t c = 0; c < result.cached_indices.size(); ++c)
    {
      if (result.cached_indices[c] == i)
      {
        return &result.fom_cache[c];
      }
    }
    return nullptr;
  };

  // Inner DEIM bases depend only on the potential and the cached trajectories, so they are
  // shared between training parameters with the same potential and rebuilt when the cache
  // grows.
  struct InnerDeim
  {
    Potential potential;
    std::size_t cache_size;
    DeimData data;
  };
  std::vector<InnerDeim> inner_cache;
  auto inner_deim = [&](const Potential &pot) -> DeimData &
  {
    for (auto &entry : inner_cache)
    {
      if (SamePotential(entry.potential, pot) && entry.cache_size == result.fom_cache.size())
      {
        return entry.data;
      }
    }
    std::vector<const Trajectory *> trajs;
    for (const auto &t : result.fom_cache)
    {
      trajs.push_back(&t);
    }
    const Matrix f = NonlinearSnapshots(trajs, pot, space);
    inner_cache.push_back({pot, result.fom_cache.size(),
                           DeimFromSnapshots(f, config.inner_deim_rank_cutoff,
                                             config.inner_deim_max)});
    return inner_cache.back().data;
  };

  FomOptions fom_options;
  fom_options.newton = config.newton;
  RomOptions rom_options;
  rom_options.newton = config.newton;
  rom_options.compute_energy = false;

  Index star = 0;
  result.termination = "n_max";
  for (Index n = 1; n <= config.n_max; ++n)
  {
    const auto t_start = std::chrono::steady_clock::now();
    const Trajectory *fom = cached(star);
    if (fom == nullptr)
    {
      const auto &inst = instances[star];
      result.fom_cache.push_back(
          SolveFom(inst.initial, ops, inst.potential, inst.epsilon, grid, space, fom_options));
      result.cached_indices.push_back(star);
      ++result.fom_solves;
      fom = &result.fom_cache.back();
    }
    else
    {
      ++result.cache_hits;
    }

    // Projection errors of u^1..u^J onto the current space; one POD mode extends it.
    Matrix errors = fom->snapshots.rightCols(grid.steps);
    if (result.psi.cols() > 0)
    {
      const Matrix coeff = result.psi.transpose() * (ops.mass * errors);
      errors.noalias() -= result.psi * coeff;
    }
    const PodResult mode = Pod(errors, ops.mass_factor, 1);
    AppendMOrthonormal(result.psi, mode.modes.col(0), ops.mass);
    extension_sv.push_back(mode.singular_values[0]);
    result.selected.push_back(config.train_set[star]);
    result.selected_indices.push_back(star);

    const ReducedOperators red = BuildReducedOperators(result.psi, ops, 1.0);
    GreedyIteration it;
    it.basis_size = result.psi.cols();
    it.selected_index = star;
    it.indicators.assign(static_cast<std::size_t>(ns), std::numeric_limits<double>::quiet_NaN());
    it.rom_failed.assign(static_cast<std::size_t>(ns), false);
    it.inner_deim_sizes.assign(static_cast<std::size_t>(ns), 0);

    for (Index i = 0; i < ns; ++i)
    {
      const auto &inst = instances[i];
      DeimData &inner = inner_deim(inst.potential);
      BindToBasis(inner, result.psi);
      it.inner_deim_sizes[i] = inner.Size();
      try
      {
        const Vector ur0 = ProjectCoefficients(result.psi, ops.mass, inst.initial);
        const Trajectory rom =
            SolveRom(ur0, red.WithEpsilon(inst.epsilon), result.psi, inst.potential, grid,
                     space, NonlinearMode::Deim, &inner, rom_options);
        it.indicators[i] = ErrorIndicator(
            rom, result.psi, inst.epsilon, inst.potential, grid, space, ops, norm,
            config.indicator_nonlinear == IndicatorNonlinear::Deim ? &inner : nullptr);
      }
      catch (const NewtonDivergence &)
      {
        it.rom_failed[i] = true;
      }
    }

    // Exact argmax; ties keep the lowest training index. Failed solves are skipped.
    it.max_indicator = -1.0;
    for (Index i = 0; i < ns; ++i)
    {
      if (!it.rom_failed[i] && it.indicators[i] > it.max_indicator)
      {
        it.max_indicator = it.indicators[i];
        it.argmax = i;
      }
    }
    if (it.max_indicator < 0.0)
    {
      throw NewtonDivergence("every reduced solve diverged in greedy iteration");
    }
    it.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    result.history.push_back(std::move(it));
    if (observer)
    {
      observer(result.history.back());
    }
    star = result.history.back().argmax;
    if (result.history.back().max_indicator <= config.tol)
    {
      result.termination = "tol";
      break;
    }
  }

  result.extension_singular_values =
      Eigen::Map<const Vector>(extension_sv.data(), static_cast<Index>(extension_sv.size()));

  // Outer DEIM from the nonlinear snapshots of the distinct parameters whose FOM built the
  // basis, in selection order.
  std::vector<const Trajectory *> outer_trajs;
  std::vector<Index> seen;
  for (Index idx : result.selected_indices)
  {
    if (std::find(seen.begin(), seen.end(), idx) == seen.end())
    {
      seen.push_back(idx);
      outer_trajs.push_back(cached(idx));
    }
  }
  Matrix f(space.NumDofs(), 0);
  {
    // Each selected parameter contributes its own nonlinear snapshots f(u^n_mu; mu).
    Index cols = 0;
    for (const auto *t : outer_trajs)
    {
      cols += t->snapshots.cols() - 1;
    }
    f.resize(space.NumDofs(), cols);
    Index c = 0;
    for (std::size_t s = 0; s < outer_trajs.size(); ++s)
    {
      const Potential &pot = instances[seen[s]].potential;
      const Matrix fs = NonlinearSnapshots({outer_trajs[s]}, pot, space);
      f.middleCols(c, fs.cols()) = fs;
      c += fs.cols();
    }
  }
  result.outer_deim = DeimFromSnapshots(f, 1e-12, config.outer_deim_size);
  BindToBasis(result.outer_deim, result.psi);
  return result;
}

}  // namespace esmor
