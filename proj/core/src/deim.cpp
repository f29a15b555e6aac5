// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/deim.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "esmor/pod.hpp"

namespace esmor
{

namespace
{

// First index of the largest |v_i|.
Index ArgMaxAbs(const Eigen::Ref<const Vector> &v)
{
  Index best = 0;
  double best_val = -1.0;
  for (Index i = 0; i < v.size(); ++i)
  {
    const double a = std::abs(v[i]);
    if (a > best_val)
    {
      best_val = a;
      best = i;
    }
  }
  return best;
}

Matrix SampleRows(const Matrix &w, const std::vector<Index> &rows, Index ncols)
{
  Matrix out(static_cast<Index>(rows.size()), ncols);
  for (std::size_t s = 0; s < rows.size(); ++s)
  {
    out.row(static_cast<Index>(s)) = w.row(rows[s]).head(ncols);
  }
  return out;
}

}  // namespace

DeimData DeimSelect(const Matrix &W)
{
  const Index m = W.cols();
  if (m < 1)
  {
    throw InvalidArgument("DEIM needs at least one basis vector");
  }
  DeimData data;
  data.W = W;
  data.indices.reserve(static_cast<std::size_t>(m));
  data.indices.push_back(ArgMaxAbs(W.col(0)));

  for (Index k = 1; k < m; ++k)
  {
    const Matrix ptw = SampleRows(W, data.indices, k);
    Vector rhs(k);
    for (Index s = 0; s < k; ++s)
    {
      rhs[s] = W(data.indices[s], k);
    }
    const Vector c = ptw.partialPivLu().solve(rhs);
    const Vector r = W.col(k) - W.leftCols(k) * c;
    const Index next = ArgMaxAbs(r);
    if (!(std::abs(r[next]) > 1e-12 * W.col(k).cwiseAbs().maxCoeff()))
    {
      std::ostringstream msg;
      msg << "DEIM residual vanished after " << k << " of " << m << " indices";
      throw SingularInterpolation(msg.str());
    }
    data.indices.push_back(next);
  }

  const Matrix ptw = SampleRows(W, data.indices, m);
  Eigen::JacobiSVD<Matrix> svd(ptw);
  const Vector sv = svd.singularValues();
  if (!(sv[m - 1] > 0.0))
  {
    throw SingularInterpolation("P^T W is singular");
  }
  data.norm_ptw_inv = 1.0 / sv[m - 1];
  data.cond_ptw = sv[0] / sv[m - 1];
  const Matrix inv = ptw.partialPivLu().inverse();
  data.Q.noalias() = W * inv;
  return data;
}

DeimData BuildDeim(const Matrix &nonlinear_snapshots, Index m)
{
  return DeimSelect(Pod(nonlinear_snapshots, m).modes);
}

void BindToBasis(DeimData &data, const Matrix &psi)
{
  if (psi.rows() != data.W.rows())
  {
    throw InvalidArgument("DEIM data and reduced basis have different full dimensions");
  }
  data.psi_t_q.noalias() = psi.transpose() * data.Q;
  data.sample_elements.clear();
  data.sample_slot.clear();
  data.sample_local.clear();
  std::map<Index, Index> slot_of;
  for (Index idx : data.indices)
  {
    const Index elem = idx / DGSpace::kLocalDofs;
    auto [it, inserted] = slot_of.try_emplace(elem, static_cast<Index>(slot_of.size()));
    if (inserted)
    {
      data.sample_elements.push_back(elem);
    }
    data.sample_slot.push_back(it->second);
    data.sample_local.push_back(static_cast<int>(idx % DGSpace::kLocalDofs));
  }
  data.psi_sample_rows.resize(3 * static_cast<Index>(data.sample_elements.size()), psi.cols());
  for (std::size_t e = 0; e < data.sample_elements.size(); ++e)
  {
    data.psi_sample_rows.middleRows<3>(3 * static_cast<Index>(e)) =
        psi.middleRows<3>(3 * data.sample_elements[e]);
  }
}

namespace
{

void RequireBound(const DeimData &data, Index reduced_size)
{
  if (data.BoundBasisSize() != reduced_size || data.psi_sample_rows.cols() != reduced_size)
  {
    throw InvalidArgument("DEIM data is not bound to a basis of matching size");
  }
}

}  // namespace

Vector DeimEval(const Vector &reduced, const DeimData &data, const Potential &potential,
                const DGSpace &space)
{
  RequireBound(data, reduced.size());
  const Vector local = data.psi_sample_rows * reduced;
  std::vector<Eigen::Vector3d> loads(data.sample_elements.size());
  for (std::size_t e = 0; e < loads.size(); ++e)
  {
    loads[e] = ElementNonlinear(space, data.sample_elements[e],
                                local.segment<3>(3 * static_cast<Index>(e)), potential);
  }
  Vector fm(data.Size());
  for (Index s = 0; s < data.Size(); ++s)
  {
    fm[s] = loads[data.sample_slot[s]][data.sample_local[s]];
  }
  return data.psi_t_q * fm;
}

Vector DeimAvfSample(const Vector &current, const Vector &next, const DeimData &data,
                     const Potential &potential, const DGSpace &space)
{
  RequireBound(data, next.size());
  const Vector a = data.psi_sample_rows * current;
  const Vector b = data.psi_sample_rows * next;
  std::vector<Eigen::Vector3d> loads(data.sample_elements.size());
  for (std::size_t e = 0; e < loads.size(); ++e)
  {
    const Index off = 3 * static_cast<Index>(e);
    loads[e] = ElementAvfNonlinear(space, data.sample_elements[e], a.segment<3>(off),
                                   b.segment<3>(off), potential);
  }
  Vector gm(data.Size());
  for (Index s = 0; s < data.Size(); ++s)
  {
    gm[s] = loads[data.sample_slot[s]][data.sample_local[s]];
  }
  return gm;
}

Matrix DeimAvfSampleJacobian(const Vector &current, const Vector &next, const DeimData &data,
                             const Potential &potential, const DGSpace &space)
{
  RequireBound(data, next.size());
  const Vector a = data.psi_sample_rows * current;
  const Vector b = data.psi_sample_rows * next;
  // d g_elem / d next = J_elem * Psi_rows(elem), 3 x N per sampled element.
  Matrix dlocal(data.psi_sample_rows.rows(), next.size());
  for (std::size_t e = 0; e < data.sample_elements.size(); ++e)
  {
    const Index off = 3 * static_cast<Index>(e);
    const Eigen::Matrix3d jac = ElementAvfJacobian(space, data.sample_elements[e],
                                                   a.segment<3>(off), b.segment<3>(off),
                                                   potential);
    dlocal.middleRows<3>(off).noalias() = jac * data.psi_sample_rows.middleRows<3>(off);
  }
  Matrix out(data.Size(), next.size());
  for (Index s = 0; s < data.Size(); ++s)
  {
    out.row(s) = dlocal.row(3 * data.sample_slot[s] + data.sample_local[s]);
  }
  return out;
}

double DeimErrorBound(const Vector &v, const DeimData &data)
{
  const Vector coeff = data.W.transpose() * v;
  const Vector residual = v - data.W * coeff;
  return data.norm_ptw_inv * residual.norm();
}

double DeimInterpolationError(const Vector &v, const DeimData &data)
{
  Vector pv(data.Size());
  for (Index s = 0; s < data.Size(); ++s)
  {
    pv[s] = v[data.indices[s]];
  }
  return (v - data.Q * pv).norm();
}

double NormMassFactorInverse(const FomOperators &ops, int max_iters, double tol)
{
  // Inverse iteration on M = R^T R; M is block diagonal so each solve is local.
  const auto &blocks = ops.mass_blocks;
  std::vector<Eigen::Matrix3d> inverses(static_cast<std::size_t>(blocks.NumBlocks()));
  for (Index k = 0; k < blocks.NumBlocks(); ++k)
  {
    inverses[k] = blocks.Block(k).inverse();
  }
  Vector x = Vector::Ones(blocks.Rows());
  // Break the symmetry of the constant vector, which is not an eigenvector of the blocks.
  for (Index i = 0; i < x.size(); i += 3)
  {
    x[i] = 2.0;
  }
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it)
  {
    Vector y(x.size());
    for (Index k = 0; k < blocks.NumBlocks(); ++k)
    {
      y.segment<3>(3 * k) = inverses[k] * x.segment<3>(3 * k);
    }
    const double mu = x.dot(y);  // Rayleigh quotient of M^{-1}
    y.normalize();
    x = y;
    if (it > 0 && std::abs(mu - lambda) <= tol * std::abs(mu))
    {
      lambda = mu;
      break;
    }
    lambda = mu;
  }
  // lambda approximates the largest eigenvalue of M^{-1} = 1 / lambda_min(M).
  return std::sqrt(lambda);
}

StabilityReport StabilityBounds(const Trajectory &reduced, const Matrix &psi,
                                const DeimData &data, const FomOperators &ops,
                                const Potential &potential, const DGSpace &space, double dt)
{
  if (reduced.snapshots.cols() < 2)
  {
    throw InvalidArgument("stability bounds need a trajectory with at least one step");
  }
  StabilityReport rep;
  rep.norm_r_inv = NormMassFactorInverse(ops);
  rep.norm_ptw_inv = data.norm_ptw_inv;
  rep.dt_used = dt;

  const Index steps = reduced.snapshots.cols() - 1;
  double min_step = std::numeric_limits<double>::infinity();
  double max_defect = 0.0;
  for (Index n = 0; n < steps; ++n)
  {
    const Vector diff = psi * (reduced.snapshots.col(n + 1) - reduced.snapshots.col(n));
    const double step_norm = MassNorm(diff, ops.mass);
    const Vector mid = psi * (0.5 * (reduced.snapshots.col(n + 1) + reduced.snapshots.col(n)));
    const Vector f = EvalNonlinear(mid, potential, space);
    const Vector proj = data.W.transpose() * f;
    const double defect = (f - data.W * proj).norm();
    rep.step_norms.push_back(step_norm);
    rep.defects.push_back(defect);

    double bound = std::numeric_limits<double>::infinity();
    if (step_norm < 1e-14)
    {
      std::ostringstream msg;
      msg << "step " << n + 1 << " skipped: degenerate update norm " << step_norm;
      rep.notes.push_back(msg.str());
    }
    else
    {
      const double denom = rep.norm_r_inv * rep.norm_ptw_inv * defect;
      if (denom > 0.0)
      {
        bound = step_norm / denom;
      }
      // The global bound skips the first step, which starts from the projected initial data,
      // unless there is no other step.
      if (n > 0 || steps == 1)
      {
        min_step = std::min(min_step, step_norm);
        max_defect = std::max(max_defect, defect);
      }
    }
    rep.per_step_bounds.push_back(bound);
    if (bound < dt)
    {
      ++rep.steps_violating;
    }
  }

  const double denom = rep.norm_r_inv * rep.norm_ptw_inv * max_defect;
  if (std::isfinite(min_step) && denom > 0.0)
  {
    rep.global_bound = min_step / denom;
  }
  rep.satisfied = dt <= rep.global_bound;
  return rep;
}

}  // namespace esmor
