// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/pod.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace esmor
{

namespace
{

void FixSigns(Matrix &modes)
{
  for (Index j = 0; j < modes.cols(); ++j)
  {
    Index imax = 0;
    modes.col(j).cwiseAbs().maxCoeff(&imax);
    if (modes(imax, j) < 0.0)
    {
      modes.col(j) *= -1.0;
    }
  }
}

PodResult TruncatedSvd(const Matrix &b, Index k)
{
  if (k < 1 || k > std::min(b.rows(), b.cols()))
  {
    throw InvalidArgument("POD mode count must be between 1 and min(rows, cols)");
  }
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU);
  PodResult out;
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() > 0 ? out.singular_values[0] : 0.0;
  if (!(out.singular_values[k - 1] >= 1e-12 * smax) || smax == 0.0)
  {
    std::ostringstream msg;
    msg << "requested " << k << " POD modes but the numerical rank is "
        << NumericalRank(out.singular_values, 1e-12);
    throw RankDeficiency(msg.str());
  }
  out.modes = svd.matrixU().leftCols(k);
  return out;
}

}  // namespace

Index NumericalRank(const Vector &singular_values, double rel_cutoff)
{
  if (singular_values.size() == 0 || singular_values[0] <= 0.0)
  {
    return 0;
  }
  const double cut = rel_cutoff * singular_values[0];
  Index r = 0;
  while (r < singular_values.size() && singular_values[r] > cut)
  {
    ++r;
  }
  return r;
}

PodResult Pod(const Matrix &snapshots, Index k)
{
  PodResult out = TruncatedSvd(snapshots, k);
  FixSigns(out.modes);
  return out;
}

PodResult Pod(const Matrix &snapshots, const BlockDiagonal &weight_factor, Index k)
{
  if (weight_factor.Rows() != snapshots.rows())
  {
    throw InvalidArgument("POD weight and snapshot dimensions differ");
  }
  Matrix rb(snapshots.rows(), snapshots.cols());
  for (Index e = 0; e < weight_factor.NumBlocks(); ++e)
  {
    rb.middleRows<3>(3 * e).noalias() = weight_factor.Block(e) * snapshots.middleRows<3>(3 * e);
  }
  PodResult out = TruncatedSvd(rb, k);
  for (Index e = 0; e < weight_factor.NumBlocks(); ++e)
  {
    const Eigen::Matrix3d &r = weight_factor.Block(e);
    out.modes.middleRows<3>(3 * e) =
        r.triangularView<Eigen::Upper>().solve(out.modes.middleRows<3>(3 * e));
  }
  FixSigns(out.modes);
  return out;
}

ReducedOperators ReducedOperators::WithEpsilon(double eps) const
{
  ReducedOperators out = *this;
  out.epsilon = eps;
  return out;
}

ReducedOperators BuildReducedOperators(const Matrix &psi, const FomOperators &ops,
                                       double epsilon)
{
  ReducedOperators red;
  const Matrix a_psi = ops.stiffness_unit * psi;
  const Matrix m_psi = ops.mass * psi;
  red.stiffness_unit.noalias() = psi.transpose() * a_psi;
  red.mass.noalias() = psi.transpose() * m_psi;
  // Symmetrise the round-off.
  red.stiffness_unit = 0.5 * (red.stiffness_unit + red.stiffness_unit.transpose()).eval();
  red.epsilon = epsilon;
  return red;
}

Vector Lift(const Matrix &psi, const Vector &reduced)
{
  if (psi.cols() != reduced.size())
  {
    throw InvalidArgument("reduced vector does not match the basis size");
  }
  return psi * reduced;
}

Vector ProjectCoefficients(const Matrix &psi, const SparseMatrix &mass, const Vector &u)
{
  if (psi.cols() == 0)
  {
    return Vector(0);
  }
  const Vector mu = mass * u;
  return psi.transpose() * mu;
}

double OrthonormalityDefect(const Matrix &psi, const SparseMatrix &mass)
{
  if (psi.cols() == 0)
  {
    return 0.0;
  }
  const Matrix m_psi = mass * psi;
  const Matrix gram = psi.transpose() * m_psi;
  return (gram - Matrix::Identity(psi.cols(), psi.cols())).cwiseAbs().maxCoeff();
}

void AppendMOrthonormal(Matrix &psi, const Vector &mode, const SparseMatrix &mass)
{
  Vector v = mode;
  const double input_norm = MassNorm(v, mass);
  if (psi.cols() > 0)
  {
    // Two Gram-Schmidt passes keep the basis orthonormal to round-off.
    for (int pass = 0; pass < 2; ++pass)
    {
      v -= psi * (psi.transpose() * (mass * v));
    }
  }
  const double norm = MassNorm(v, mass);
  if (!std::isfinite(norm) || !(norm > 1e-12 * input_norm))
  {
    throw RankDeficiency("new mode lies in the span of the existing basis");
  }
  psi.conservativeResize(v.size(), psi.cols() + 1);
  psi.col(psi.cols() - 1) = v / norm;
}

}  // namespace esmor
