// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/metrics.hpp"

#include <cmath>

namespace esmor
{

double L2TimeError(const Matrix &a, const Matrix &b, const SparseMatrix &mass, double dt)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
  {
    throw InvalidArgument("trajectory shapes differ");
  }
  if (mass.rows() != a.rows())
  {
    throw InvalidArgument("mass matrix does not match the trajectory dimension");
  }
  double sum = 0.0;
  for (Index n = 1; n < a.cols(); ++n)
  {
    const Vector d = a.col(n) - b.col(n);
    sum += d.dot(mass * d);
  }
  return std::sqrt(dt * sum);
}

double LinfEnergyError(const Vector &a, const Vector &b)
{
  if (a.size() != b.size())
  {
    throw InvalidArgument("energy traces have different lengths");
  }
  if (a.size() == 0)
  {
    return 0.0;
  }
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace esmor
