// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "esmor/common.hpp"

namespace esmor
{

// (dt sum_{n=1}^{J} (a^n - b^n)^T M (a^n - b^n))^{1/2}, the discrete L2(0,T; L2) distance of
// two trajectories stored column-wise (column 0 is the initial state).
double L2TimeError(const Matrix &a, const Matrix &b, const SparseMatrix &mass, double dt);

// max_n |E_a(t_n) - E_b(t_n)|.
double LinfEnergyError(const Vector &a, const Vector &b);

}  // namespace esmor
