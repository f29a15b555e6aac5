// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "esmor/common.hpp"
#include "esmor/operators.hpp"

namespace esmor
{

struct PodResult
{
  Matrix modes;            // leading k modes, X-orthonormal
  Vector singular_values;  // full spectrum of R B, descending
};

// Leading k POD modes of the columns of `snapshots` in the Euclidean inner product.
PodResult Pod(const Matrix &snapshots, Index k);

// Leading k POD modes in the inner product x^T X y with X = R^T R (R block upper
// triangular, e.g. the mass Cholesky factor). Computed from the thin SVD of R B and mapped
// back with R^{-1}; each mode is signed so its largest-magnitude entry is positive.
// RankDeficiency if the k-th singular value is below 1e-12 times the largest.
PodResult Pod(const Matrix &snapshots, const BlockDiagonal &weight_factor, Index k);

// Number of singular values above rel_cutoff * max.
Index NumericalRank(const Vector &singular_values, double rel_cutoff);

// M-orthonormal reduced basis Psi (columns) and the singular values that produced it.
struct ReducedBasis
{
  Matrix psi;
  Vector singular_values;

  Index Size() const { return psi.cols(); }
};

// Galerkin-projected operators. The unit-diffusivity part is cached so that changing the
// diffusivity is a scalar rescale.
struct ReducedOperators
{
  Matrix stiffness_unit;  // Psi^T A1 Psi
  Matrix mass;            // Psi^T M Psi (identity for an M-orthonormal basis)
  double epsilon = 1.0;

  Matrix Stiffness() const { return epsilon * stiffness_unit; }
  ReducedOperators WithEpsilon(double eps) const;
};

ReducedOperators BuildReducedOperators(const Matrix &psi, const FomOperators &ops,
                                       double epsilon);

// Psi u_r.
Vector Lift(const Matrix &psi, const Vector &reduced);

// Psi^T M u, the coefficients of the M-orthogonal projection.
Vector ProjectCoefficients(const Matrix &psi, const SparseMatrix &mass, const Vector &u);

// max |Psi^T M Psi - I|.
double OrthonormalityDefect(const Matrix &psi, const SparseMatrix &mass);

// Adds `mode` to `psi` after one Gram-Schmidt pass in the M inner product and
// M-normalisation.
void AppendMOrthonormal(Matrix &psi, const Vector &mode, const SparseMatrix &mass);

}  // namespace esmor
