// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "esmor/common.hpp"
#include "esmor/dg_space.hpp"
#include "esmor/potential.hpp"

namespace esmor
{

// Matrix made of independent 3x3 blocks on the diagonal, one per element.
class BlockDiagonal
{
public:
  BlockDiagonal() = default;
  explicit BlockDiagonal(Index num_blocks) : blocks_(num_blocks, Eigen::Matrix3d::Zero()) {}

  Index NumBlocks() const { return static_cast<Index>(blocks_.size()); }
  Index Rows() const { return 3 * NumBlocks(); }

  Eigen::Matrix3d &Block(Index k) { return blocks_[k]; }
  const Eigen::Matrix3d &Block(Index k) const { return blocks_[k]; }

  Vector Apply(const Vector &x) const;
  Vector ApplyTranspose(const Vector &x) const;
  SparseMatrix ToSparse() const;

private:
  std::vector<Eigen::Matrix3d> blocks_;
};

// Full-order SIPG operators. The stiffness matrix is assembled for unit diffusivity so that
// A(eps) = eps * stiffness_unit.
struct FomOperators
{
  SparseMatrix mass;
  SparseMatrix stiffness_unit;
  BlockDiagonal mass_blocks;
  // Upper-triangular Cholesky blocks R_k with M_k = R_k^T R_k, i.e. M = R^T R.
  BlockDiagonal mass_factor;
};

SparseMatrix AssembleMass(const DGSpace &space);

// SIPG bilinear form with eps = 1: volume gradient term, the two symmetric consistency terms
// with averages {grad u . n} and jumps [u] = u_left - u_right, and the penalty
// (sigma / h_E) int [u][v] on every interior (including periodically wrapped) edge.
SparseMatrix AssembleStiffnessUnit(const DGSpace &space);

FomOperators AssembleOperators(const DGSpace &space);

// Smallest Rayleigh quotient u^T A u / u^T u over `trials` pseudo-random vectors.
double MinRandomRayleighQuotient(const SparseMatrix &a, int trials, std::uint64_t seed);

// f_i = int f(u_h) phi_i dx.
Vector EvalNonlinear(const Vector &u, const Potential &potential, const DGSpace &space);

// J_ij = int f'(u_h) phi_j phi_i dx, block diagonal.
BlockDiagonal EvalNonlinearJacobian(const Vector &u, const Potential &potential,
                                    const DGSpace &space);

// g_i = int (int_0^1 f(tau b_h + (1 - tau) a_h) dtau) phi_i dx, the nonlinear term of one
// average-vector-field step from a to b.
Vector AvfNonlinear(const Vector &a, const Vector &b, const Potential &potential,
                    const DGSpace &space);

// Derivative of AvfNonlinear with respect to b.
BlockDiagonal AvfNonlinearJacobian(const Vector &a, const Vector &b, const Potential &potential,
                                   const DGSpace &space);

// Single-element kernels used by both the full evaluators above and sampled (DEIM) evaluation.
Eigen::Vector3d ElementNonlinear(const DGSpace &space, Index k, const Eigen::Vector3d &u,
                                 const Potential &potential);
Eigen::Vector3d ElementAvfNonlinear(const DGSpace &space, Index k, const Eigen::Vector3d &a,
                                    const Eigen::Vector3d &b, const Potential &potential);
Eigen::Matrix3d ElementAvfJacobian(const DGSpace &space, Index k, const Eigen::Vector3d &a,
                                   const Eigen::Vector3d &b, const Potential &potential);

// Number of full-length nonlinear vector evaluations performed so far (all threads).
std::uint64_t FullNonlinearEvaluationCount();

// int F(u_h) dx.
double IntegratePotential(const Vector &u, const Potential &potential, const DGSpace &space);

// Discrete energy summed term by term over elements and interior edges:
//   (eps/2) sum_K |grad u_h|^2 + int F(u_h) - sum_E ({eps grad u_h . n}, [u_h])_E
//   + sum_E (sigma eps / 2 h_E) ([u_h], [u_h])_E.
double DiscreteEnergy(const Vector &u, const DGSpace &space, double epsilon,
                      const Potential &potential);

// Same energy through the assembled form: (eps/2) u^T A1 u + int F(u_h).
double DiscreteEnergyMatrixForm(const Vector &u, const FomOperators &ops, double epsilon,
                                const Potential &potential, const DGSpace &space);

// sqrt(u^T M u).
double MassNorm(const Vector &u, const SparseMatrix &mass);

}  // namespace esmor
