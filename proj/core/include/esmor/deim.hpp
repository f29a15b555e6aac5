// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "esmor/avf.hpp"
#include "esmor/common.hpp"
#include "esmor/dg_space.hpp"
#include "esmor/operators.hpp"
#include "esmor/potential.hpp"

namespace esmor
{

// Discrete empirical interpolation of a nonlinear vector v ~ Q P^T v with Q = W (P^T W)^{-1}.
// The basis-dependent members are filled by BindToBasis.
struct DeimData
{
  Matrix W;                    // N_dof x M, orthonormal columns
  std::vector<Index> indices;  // rows selected by P, in selection order
  Matrix Q;                    // W (P^T W)^{-1}
  double norm_ptw_inv = 0.0;   // ||(P^T W)^{-1}||_2
  double cond_ptw = 0.0;       // 2-norm condition number of P^T W

  // Per reduced basis Psi.
  Matrix psi_t_q;                       // Psi^T Q, N x M
  std::vector<Index> sample_elements;   // distinct elements holding a sampled index
  std::vector<Index> sample_slot;       // index s -> position in sample_elements
  std::vector<int> sample_local;        // index s -> local DoF within its element
  Matrix psi_sample_rows;               // 3 rows of Psi per sampled element

  Index Size() const { return static_cast<Index>(indices.size()); }
  Index BoundBasisSize() const { return psi_t_q.rows(); }
};

// Greedy DEIM point selection on the columns of W. Index 1 is argmax |W_1|; index k is the
// argmax of the interpolation residual of W_k at the previous indices. Ties go to the lowest
// row index. Throws SingularInterpolation if a residual vanishes (max |r| <= 1e-12 max|W_k|).
DeimData DeimSelect(const Matrix &W);

// Builds W from the leading `m` Euclidean POD modes of the nonlinear snapshots, then selects.
DeimData BuildDeim(const Matrix &nonlinear_snapshots, Index m);

// Precomputes Psi^T Q and the rows of Psi needed to reconstruct u_h on the sampled elements.
void BindToBasis(DeimData &data, const Matrix &psi);

// Psi^T Q f_m(Psi u_r), evaluating f only at the sampled entries.
Vector DeimEval(const Vector &reduced, const DeimData &data, const Potential &potential,
                const DGSpace &space);

// Sampled entries of the AVF nonlinear vector for a reduced step current -> next, and its
// derivative with respect to `next` (M x N).
Vector DeimAvfSample(const Vector &current, const Vector &next, const DeimData &data,
                     const Potential &potential, const DGSpace &space);
Matrix DeimAvfSampleJacobian(const Vector &current, const Vector &next, const DeimData &data,
                             const Potential &potential, const DGSpace &space);

// ||(P^T W)^{-1}||_2 ||(I - W W^T) v||_2, the a priori bound on ||v - Q P^T v||_2.
double DeimErrorBound(const Vector &v, const DeimData &data);

// ||v - Q P^T v||_2.
double DeimInterpolationError(const Vector &v, const DeimData &data);

// ||R^{-1}||_2 for the block mass factor, from the smallest eigenvalue of M by inverse power
// iteration.
double NormMassFactorInverse(const FomOperators &ops, int max_iters = 200, double tol = 1e-13);

struct StabilityReport
{
  double norm_r_inv = 0.0;
  double norm_ptw_inv = 0.0;
  std::vector<double> step_norms;      // ||u_{h,r}^{n+1} - u_{h,r}^n||_{L2}
  std::vector<double> defects;         // ||(I - W W^T) f(Psi z^n)||_2 at the midpoint z^n
  std::vector<double> per_step_bounds; // +inf where the defect vanishes
  // min step norm over max defect, both taken over steps 1..J-1 (all steps when J = 1)
  double global_bound = std::numeric_limits<double>::infinity();
  double dt_used = 0.0;
  bool satisfied = false;
  Index steps_violating = 0;           // steps whose own bound is below dt
  std::vector<std::string> notes;
};

// Time-step bounds under which the DEIM reduced energy is guaranteed to decrease. The
// unknown mean-value point between u_r^n and u_r^{n+1} is estimated by their midpoint, so the
// report is an estimate rather than a certificate.
StabilityReport StabilityBounds(const Trajectory &reduced, const Matrix &psi,
                                const DeimData &data, const FomOperators &ops,
                                const Potential &potential, const DGSpace &space, double dt);

}  // namespace esmor
