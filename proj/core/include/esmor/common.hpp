// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace esmor
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

// Base of every error raised by the library. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

// A logarithmic potential was evaluated outside (-1, 1) with clamping disabled.
class NonlinearDomainError : public Error
{
public:
  using Error::Error;
};

class NewtonDivergence : public Error
{
public:
  using Error::Error;
};

class RankDeficiency : public Error
{
public:
  using Error::Error;
};

class SingularInterpolation : public Error
{
public:
  using Error::Error;
};

class FactorizationError : public Error
{
public:
  using Error::Error;
};

// A runtime certificate (energy monotonicity, orthonormality) did not hold.
class AssertionFailure : public Error
{
public:
  using Error::Error;
};

}  // namespace esmor
