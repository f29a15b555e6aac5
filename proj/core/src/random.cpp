// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/random.hpp"

namespace esmor
{

Vector RandomInitial(std::uint64_t seed, const DGSpace &space, double amplitude)
{
  if (!(amplitude > 0.0))
  {
    throw InvalidArgument("random initial amplitude must be positive");
  }
  SplitMix64 rng(seed);
  Vector u(space.NumDofs());
  for (Index i = 0; i < u.size(); ++i)
  {
    u[i] = amplitude * (2.0 * rng.Uniform() - 1.0);
  }
  return u;
}

}  // namespace esmor
