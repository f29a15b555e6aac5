// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "esmor/common.hpp"
#include "esmor/dg_space.hpp"

namespace esmor
{

// SplitMix64 (Steele, Lea, Flood). Draw i of a stream seeded with s is
//   z = s + (i + 1) * 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z ^ (z >> 31)
// and a uniform double in [0, 1) is (z >> 11) * 2^-53. Any implementation of these lines
// reproduces the random initial data bit for bit.
class SplitMix64
{
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next()
  {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

// Independent values amplitude * (2 U - 1), U uniform in [0, 1), one per dG coefficient in
// DoF order.
Vector RandomInitial(std::uint64_t seed, const DGSpace &space, double amplitude);

}  // namespace esmor
