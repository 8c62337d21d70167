/*
 * Copyright 2026 The ACDS Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "acds/linalg.hpp"

namespace acds {

/// xoshiro256** seeded through splitmix64. Chosen over the standard engines
/// because the bit stream, and every transform built on it here, is fixed
/// across platforms and standard library versions.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Standard normal deviates via the Marsaglia polar method on top of
/// Xoshiro256. The second deviate of each accepted pair is cached.
class NormalGenerator {
 public:
  explicit NormalGenerator(std::uint64_t seed) : rng_(seed) {}

  double operator()() noexcept;
  Xoshiro256& engine() noexcept { return rng_; }

 private:
  Xoshiro256 rng_;
  std::optional<double> spare_;
};

/// Uniform directions on the unit Euclidean sphere in R^dim: a standard
/// Gaussian vector divided by its 2-norm. Single-owner mutable state.
class SphereSampler {
 public:
  /// Recorded in run metadata so traces can be replayed.
  static constexpr const char* kAlgorithm =
      "xoshiro256** (splitmix64 seeding) + Marsaglia polar normals, "
      "normalized Gaussian vector";

  SphereSampler(std::uint64_t seed, std::size_t dim);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t dim() const noexcept { return dim_; }

  Vector sample();
  void sample_into(std::span<double> out);

  /// Gaussian vector with i.i.d. N(0,1) entries from the same stream, used
  /// for random test vectors.
  Vector gaussian();

 private:
  std::uint64_t seed_;
  std::size_t dim_;
  NormalGenerator normal_;
};

}  // namespace acds
