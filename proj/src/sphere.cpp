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

#include "acds/sphere.hpp"

#include <cmath>

#include "acds/error.hpp"

namespace acds {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Xoshiro256::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double NormalGenerator::operator()() noexcept {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * rng_.uniform() - 1.0;
    v = 2.0 * rng_.uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

SphereSampler::SphereSampler(std::uint64_t seed, std::size_t dim)
    : seed_(seed), dim_(dim), normal_(seed) {
  if (dim == 0) throw PreconditionError("SphereSampler: dimension must be >= 1");
}

Vector SphereSampler::sample() {
  Vector e(dim_);
  sample_into(e.span());
  return e;
}

void SphereSampler::sample_into(std::span<double> out) {
  if (out.size() != dim_) {
    throw DimensionMismatchError("SphereSampler: output has dimension " +
                                 std::to_string(out.size()) + ", sampler " +
                                 std::to_string(dim_));
  }
  double norm = 0.0;
  // An all-zero Gaussian draw has probability ~0; redraw if it happens.
  while (norm == 0.0) {
    for (double& x : out) x = normal_();
    norm = pnorm(out, 2.0);
  }
  for (double& x : out) x /= norm;
}

Vector SphereSampler::gaussian() {
  Vector g(dim_);
  for (double& x : g) x = normal_();
  return g;
}

}  // namespace acds
