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

// Serial reference kernels vs their OpenMP counterparts.
//   ./build/bench/bench_kernels --benchmark_filter=matvec

#include <benchmark/benchmark.h>

#include <filesystem>

#include "acds/harness.hpp"
#include "acds/linalg.hpp"
#include "acds/sphere.hpp"

namespace {

acds::Matrix random_matrix(std::size_t n) {
  acds::Xoshiro256 rng(n);
  acds::Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform();
  return m;
}

void BM_matvec_serial(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const acds::Matrix m = random_matrix(n);
  acds::Vector v(n, 1.0), out(n);
  for (auto _ : state) {
    acds::reference::matvec(m, v, out.span());
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_matvec_parallel(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const acds::Matrix m = random_matrix(n);
  acds::Vector v(n, 1.0), out(n);
  for (auto _ : state) {
    acds::matvec(m, v, out.span());
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_gram_serial(benchmark::State& state) {
  const acds::Matrix m = random_matrix(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(acds::reference::gram(m));
}

void BM_gram_parallel(benchmark::State& state) {
  const acds::Matrix m = random_matrix(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(acds::gram(m));
}

acds::ExperimentSpec sweep_spec() {
  acds::ExperimentSpec spec;
  spec.problem = acds::ProblemDescriptor{"quadratic", 10, 0};
  spec.p_values = {1.0, 2.0};
  for (std::uint64_t s = 0; s < 16; ++s) spec.seeds.push_back(s);
  spec.stopping = acds::Stopping{1000, {}};
  spec.checkpoint_stride = 100;
  spec.output_dir = std::filesystem::temp_directory_path() / "acds_bench_sweep";
  return spec;
}

void BM_sweep_serial(benchmark::State& state) {
  const auto spec = sweep_spec();
  for (auto _ : state) benchmark::DoNotOptimize(acds::reference::run_experiment(spec));
}

void BM_sweep_parallel(benchmark::State& state) {
  const auto spec = sweep_spec();
  for (auto _ : state) benchmark::DoNotOptimize(acds::run_experiment(spec));
}

}  // namespace

BENCHMARK(BM_matvec_serial)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_matvec_parallel)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_gram_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_gram_parallel)->Arg(64)->Arg(256);
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
