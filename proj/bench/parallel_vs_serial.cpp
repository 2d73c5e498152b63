// Copyright 2026 The cmoe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenMP kernels against the serial reference path.

#include <benchmark/benchmark.h>

#include "cmoe/dist.hpp"
#include "cmoe/kernels.hpp"
#include "cmoe/reference.hpp"
#include "cmoe/wehrl.hpp"

namespace {

cmoe::ChannelSpec amplifier(int n_modes) {
    cmoe::ChannelSpec s;
    s.family = cmoe::Family::amplifier;
    s.kappa = 1.5;
    s.env_energy = 0.2;
    s.n_modes = n_modes;
    return s;
}

void multimode_args(benchmark::internal::Benchmark* b) {
    b->Args({2, 30})->Args({2, 60})->Args({3, 12});
}

void BM_apply_multimode_parallel(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    const int cutoff = static_cast<int>(state.range(1));
    const auto d = cmoe::random_dist(modes, cutoff, 11);
    const auto k = cmoe::build_channel(amplifier(modes), cutoff);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cmoe::apply_multimode(k, d));
    }
}
BENCHMARK(BM_apply_multimode_parallel)->Apply(multimode_args)->Unit(benchmark::kMillisecond);

void BM_apply_multimode_serial(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    const int cutoff = static_cast<int>(state.range(1));
    const auto d = cmoe::random_dist(modes, cutoff, 11);
    const auto k = cmoe::build_channel(amplifier(modes), cutoff);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cmoe::reference::apply_multimode(k, d));
    }
}
BENCHMARK(BM_apply_multimode_serial)->Apply(multimode_args)->Unit(benchmark::kMillisecond);

void BM_wehrl_general_parallel(benchmark::State& state) {
    const auto rho = cmoe::DensityMatrix::random_mixed(static_cast<int>(state.range(0)), 3, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cmoe::wehrl_entropy_general(rho));
    }
}
BENCHMARK(BM_wehrl_general_parallel)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_wehrl_general_serial(benchmark::State& state) {
    const auto rho = cmoe::DensityMatrix::random_mixed(static_cast<int>(state.range(0)), 3, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cmoe::reference::wehrl_entropy_general(rho));
    }
}
BENCHMARK(BM_wehrl_general_serial)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
