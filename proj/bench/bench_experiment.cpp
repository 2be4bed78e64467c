// SPDX-License-Identifier: Apache-2.0
//
// ibc-transceivers: transceiver design for the two-cell MIMO interfering
// broadcast channel.
// Copyright (C) 2026 The ibc-transceivers authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// Serial reference trial loop versus the OpenMP one on a small sweep.

#include <benchmark/benchmark.h>

#include "ibc/harness.hpp"

namespace {

ibc::harness::ExperimentConfig bench_config(int trials) {
  ibc::harness::ExperimentConfig c;
  c.snr_db = {10, 30};
  c.i1_list = {2};
  c.trials = trials;
  return c;
}

void BM_Serial(benchmark::State& state) {
  const auto c = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ibc::harness::run_experiment_serial(c));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}

void BM_Parallel(benchmark::State& state) {
  const auto c = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ibc::harness::run_experiment(c));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
