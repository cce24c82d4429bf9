// Copyright 2026 The ergodic_counts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "ergodic/models.hpp"
#include "ergodic/trajectory.hpp"
#include "ergodic/unraveling.hpp"

namespace {

void BM_SampleRecord(benchmark::State& state) {
  const auto u = ergodic::unravel(ergodic::models::driven_atom());
  const auto rho = ergodic::DensityMatrix::basis_state(2, 0);
  const double horizon = static_cast<double>(state.range(0));
  std::uint64_t stream = 0;
  std::size_t clicks = 0;
  for (auto _ : state) {
    const auto w = ergodic::sample_record(u, rho, horizon, {1, stream++});
    clicks += w.size();
  }
  state.counters["clicks/s"] = benchmark::Counter(static_cast<double>(clicks), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SampleRecord)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_WaitingTimes(benchmark::State& state) {
  const auto u = ergodic::unravel(ergodic::models::pure_decay());
  const auto rho = ergodic::DensityMatrix::basis_state(2, 1);
  ergodic::SamplingOptions options;
  options.stop_after_clicks = 1;
  const ergodic::TrajectorySampler sampler(u, options);
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rho, 30.0, {7, stream++}));
}
BENCHMARK(BM_WaitingTimes);

}  // namespace
