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

#include "ergodic/lindblad.hpp"
#include "ergodic/models.hpp"
#include "ergodic/observables.hpp"
#include "ergodic/trajectory.hpp"
#include "ergodic/unraveling.hpp"

namespace {

const ergodic::DetectionRecord& long_record() {
  static const ergodic::DetectionRecord w = ergodic::sample_record(
      ergodic::unravel(ergodic::models::driven_atom()), ergodic::DensityMatrix::basis_state(2, 0),
      10100.0, {2718, 0});
  return w;
}

void BM_CurrentProductAverage(benchmark::State& state) {
  const auto gamma = ergodic::ResponseFunction::exponential(1.0, 0.5);
  const std::vector<double> times = state.range(0) == 1 ? std::vector<double>{0.0}
                                                        : std::vector<double>{0.0, 0.5};
  const auto& w = long_record();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ergodic::time_average_current_product(w, gamma, times, 1e4));
  }
}
BENCHMARK(BM_CurrentProductAverage)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_CoincidenceAverage(benchmark::State& state) {
  const auto& w = long_record();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ergodic::coincidence_time_average(w, {0.0, 5.0}, 0.1, 1e4));
  }
}
BENCHMARK(BM_CoincidenceAverage)->Unit(benchmark::kMillisecond);

void BM_GnBoxIntegral(benchmark::State& state) {
  const auto u = ergodic::unravel(ergodic::models::driven_atom());
  const auto rho = ergodic::stationary_state(u.generator);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ergodic::gn_box_integral(u, rho, {0.0, 5.0}, 0.1, nodes));
  }
}
BENCHMARK(BM_GnBoxIntegral)->Arg(8)->Arg(16);

}  // namespace
