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

#include "ergodic/linalg.hpp"
#include "ergodic/lindblad.hpp"
#include "ergodic/models.hpp"
#include "ergodic/unraveling.hpp"

namespace {

void BM_Expm(benchmark::State& state) {
  const auto d = static_cast<ergodic::Index>(state.range(0));
  const ergodic::ComplexOperator a = ergodic::random_complex(d, d, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ergodic::expm(a));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(16)->Arg(64);

void BM_Propagate(benchmark::State& state) {
  const auto l = ergodic::build_generator(ergodic::models::driven_atom());
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ergodic::propagate(l, t));
}
BENCHMARK(BM_Propagate)->Arg(1)->Arg(100);

void BM_StationaryState(benchmark::State& state) {
  const auto l = ergodic::build_generator(ergodic::models::driven_atom());
  for (auto _ : state) benchmark::DoNotOptimize(ergodic::stationary_state(l));
}
BENCHMARK(BM_StationaryState);

void BM_OperationMeasure(benchmark::State& state) {
  const auto u = ergodic::unravel(ergodic::models::driven_atom());
  const auto rho = ergodic::DensityMatrix::basis_state(2, 0);
  ergodic::QuadratureControls quad;
  quad.n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ergodic::operation_measure(u, ergodic::CylinderEvent::sure(), 2.0, rho, quad));
  }
}
BENCHMARK(BM_OperationMeasure)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
