// Copyright 2026 The dqdsim Authors
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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "dqdsim/analysis.hpp"
#include "dqdsim/dynamics.hpp"
#include "dqdsim/experiments.hpp"

using namespace dqdsim;

namespace {

void BM_EigenSymmetric(benchmark::State& state) {
  const QubitPairParams p;
  const Hamiltonian4 h = build_hamiltonian(p, -200.0, 35.0);
  for (auto _ : state) benchmark::DoNotOptimize(eigen_symmetric(h));
}
BENCHMARK(BM_EigenSymmetric);

void BM_EvolveReal(benchmark::State& state) {
  const QubitPairParams p;
  const Schedule s = rabi_schedule(p.eps_u0, p.eps_l0, static_cast<double>(state.range(0)));
  const RealStateMatrix w0 = to_real_form(thermal_initial_state(p, p.eps_u0, p.eps_l0));
  const DecoherenceParams dec = DecoherenceParams::dephasing(1200.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_real(w0, s, p, dec, {}));
  // Reported per RK4 step.
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(state.range(0) / 0.05));
}
BENCHMARK(BM_EvolveReal)->Arg(100)->Arg(1000);

void BM_EvolveComplex(benchmark::State& state) {
  const QubitPairParams p;
  const Schedule s = rabi_schedule(p.eps_u0, p.eps_l0, 1000.0);
  const DensityMatrix rho0 = thermal_initial_state(p, p.eps_u0, p.eps_l0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_complex(rho0, s, p, {}, {}));
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_EvolveComplex);

void BM_WidthSweep(benchmark::State& state) {
  const QubitPairParams p;
  std::vector<double> widths;
  for (double w = 0.0; w <= 1000.0; w += 4.0) widths.push_back(w);
  auto make = [&](double w) { return two_pulse_schedule(p.eps_u0, p.eps_l0, w, 120.0); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_last_pulse_width(make, widths, p, DecoherenceParams::dephasing(1200.0)));
  }
}
BENCHMARK(BM_WidthSweep)->Unit(benchmark::kMillisecond);

void BM_TwoPulseMap(benchmark::State& state) {
  ExperimentContext ctx;
  ctx.parallel = 1;
  ctx.dec = DecoherenceParams::dephasing(1200.0);
  std::vector<double> w;
  for (double x = 0.0; x <= 400.0; x += 8.0) w.push_back(x);
  for (auto _ : state) benchmark::DoNotOptimize(run_two_pulse(ctx, w, w));
}
BENCHMARK(BM_TwoPulseMap)->Unit(benchmark::kMillisecond);

void BM_FitRabi(benchmark::State& state) {
  std::vector<RabiSample> s;
  for (double x = 0.0; x <= 2000.0; x += 4.0) {
    s.push_back({x, 0.5 * std::exp(-std::pow(x / 1200.0, 2)) *
                            std::cos(2.0 * M_PI * 6.2e-3 * x + 0.1) + 0.5});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_rabi(s));
}
BENCHMARK(BM_FitRabi)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
