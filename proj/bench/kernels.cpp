// Copyright 2026 The QEstim Authors.
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

// Serial reference vs OpenMP kernels. Arg 0 = Serial, 1 = Parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "qestim/adaptive.hpp"
#include "qestim/log.hpp"
#include "qestim/metrology.hpp"
#include "qestim/nv.hpp"
#include "qestim/optimize.hpp"

using namespace qestim;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

CMatrix pauli(char c) {
  CMatrix m = CMatrix::Zero(2, 2);
  if (c == 'x') m << 0, 1, 1, 0;
  if (c == 'y') m << 0, Complex(0, -1), Complex(0, 1), 0;
  if (c == 'z') m << 1, 0, 0, -1;
  return m;
}

CVector plus() { return CVector::Constant(2, 1.0 / std::sqrt(2.0)); }

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

const Trajectory& nv_trajectory() {
  static const Trajectory traj = propagate(nv::nv_scheme());
  return traj;
}

// Phase model x sz / 2 with sz dephasing, sx readout, uniform prior on [0, pi].
Scheme phase_scheme(int points) {
  auto h0 = [](const RVector& u, double) { return CMatrix(0.5 * u(0) * pauli('z')); };
  auto dh = [](const RVector&, double) { return MatrixList{0.5 * pauli('z')}; };
  LindbladSpec spec(HamiltonianSpec::parametric(h0, dh, RVector::Constant(1, 0.0)), {0.0, 1.0}, {},
                    {DecayChannel(pauli('z'), 0.1)}, DynMethod::Expm);
  RVector x(points), p = RVector::Constant(points, 1.0 / M_PI), dp = RVector::Zero(points);
  for (int i = 0; i < points; ++i) x(i) = M_PI * i / (points - 1);
  CMatrix e0 = CMatrix::Zero(2, 2), e1 = CMatrix::Zero(2, 2);
  e0.setConstant(0.5);
  e1 << 0.5, -0.5, -0.5, 0.5;
  return make_general_scheme(ProbeState::from_vector(plus()), std::move(spec), Measurement({e0, e1}),
                             PriorSpec({x}, p, {dp}));
}

void BM_QfimSeries(benchmark::State& state) {
  BoundOptions o;
  o.exec = mode(state);
  const Trajectory& traj = nv_trajectory();
  for (auto _ : state) benchmark::DoNotOptimize(qfim(traj, o));
}

void BM_CfimSeries(benchmark::State& state) {
  BoundOptions o;
  o.exec = mode(state);
  const Trajectory& traj = nv_trajectory();
  const Measurement m = sic_povm(6);
  for (auto _ : state) benchmark::DoNotOptimize(cfim(traj, m, o));
}

void BM_Population(benchmark::State& state) {
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * pauli('z'), {0.5 * pauli('z')}), grid(0.0, 2.0, 41),
                    ControlSpec({pauli('x'), pauli('y')}, {}), {DecayChannel(pauli('z'), 0.1)}, DynMethod::Expm);
  const Scheme s(ProbeState::from_vector(plus()), std::move(spec), sic_povm(2));
  const opt::Scenario sc = opt::Scenario::control(ControlBounds{-1.0, 1.0});
  opt::Algorithm alg;
  alg.kind = opt::AlgorithmKind::PSO;
  alg.population = 16;
  alg.max_episode = 3;
  alg.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(opt::optimize(s, sc, alg, Objective{}));
}

void BM_AdaptiveTable(benchmark::State& state) {
  const Scheme s = phase_scheme(200);
  adaptive::AdaptOptions o;
  o.exec = mode(state);
  for (auto _ : state) {
    adaptive::AdaptiveStrategy st = adaptive::strategy_from_scheme(s);
    benchmark::DoNotOptimize(adaptive::adapt(s, st, adaptive::Method::MI, 5, adaptive::OutcomeSource::simulated(1.0, 3), o));
  }
}

void BM_Vtb(benchmark::State& state) {
  const Scheme s = phase_scheme(400);
  BoundOptions o;
  o.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(vtb(s, o));
}

}  // namespace

BENCHMARK(BM_QfimSeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CfimSeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Population)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdaptiveTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Vtb)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  set_warning_handler(nullptr);
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
