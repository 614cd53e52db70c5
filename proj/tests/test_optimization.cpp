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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qestim/nv.hpp"
#include "qestim/optimize.hpp"

using namespace qestim;
using namespace qestim::opt;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

// Qubit with H0 = sz/2, sz dephasing, controls on sx and sy.
Scheme qubit_control_scheme(double gamma, int steps, std::vector<std::vector<double>> ctrl) {
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), linspace(0.0, 1.0, steps + 1),
                    ControlSpec({oracle::sx(), oracle::sy()}, std::move(ctrl)), {DecayChannel(oracle::sz(), gamma)},
                    DynMethod::Expm);
  return Scheme(ProbeState::from_vector(oracle::plus()), std::move(spec), sic_povm(2));
}

Scheme dephasing_scheme(double gamma, double t) {
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), linspace(0.0, t, 11), {},
                    {DecayChannel(oracle::sz(), gamma)}, DynMethod::Expm);
  return Scheme(ProbeState::from_vector(oracle::plus()), std::move(spec), sic_povm(2));
}

double relative_error(const RVector& a, const RVector& b) { return (a - b).norm() / b.norm(); }

std::vector<std::vector<double>> wavy_controls(int steps) {
  std::vector<std::vector<double>> c(2, std::vector<double>(steps));
  for (int j = 0; j < steps; ++j) {
    c[0][j] = 0.3 * std::sin(0.7 * j);
    c[1][j] = -0.2 + 0.05 * j;
  }
  return c;
}

}  // namespace

TEST_CASE("adjoint control gradient matches central differences") {
  const Scheme s = qubit_control_scheme(0.1, 10, wavy_controls(10));
  for (Objective::Kind kind : {Objective::Kind::QFIM, Objective::Kind::CFIM}) {
    Objective obj;
    obj.kind = kind;
    const Problem p(s, Scenario::control(), obj);
    const RVector g = p.gradient(p.initial());
    const RVector fd = p.finite_difference_gradient(p.initial(), 1e-6);
    INFO(to_string(kind) << " adjoint " << g.transpose() << "\nfd " << fd.transpose());
    CHECK(relative_error(g, fd) < 1e-4);
  }
}

TEST_CASE("adjoint probe gradient matches central differences") {
  CVector psi(2);
  psi << std::cos(0.3), Complex(0.4, 0.2) * std::sin(0.3) / std::abs(Complex(0.4, 0.2));
  Scenario sc = Scenario::state();
  sc.psi = psi;
  const Problem p(dephasing_scheme(0.1, 1.0), sc, Objective{});
  const RVector g = p.gradient(p.initial());
  const RVector fd = p.finite_difference_gradient(p.initial(), 1e-6);
  CHECK(relative_error(g, fd) < 1e-4);

  // Same through a Kraus channel (phase rotation mixed with dephasing).
  const double u = 0.7, q = 0.2;
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = std::sqrt(1 - q) * std::exp(Complex(0, -u / 2));
  k0(1, 1) = std::sqrt(1 - q) * std::exp(Complex(0, u / 2));
  k1 = std::sqrt(q) * oracle::sz() * k0 / std::sqrt(1 - q);
  const CMatrix dk0 = -kI * 0.5 * oracle::sz() * k0, dk1 = -kI * 0.5 * oracle::sz() * k1;
  const Scheme ks(ProbeState::from_vector(oracle::plus()), KrausSpec({k0, k1}, {{dk0, dk1}}), sic_povm(2));
  const Problem pk(ks, sc, Objective{});
  CHECK(relative_error(pk.gradient(pk.initial()), pk.finite_difference_gradient(pk.initial(), 1e-6)) < 1e-4);
}

TEST_CASE("multiparameter Tr(W F^-1) gradient matches central differences") {
  // H = (u1 sx + u2 sz) / 2 around u = (0.3, 0.8), controls on sy.
  const double u1 = 0.3, u2 = 0.8;
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * (u1 * oracle::sx() + u2 * oracle::sz()),
                                              {0.5 * oracle::sx(), 0.5 * oracle::sz()}),
                    linspace(0.0, 2.0, 9), ControlSpec({oracle::sy()}, {{0.1, -0.3, 0.2, 0.5, 0.0, 0.4, -0.1, 0.3}}),
                    {DecayChannel(oracle::sz(), 0.05)}, DynMethod::Expm);
  const Scheme s(ProbeState::from_vector(oracle::plus()), std::move(spec), sic_povm(2));
  Objective obj;
  obj.weight = RMatrix::Identity(2, 2);
  obj.weight(0, 1) = obj.weight(1, 0) = 0.3;
  const Problem p(s, Scenario::comprehensive(CompType::SC), obj);
  CHECK_FALSE(p.maximize());
  CHECK(relative_error(p.gradient(p.initial()), p.finite_difference_gradient(p.initial(), 1e-6)) < 1e-4);
}

TEST_CASE("StateOpt on the dephasing model reaches the equatorial optimum") {
  const double gamma = 0.1, t = 1.0;
  const double optimum = oracle::dephasing_qfi(t, gamma);
  CVector psi(2);
  psi << std::cos(0.3), std::sin(0.3);
  Scenario sc = Scenario::state();
  sc.psi = psi;
  for (AlgorithmKind kind : {AlgorithmKind::GRAPE, AlgorithmKind::DE, AlgorithmKind::PSO}) {
    Algorithm alg;
    alg.kind = kind;
    alg.max_episode = 300;
    const OptimizeResult r = optimize(dephasing_scheme(gamma, t), sc, alg, Objective{});
    INFO(to_string(kind) << ": " << r.record.best_value << " vs " << optimum);
    CHECK(r.record.best_value >= 0.99 * optimum);
    CHECK(r.record.best_value <= optimum + 1e-8);
    const CVector best = r.scheme.probe().vector();
    CHECK(std::abs(best.norm() - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(best(0)) - std::abs(best(1))) < 0.15);
  }
}

TEST_CASE("GRAPE does not decrease the noiseless QFI below t^2") {
  const Scheme s = qubit_control_scheme(0.0, 8, {});
  Algorithm alg;
  alg.kind = AlgorithmKind::GRAPE;
  alg.max_episode = 30;
  const OptimizeResult r = optimize(s, Scenario::control(), alg, Objective{});
  CHECK(r.record.history.front() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.record.best_value >= 1.0 - 1e-9);
  for (std::size_t i = 1; i < r.record.history.size(); ++i) CHECK(r.record.history[i] >= r.record.history[i - 1]);
}

TEST_CASE("bounded ControlOpt keeps amplitudes within bounds and logs a monotone best") {
  const Scheme s = qubit_control_scheme(0.2, 6, {});
  for (AlgorithmKind kind : {AlgorithmKind::PSO, AlgorithmKind::DE, AlgorithmKind::GRAPE}) {
    Algorithm alg;
    alg.kind = kind;
    alg.max_episode = 25;
    alg.learning_rate = 0.5;
    const OptimizeResult r = optimize(s, Scenario::control({-0.5, 0.5}), alg, Objective{}, true);
    const auto& amps = r.scheme.lindblad().controls().amplitudes();
    for (const auto& row : amps) {
      for (double c : row) CHECK((c >= -0.5 && c <= 0.5));
    }
    for (std::size_t i = 1; i < r.record.history.size(); ++i) CHECK(r.record.history[i] >= r.record.history[i - 1]);
    CHECK(r.record.variable_history.size() == r.record.history.size());
    CHECK(std::abs(objective_value(Objective{}, r.scheme) - r.record.best_value) <= 1e-10);
  }
}

TEST_CASE("NV ControlOpt: DE and PSO logs are monotone and reproducible") {
  nv::NVParams params;
  const Scheme nv_base = nv::nv_scheme(params);
  Scenario sc = Scenario::control({-2.0, 2.0});
  sc.ctrl = std::vector<std::vector<double>>(3, std::vector<double>(4, 0.0));
  for (AlgorithmKind kind : {AlgorithmKind::DE, AlgorithmKind::PSO}) {
    Algorithm alg;
    alg.kind = kind;
    alg.max_episode = 3;
    alg.population = 4;
    alg.seed = 42;
    const OptimizeResult a = optimize(nv_base, sc, alg, Objective{});
    const OptimizeResult b = optimize(nv_base, sc, alg, Objective{});
    INFO(to_string(kind));
    REQUIRE(a.record.history.size() == 4);
    CHECK_FALSE(a.record.maximize);  // three parameters: minimize Tr(F^-1)
    for (std::size_t i = 1; i < a.record.history.size(); ++i) CHECK(a.record.history[i] <= a.record.history[i - 1]);
    CHECK(a.record.history == b.record.history);
    CHECK(a.record.best == b.record.best);
  }
}

TEST_CASE("MeasurementOpt keeps valid POVMs and respects CFI <= QFI") {
  const Scheme s = dephasing_scheme(0.1, 1.0);
  const double qfi = oracle::dephasing_qfi(1.0, 0.1);
  for (MeasurementType type : {MeasurementType::Projection, MeasurementType::LC, MeasurementType::Rotation}) {
    Algorithm alg;
    alg.max_episode = 60;
    Scenario sc = Scenario::measurement(type);
    const OptimizeResult r = optimize(s, sc, alg, default_objective(sc));
    INFO(to_string(type) << " cfi " << r.record.best_value);
    CHECK(r.record.best_value <= qfi + 1e-8);
    CMatrix sum = CMatrix::Zero(2, 2);
    for (const auto& e : r.scheme.measurement().elements()) sum += e;
    CHECK(oracle::max_abs(sum - oracle::id2()) < 1e-8);
    if (type == MeasurementType::Projection) CHECK(r.record.best_value >= 0.99 * qfi);
  }
}

TEST_CASE("comprehensive scenarios run and keep constraints") {
  const Scheme s = qubit_control_scheme(0.1, 4, {});
  for (CompType type : {CompType::SM, CompType::SC, CompType::CM, CompType::SCM}) {
    Scenario sc = Scenario::comprehensive(type);
    sc.ctrl_bound = {-1.0, 1.0};
    Algorithm alg;
    alg.kind = AlgorithmKind::PSO;
    alg.max_episode = 10;
    const OptimizeResult r = optimize(s, sc, alg, default_objective(sc));
    INFO(to_string(type));
    CHECK(std::isfinite(r.record.best_value));
    CHECK(std::abs(r.scheme.probe().density().trace() - 1.0) < 1e-12);
    CHECK(std::abs(objective_value(default_objective(sc), r.scheme) - r.record.best_value) <= 1e-10);
  }
}

TEST_CASE("unsupported combinations are rejected") {
  const Scheme s = dephasing_scheme(0.1, 1.0);
  Algorithm grape;
  grape.kind = AlgorithmKind::GRAPE;
  CHECK_THROWS_AS(optimize(s, Scenario::measurement(MeasurementType::Projection), grape, Objective{}), ValidationError);
  Objective cfim;
  cfim.kind = Objective::Kind::CFIM;
  CHECK_THROWS_AS(optimize(s, Scenario::measurement(MeasurementType::LC), grape, cfim), ValidationError);
  Algorithm de;
  CHECK_THROWS_AS(optimize(s, Scenario::measurement(MeasurementType::LC), de, Objective{}), ValidationError);
  CHECK_THROWS_AS(optimize(s, Scenario::control(), de, Objective{}), ValidationError);  // no Hc
  de.population = 1;
  CHECK_THROWS_AS(optimize(s, Scenario::state(), de, Objective{}), ValidationError);
}

TEST_CASE("stall criterion stops the loop") {
  // The QFI of a noiseless qubit does not depend on controls along sz.
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), linspace(0.0, 1.0, 5),
                    ControlSpec({oracle::sz()}, {}), {}, DynMethod::Expm);
  const Scheme s(ProbeState::from_vector(oracle::plus()), std::move(spec), sic_povm(2));
  Algorithm alg;
  alg.kind = AlgorithmKind::DE;
  alg.max_episode = 1000;
  const OptimizeResult r = optimize(s, Scenario::control(), alg, Objective{});
  CHECK(r.record.converged);
  CHECK(r.record.iterations == 20);
}
