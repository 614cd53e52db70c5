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
#include <cstring>
#include <string>

#include "oracles.hpp"
#include "qestim/control.hpp"
#include "qestim/linalg.hpp"
#include "qestim/log.hpp"
#include "qestim/measurement.hpp"
#include "qestim/scheme.hpp"

using namespace qestim;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

LindbladSpec qubit_dynamics() {
  return LindbladSpec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), {0.0, 0.5, 1.0});
}

CVector vec4(double a, double b, double c, double d) {
  CVector v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace

TEST_CASE("builtin states match the printed vectors") {
  CVector plus(2), minus(2);
  plus << kR, kR;
  minus << kR, -kR;
  CHECK(oracle::max_abs(builtin_state(BuiltinState::Plus).vector() - plus) <= 1e-15);
  CHECK(oracle::max_abs(builtin_state(BuiltinState::Minus).vector() - minus) <= 1e-15);
  CHECK(oracle::max_abs(builtin_state(BuiltinState::Bell, 1).vector() - vec4(kR, 0, 0, kR)) <= 1e-15);
  CHECK(oracle::max_abs(builtin_state(BuiltinState::Bell, 2).vector() - vec4(kR, 0, 0, -kR)) <= 1e-15);
  CHECK(oracle::max_abs(builtin_state(BuiltinState::Bell, 3).vector() - vec4(0, kR, kR, 0)) <= 1e-15);
  CHECK(oracle::max_abs(builtin_state(BuiltinState::Bell, 4).vector() - vec4(0, kR, -kR, 0)) <= 1e-15);
}

TEST_CASE("builtin state errors") {
  CHECK_THROWS_AS(builtin_state(BuiltinState::Bell), ValidationError);
  CHECK_THROWS_AS(builtin_state(BuiltinState::Bell, 0), ValidationError);
  CHECK_THROWS_AS(builtin_state(BuiltinState::Bell, 5), ValidationError);
  CHECK_THROWS_AS(builtin_state_from_name("GHZ"), ValidationError);
  CHECK(builtin_state_from_name("Plus") == BuiltinState::Plus);
}

TEST_CASE("builtin states satisfy the probe invariants") {
  for (int k = 1; k <= 4; ++k) {
    const ProbeState s = builtin_state(BuiltinState::Bell, k);
    CHECK(std::abs(s.vector().norm() - 1.0) < 1e-12);
    CHECK(std::abs(s.density().trace() - 1.0) < 1e-12);
    CHECK(linalg::hermiticity_defect(s.density()) == 0.0);
  }
}

TEST_CASE("probe state validation") {
  CVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(ProbeState::from_vector(v), ValidationError);
  CMatrix rho = 0.5 * oracle::id2();
  rho(0, 1) = 1e-13;  // defect below 1e-12 is symmetrized
  const ProbeState ok = ProbeState::from_density(rho);
  CHECK(linalg::hermiticity_defect(ok.density()) == 0.0);
  rho(0, 1) = 1e-9;
  CHECK_THROWS_AS(ProbeState::from_density(rho), ValidationError);
  CMatrix neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(ProbeState::from_density(neg), ValidationError);
  CHECK_THROWS_AS(ProbeState::from_density(0.4 * oracle::id2()), ValidationError);
}

TEST_CASE("control shapes follow the table formulas") {
  using namespace shape;
  CHECK(control_shape_eval(Zero{}, 0.3, 1.0) == 0.0);
  CHECK(control_shape_eval(Linear{2.0, 1.0}, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(control_shape_eval(Saw{1.0, 1}, 0.25, 1.0) - 0.5) <= 1e-15);
  CHECK(std::abs(control_shape_eval(GaussianEdge{1.0, 1.0}, 0.0, 10.0) + std::exp(-100.0)) <= 1e-15);

  const double t = 0.37, T = 2.0;
  CHECK(std::abs(control_shape_eval(Sine{1.5, 3.0, 0.2}, t, T) - 1.5 * std::sin(3.0 * t + 0.2)) <= 1e-15);
  const double x = 3.0 * t / T;
  CHECK(std::abs(control_shape_eval(Saw{0.7, 3}, t, T) - 2.0 * 0.7 * (x - std::floor(0.5 + x))) <= 1e-15);
  CHECK(std::abs(control_shape_eval(Triangle{0.7, 3}, t, T) -
                 (2.0 * std::abs(2.0 * 0.7 * (x - std::floor(0.5 + x))) - 1.0)) <= 1e-15);
  CHECK(std::abs(control_shape_eval(Gaussian{2.0, 0.5, 0.3}, t, T) -
                 2.0 * std::exp(-(t - 0.5) * (t - 0.5) / 0.6)) <= 1e-15);
}

TEST_CASE("control shape validation and purity") {
  using namespace shape;
  CHECK_THROWS_AS(control_shape_eval(Gaussian{1.0, 0.0, 0.0}, 0.1, 1.0), ValidationError);
  CHECK_THROWS_AS(control_shape_eval(GaussianEdge{1.0, -1.0}, 0.1, 1.0), ValidationError);
  CHECK_THROWS_AS(control_shape_eval(Saw{1.0, 0}, 0.1, 1.0), ValidationError);
  CHECK_THROWS_AS(control_shape_eval(Triangle{1.0, -2}, 0.1, 1.0), ValidationError);
  const ControlShape s = Triangle{0.3, 2};
  const double a = control_shape_eval(s, 0.123, 1.7);
  const double b = control_shape_eval(s, 0.123, 1.7);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("control shapes are sampled at sub-interval midpoints") {
  const std::vector<double> tspan{0.0, 0.5, 1.0};
  const auto seq = sample_control_shape(shape::Linear{2.0, 0.0}, tspan);
  REQUIRE(seq.size() == 2);
  CHECK(seq[0] == doctest::Approx(0.5));
  CHECK(seq[1] == doctest::Approx(1.5));
}

TEST_CASE("control amplitudes are held piecewise-constant") {
  const ControlSpec spec({oracle::sx()}, {{1.0, 2.0}});
  CHECK(spec.amplitude(0, 0, 4) == 1.0);
  CHECK(spec.amplitude(0, 1, 4) == 1.0);
  CHECK(spec.amplitude(0, 2, 4) == 2.0);
  CHECK(spec.amplitude(0, 3, 4) == 2.0);
  CHECK_THROWS_AS(spec.validate(2, 3), ValidationError);  // 2 does not divide 3
  CHECK_THROWS_AS(ControlSpec({oracle::sx()}, {{1.0}}, ControlBounds{1.0, -1.0}), ValidationError);
}

TEST_CASE("SIC-POVM for d = 2") {
  const Measurement m = sic_povm(2);
  REQUIRE(m.size() == 4);
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const auto& e : m.elements()) {
    CHECK(std::abs(e.trace() - 0.5) < 1e-15);
    sum += e;
  }
  CHECK(oracle::max_abs(sum - oracle::id2()) <= 1e-10);
}

TEST_CASE("SIC-POVM for d = 3 has equal overlaps 1/4") {
  const Measurement m = sic_povm(3);
  REQUIRE(m.size() == 9);
  // Overlaps from the elements directly: Tr(P_m P_n) = |<m|n>|^2 for projectors P = d Pi.
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const double overlap = (9.0 * m.elements()[i] * m.elements()[j]).trace().real();
      CHECK(std::abs(overlap - 0.25) < 1e-10);
    }
  }
}

TEST_CASE("bundled SIC-POVMs are complete and rank one") {
  CHECK(sic_max_dimension() >= 16);
  for (int d = 2; d <= sic_max_dimension(); ++d) {
    const Measurement m = sic_povm(d);
    CHECK(m.size() == static_cast<std::size_t>(d * d));
    CMatrix sum = CMatrix::Zero(d, d);
    double second = 0.0;
    double worst_overlap = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const CMatrix& e = m.elements()[i];
      sum += e;
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(e, Eigen::EigenvaluesOnly);
      second = std::max(second, std::abs(eig.eigenvalues()(d - 2)));
      if (i > 0) {
        const double ov = (double(d * d) * m.elements()[0] * e).trace().real();
        worst_overlap = std::max(worst_overlap, std::abs(ov - 1.0 / (d + 1)));
      }
    }
    INFO("d = " << d);
    CHECK(oracle::max_abs(sum - CMatrix::Identity(d, d)) <= 1e-10);
    CHECK(second < 1e-10);
    CHECK(worst_overlap < 1e-10);
  }
  CHECK_THROWS_AS(sic_povm(1), ValidationError);
  CHECK_THROWS_AS(sic_povm(sic_max_dimension() + 1), ValidationError);
}

TEST_CASE("measurement validation") {
  CHECK_THROWS_AS(Measurement({0.5 * oracle::id2()}), ValidationError);
  CMatrix bad(2, 2);
  bad << 1.5, 0.0, 0.0, 0.0;
  CMatrix other(2, 2);
  other << -0.5, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(Measurement({bad, other}), ValidationError);
  CHECK_NOTHROW(Measurement::projective(CMatrix::Identity(2, 2)));
}

TEST_CASE("Hamiltonian Hermiticity policy") {
  CMatrix h = 0.5 * oracle::sz();
  h(0, 1) = 1e-13;
  const auto spec = HamiltonianSpec::constant(h, {oracle::sz()});
  CHECK(linalg::hermiticity_defect(spec.free(0, 0.0)) == 0.0);
  h(0, 1) = 1e-6;
  CHECK_THROWS_AS(HamiltonianSpec::constant(h, {oracle::sz()}), ValidationError);
}

TEST_CASE("time-series Hamiltonian length must match tspan") {
  const auto ham = HamiltonianSpec::time_series({oracle::sz(), oracle::sz()}, {oracle::sz()});
  CHECK_THROWS_AS(LindbladSpec(ham, {0.0, 0.5, 1.0}), ValidationError);
  CHECK_NOTHROW(LindbladSpec(ham, {0.0, 1.0}));
}

TEST_CASE("decay channel validation") {
  CHECK_THROWS_AS(DecayChannel(oracle::sz(), -0.1), ValidationError);
  CHECK_THROWS_AS(DecayChannel(oracle::sz(), std::vector<double>{0.1, -0.2}), ValidationError);
  const auto ham = HamiltonianSpec::constant(oracle::sz(), {oracle::sz()});
  CHECK_THROWS_AS(LindbladSpec(ham, {0.0, 0.5, 1.0}, {}, {DecayChannel(oracle::sz(), std::vector<double>{0.1, 0.2})}),
                  ValidationError);
  CHECK_THROWS_AS(LindbladSpec(ham, {0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(LindbladSpec(ham, {0.0}), ValidationError);
}

TEST_CASE("general scheme defaults the measurement to SIC(d)") {
  const Scheme s = make_general_scheme(builtin_state(BuiltinState::Plus), qubit_dynamics());
  CHECK(s.dim() == 2);
  CHECK(s.measurement().size() == 4);
  CHECK(!s.prior().has_value());
}

TEST_CASE("general scheme rejects dimension mismatches") {
  try {
    make_general_scheme(builtin_state(BuiltinState::Bell, 1), qubit_dynamics());
    FAIL("expected a dimension mismatch");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('4') != std::string::npos);
    CHECK(msg.find('2') != std::string::npos);
  }
  CHECK_THROWS_AS(make_general_scheme(builtin_state(BuiltinState::Plus), qubit_dynamics(), sic_povm(3)),
                  ValidationError);
}

TEST_CASE("general scheme carries a prior") {
  RVector x = RVector::LinSpaced(11, 0.0, 1.0);
  RVector p = RVector::Ones(11);
  RVector dp = RVector::Zero(11);
  const Scheme s = make_general_scheme(builtin_state(BuiltinState::Plus), qubit_dynamics(), sic_povm(2),
                                       PriorSpec({x}, p, {dp}));
  REQUIRE(s.prior().has_value());
  CHECK(s.prior()->weights().dot(s.prior()->p()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prior renormalization warns above 1e-3 and rescales dp") {
  std::vector<std::string> warnings;
  const auto previous = set_warning_handler([&](const std::string& m) { warnings.push_back(m); });
  RVector x = RVector::LinSpaced(5, 0.0, 1.0);
  RVector p = 2.0 * RVector::Ones(5);
  RVector dp = RVector::Ones(5);
  const PriorSpec prior({x}, p, {dp});
  set_warning_handler(previous);
  CHECK(warnings.size() == 1);
  CHECK(prior.p()(0) == doctest::Approx(1.0));
  CHECK(prior.dp()[0](0) == doctest::Approx(0.5));
  CHECK(std::abs(prior.weights().dot(prior.p()) - 1.0) < 1e-6);
}

TEST_CASE("scheme assembly leaves its inputs untouched") {
  const ProbeState probe = builtin_state(BuiltinState::Plus);
  const LindbladSpec dyn = qubit_dynamics();
  const Measurement m = sic_povm(2);
  const CMatrix rho_before = probe.density();
  const Scheme s = make_general_scheme(probe, dyn, m);
  const Scheme s2 = s.with_probe(builtin_state(BuiltinState::Minus));
  CHECK(probe.density() == rho_before);
  CHECK(s.probe().density() == rho_before);
  CHECK(s2.probe().density() != rho_before);
  CHECK(m.elements() == s.measurement().elements());
}
