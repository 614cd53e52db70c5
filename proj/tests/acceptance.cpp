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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qestim/adaptive.hpp"
#include "qestim/error.hpp"
#include "qestim/linalg.hpp"
#include "qestim/log.hpp"
#include "qestim/nv.hpp"
#include "qestim/optimize.hpp"

using namespace qestim;
using namespace fixture;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

using Seconds = std::chrono::duration<double>;

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const CMatrix& m) { return oracle::max_abs(m); }

// Noiseless qubit H = sz/2 (omega = 1), probe |+>: QFI(t) = t^2.
Verdict qfi_law() {
  Verdict v;
  const auto tspan = linspace(0.0, 2.0, 41);  // holds 0.5, 1 and 2 exactly
  double worst = 0.0;
  const double secs = timed([&] {
    for (DynMethod m : {DynMethod::Expm, DynMethod::Ode}) {
      const BoundResult f = qfim(qubit_scheme(0.0, tspan, m, sx_basis()));
      for (std::size_t k : {10u, 20u, 40u}) {
        const double t = tspan[k];
        worst = std::max(worst, std::abs(f.values[k](0, 0).real() - t * t));
      }
    }
  });
  v.require(worst <= 1e-6, "|QFI - t^2| <= 1e-6");
  v.require(secs < 1.0, "runtime < 1 s");
  v.note(fmt::format("max |QFI - t^2| = {:.2e} (expm and ode), {:.3f} s", worst, secs));
  return v;
}

// Same model with sz dephasing: QFI(t) = t^2 exp(-4 gamma t).
Verdict dephasing_law() {
  Verdict v;
  const auto tspan = linspace(0.0, 2.0, 41);
  double worst_ode = 0.0, worst_expm = 0.0;
  const double secs = timed([&] {
    for (double gamma : {0.1, 0.5}) {
      for (DynMethod m : {DynMethod::Expm, DynMethod::Ode}) {
        const BoundResult f = qfim(qubit_scheme(gamma, tspan, m, sx_basis()));
        double& worst = m == DynMethod::Ode ? worst_ode : worst_expm;
        for (std::size_t k = 0; k < tspan.size(); ++k) {
          worst = std::max(worst, std::abs(f.values[k](0, 0).real() - oracle::dephasing_qfi(tspan[k], gamma)));
        }
      }
    }
  });
  v.require(worst_ode <= 1e-4, "ode within 1e-4");
  v.require(worst_expm <= 1e-6, "expm within 1e-6");
  v.require(secs < 5.0, "runtime < 5 s");
  v.note(fmt::format("max error ode {:.2e}, expm {:.2e}, {:.3f} s", worst_ode, worst_expm, secs));
  return v;
}

Verdict cfi_equals_qfi() {
  Verdict v;
  const auto tspan = linspace(0.0, 2.0, 41);
  double worst = 0.0;
  for (DynMethod m : {DynMethod::Expm, DynMethod::Ode}) {
    const Scheme s = qubit_scheme(0.0, tspan, m, sx_basis());
    const BoundResult q = qfim(s), c = cfim(s);
    for (std::size_t k = 0; k < tspan.size(); ++k) {
      worst = std::max(worst, std::abs(q.values[k](0, 0).real() - c.values[k](0, 0).real()));
    }
  }
  v.require(worst <= 1e-6, "|CFI - QFI| <= 1e-6");
  v.note(fmt::format("max |CFI - QFI| = {:.2e}", worst));
  return v;
}

// NV scheme, tspan 0:0.01:2: Expm against Ode at tolerances 1e-10.
Verdict nv_agreement() {
  Verdict v;
  double worst = 0.0;
  const double secs = timed([&] {
    nv::NVParams p;
    const Scheme a = nv::nv_scheme(p);
    p.method = DynMethod::Ode;
    p.ode = OdeOptions{1e-10, 1e-10};
    const Scheme b = nv::nv_scheme(p);
    const Trajectory ta = propagate(a), tb = propagate(b);
    for (std::size_t j = 0; j < ta.size(); ++j) {
      worst = std::max(worst, max_abs(ta.rho[j] - tb.rho[j]));
      for (std::size_t k = 0; k < ta.num_params(); ++k) worst = std::max(worst, max_abs(ta.drho[j][k] - tb.drho[j][k]));
    }
  });
  v.require(worst <= 1e-6, "elementwise agreement <= 1e-6");
  v.require(secs < 30.0, "runtime < 30 s");
  v.note(fmt::format("max |expm - ode| over rho and drho = {:.2e}, {:.2f} s (ode atol = rtol = 1e-10)", worst, secs));
  return v;
}

// Co-propagated derivatives against central differences on every d <= 3 model.
Verdict derivative_consistency() {
  Verdict v;
  const double h = 1e-5;
  double worst = 0.0;
  std::mt19937_64 rng(5);
  for (Eigen::Index d : {2, 3}) {
    const RandomModel model = random_model(rng, d);
    const ProbeState probe = ProbeState::from_vector(model.psi);
    for (DynMethod m : {DynMethod::Expm, DynMethod::Ode}) {
      const auto tspan = linspace(0.0, 1.2, 5);
      const OdeOptions ode = m == DynMethod::Ode ? OdeOptions{1e-12, 1e-12} : OdeOptions{};
      const Trajectory traj = evolve(model.spec(0.4, m, tspan, ode), probe);
      for (std::size_t j = 0; j < traj.size(); ++j) {
        const CMatrix fd = oracle::central_difference(
            [&](double u) { return evolve(model.spec(u, m, tspan, ode), probe).rho[j]; }, 0.4, h);
        worst = std::max(worst, max_abs(traj.drho[j][0] - fd));
      }
    }
  }
  // Parametric Hamiltonian (sx cos u + sz sin u) / 2 with dephasing.
  auto h0 = [](const RVector& u, double) {
    return CMatrix(0.5 * (oracle::sx() * std::cos(u(0)) + oracle::sz() * std::sin(u(0))));
  };
  auto dh = [](const RVector& u, double) {
    return MatrixList{0.5 * (-oracle::sx() * std::sin(u(0)) + oracle::sz() * std::cos(u(0)))};
  };
  const ProbeState plus = ProbeState::from_vector(oracle::plus());
  for (DynMethod m : {DynMethod::Expm, DynMethod::Ode}) {
    const OdeOptions ode = m == DynMethod::Ode ? OdeOptions{1e-12, 1e-12} : OdeOptions{};
    auto spec_at = [&](double u) {
      return LindbladSpec(HamiltonianSpec::parametric(h0, dh, RVector::Constant(1, u)), linspace(0.0, 2.0, 11), {},
                          {DecayChannel(oracle::sz(), 0.1)}, m, ode);
    };
    const Trajectory traj = evolve(spec_at(M_PI / 4), plus);
    for (std::size_t j = 0; j < traj.size(); ++j) {
      const CMatrix fd =
          oracle::central_difference([&](double u) { return evolve(spec_at(u), plus).rho[j]; }, M_PI / 4, h);
      worst = std::max(worst, max_abs(traj.drho[j][0] - fd));
    }
  }
  // Parametric amplitude-damping channel with a phase: K(u).
  auto kraus_at = [](double u) {
    const double g = 0.3;
    CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
    k0(0, 0) = std::exp(Complex(0, -u / 2));
    k0(1, 1) = std::sqrt(1 - g) * std::exp(Complex(0, u / 2));
    k1(0, 1) = std::sqrt(g);
    CMatrix d0 = CMatrix::Zero(2, 2);
    d0(0, 0) = Complex(0, -0.5) * k0(0, 0);
    d0(1, 1) = Complex(0, 0.5) * k0(1, 1);
    return KrausSpec({k0, k1}, {{d0, CMatrix::Zero(2, 2)}});
  };
  const KrausResult kr = kraus_apply(kraus_at(0.6), plus);
  const CMatrix kfd =
      oracle::central_difference([&](double u) { return kraus_apply(kraus_at(u), plus).rho; }, 0.6, h);
  worst = std::max(worst, max_abs(kr.drho[0] - kfd));

  v.require(worst <= 1e-5, "max |drho - FD| <= 1e-5");
  v.note(fmt::format("max |drho - FD| = {:.2e} over random d = 2, 3 models, a parametric H and a Kraus channel "
                     "(ode at 1e-12)",
                     worst));
  return v;
}

Verdict bound_orderings() {
  Verdict v;
  std::mt19937_64 rng(7);
  const Measurement sic = sic_povm(2);
  double worst_lo = 0.0, worst_hi = 0.0, worst_nhb = 0.0, worst_cfim = 0.0;
  for (int k = 0; k < 20; ++k) {
    const QubitModel m = random_qubit_model(rng);
    const RMatrix f = qfim_sld(m.rho, m.drho);
    const double base = weighted_inverse_trace(f, m.w);
    const double h = hcrb(m.rho, m.drho, m.w);
    const double n = nhb(m.rho, m.drho, m.w);
    worst_lo = std::max(worst_lo, base - h);
    worst_hi = std::max(worst_hi, h - 2.0 * base);
    worst_nhb = std::max(worst_nhb, h - n);
    const RMatrix gap = f - cfim(m.rho, m.drho, sic);
    worst_cfim = std::max(worst_cfim, -Eigen::SelfAdjointEigenSolver<RMatrix>(gap).eigenvalues().minCoeff());
  }
  v.require(worst_lo <= 1e-6, "Tr(W F^-1) <= HCRB");
  v.require(worst_hi <= 1e-6, "HCRB <= 2 Tr(W F^-1)");
  v.require(worst_nhb <= 1e-6, "NHB >= HCRB");
  v.require(worst_cfim <= 1e-6, "CFIM <= QFIM");
  std::mt19937_64 rng1(6);
  double worst_one = 0.0;
  for (int k = 0; k < 5; ++k) {
    const QubitModel m = random_qubit_model(rng1);
    const MatrixList one{m.drho[0]};
    const double f = qfim_sld(m.rho, one)(0, 0);
    worst_one = std::max(worst_one, std::abs(hcrb(m.rho, one, RMatrix::Identity(1, 1)) - 1.0 / f));
  }
  v.require(worst_one <= 1e-4, "single-parameter HCRB = 1/QFI");
  v.note(fmt::format("worst violations: base-HCRB {:.1e}, HCRB-2base {:.1e}, HCRB-NHB {:.1e}, "
                     "-mineig(QFIM-CFIM) {:.1e}; |HCRB - 1/QFI| {:.1e}",
                     worst_lo, worst_hi, worst_nhb, worst_cfim, worst_one));
  return v;
}

Verdict bayesian_bounds() {
  Verdict v;
  const OracleBounds expected = bayes_oracle();
  double worst = 0.0;
  for (DynMethod m : {DynMethod::Expm, DynMethod::Ode}) {
    const Scheme s = bayes_scheme(m);
    const double vt = vtb(s)(0, 0), qv = qvtb(s)(0, 0);
    v.require(qv <= vt, "QVTB <= VTB");
    worst = std::max({worst, std::abs(vt - expected.vtb), std::abs(qv - expected.qvtb)});
    if (m == DynMethod::Expm) v.note(fmt::format("VTB {:.10f}, QVTB {:.10f}", vt, qv));
  }
  v.require(worst <= 1e-6, "quadrature oracle within 1e-6");
  v.note(fmt::format("max |bound - oracle| = {:.2e} (expm and ode)", worst));
  return v;
}

bool monotone(const std::vector<double>& h, bool maximize) {
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (maximize ? h[k] < h[k - 1] : h[k] > h[k - 1]) return false;
  }
  return true;
}

Scheme qubit_control_scheme(int steps, std::vector<std::vector<double>> ctrl) {
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), linspace(0.0, 1.0, steps + 1),
                    ControlSpec({oracle::sx(), oracle::sy()}, std::move(ctrl)), {DecayChannel(oracle::sz(), 0.1)},
                    DynMethod::Expm);
  return Scheme(ProbeState::from_vector(oracle::plus()), std::move(spec), sic_povm(2));
}

Verdict optimization_sanity() {
  Verdict v;
  // NV ControlOpt, zero initial controls on 4 segments, bounds [-2, 2].
  const Scheme nvs = nv::nv_scheme();
  opt::Scenario sc = opt::Scenario::control(ControlBounds{-2.0, 2.0});
  sc.ctrl = std::vector<std::vector<double>>(3, std::vector<double>(4, 0.0));
  for (opt::AlgorithmKind kind : {opt::AlgorithmKind::DE, opt::AlgorithmKind::PSO}) {
    opt::Algorithm alg;
    alg.kind = kind;
    alg.seed = 42;
    alg.population = 4;
    alg.max_episode = 5;
    const auto r = opt::optimize(nvs, sc, alg, opt::default_objective(sc));
    v.require(monotone(r.record.history, r.record.maximize), fmt::format("monotone {} log", opt::to_string(kind)));
    v.note(fmt::format("NV {}: Tr(F^-1) {:.6g} -> {:.6g}", opt::to_string(kind), r.record.history.front(),
                       r.record.best_value));
  }
  // Adjoint control gradient against central differences.
  std::vector<std::vector<double>> wavy(2, std::vector<double>(10));
  for (int j = 0; j < 10; ++j) {
    wavy[0][j] = 0.3 * std::sin(0.7 * j);
    wavy[1][j] = -0.2 + 0.05 * j;
  }
  const opt::Problem p(qubit_control_scheme(10, wavy), opt::Scenario::control(), Objective{});
  const RVector g = p.gradient(p.initial());
  const RVector fd = p.finite_difference_gradient(p.initial(), 1e-6);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(fd(i)) >= 1e-3 * fd.cwiseAbs().maxCoeff()) worst = std::max(worst, std::abs(g(i) - fd(i)) / std::abs(fd(i)));
  }
  v.require(worst <= 1e-4, "GRAPE gradient within 1e-4 relative");
  v.note(fmt::format("max relative gradient error {:.2e}", worst));
  // StateOpt on the dephasing model.
  const double optimum = oracle::dephasing_qfi(1.0, 0.1);
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), linspace(0.0, 1.0, 11), {},
                    {DecayChannel(oracle::sz(), 0.1)}, DynMethod::Expm);
  CVector psi(2);
  psi << std::cos(0.3), std::sin(0.3);
  opt::Scenario ss = opt::Scenario::state();
  ss.psi = psi;
  opt::Algorithm de;
  de.max_episode = 300;
  const auto r = opt::optimize(Scheme(ProbeState::from_vector(psi), std::move(spec), sic_povm(2)), ss, de, Objective{});
  v.require(r.record.best_value >= 0.99 * optimum, "StateOpt within 1%");
  v.note(fmt::format("StateOpt DE QFI {:.8f} vs t^2 e^(-4 gamma t) = {:.8f}", r.record.best_value, optimum));
  return v;
}

Verdict error_tools() {
  Verdict v;
  const Scheme s = qubit_control_scheme(4, {{0.2, -0.1, 0.4, 0.05}, {0.0, 0.1, 0.0, -0.2}});
  const auto a = error::error_evaluation(s, 1e-8);
  const auto b = error::error_evaluation(s, 2e-8);
  const double hom = std::abs(b.output_error_scaling - 2.0 * a.output_error_scaling) / b.output_error_scaling;
  v.require(hom <= 1e-10, "homogeneity");
  const auto c = error::error_control(s, 1e-9);
  const auto r = error::error_evaluation(s, c.input_error_scaling);
  v.require(r.output_error_scaling <= 1e-9 * (1.0 + 1e-6), "round trip");
  CMatrix rho0(2, 2);
  rho0 << 0.7, 0.2, 0.2, 0.3;
  const auto full = error::error_evaluation(s.with_probe(ProbeState::from_density(rho0)), 1e-8);
  v.require(full.truncation_delta.cwiseAbs().maxCoeff() == 0.0, "dF = 0 for full rank");
  v.note(fmt::format("homogeneity {:.1e}, round trip {:.10e} <= 1e-9, dF = {:g}", hom, r.output_error_scaling,
                     full.truncation_delta.cwiseAbs().maxCoeff()));
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Verdict nv_module() {
  Verdict v;
  const auto s = nv::spin1_ops();
  const CMatrix comm = s[0] * s[1] - s[1] * s[0] - kI * s[2];
  const CMatrix cas = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 2.0 * CMatrix::Identity(3, 3);
  v.require(max_abs(comm) <= 1e-14, "[s1, s2] = i s3");
  v.require(max_abs(cas) <= 1e-14, "Casimir = 2I");
  CMatrix s3 = CMatrix::Zero(3, 3);
  s3(0, 0) = 1.0;
  s3(2, 2) = -1.0;
  v.require(s[2] == s3, "s3 = diag(1, 0, -1)");
  const nv::NVParams p;
  v.require(same_bits(p.D, 18032.741831605414) && same_bits(p.gS, 176.1176841602438) &&
                same_bits(p.gI, 0.027143360527015815) && same_bits(p.A1, 22.933626371205488) &&
                same_bits(p.A2, 19.038051480754145) && same_bits(p.gamma, 6.283185307179586) &&
                same_bits(p.B[0], 0.5) && same_bits(p.B[1], 0.5) && same_bits(p.B[2], 0.5),
            "constants byte-match");
  const Scheme sch = nv::nv_scheme();
  const CVector psi = sch.probe().vector();
  bool probe_ok = psi.size() == 6;
  for (Eigen::Index i = 0; probe_ok && i < 6; ++i) {
    const double want = (i == 0 || i == 4) ? 0.7071067811865475 : 0.0;
    probe_ok = same_bits(psi(i).real(), want) && psi(i).imag() == 0.0;
  }
  v.require(probe_ok, "probe byte-match");
  const auto& t = sch.lindblad().tspan();
  bool tspan_ok = t.size() == 201;
  for (std::size_t k = 0; tspan_ok && k < t.size(); ++k) tspan_ok = same_bits(t[k], static_cast<double>(k) / 100.0);
  v.require(tspan_ok, "tspan 0:0.01:2");
  v.note(fmt::format("|[s1,s2] - i s3| = {:.1e}, |Casimir - 2I| = {:.1e}", max_abs(comm), max_abs(cas)));
  return v;
}

Verdict tables_exact() {
  Verdict v;
  const double r = 1.0 / std::sqrt(2.0);
  auto vec = [](std::initializer_list<double> xs) {
    CVector out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out(i++) = x;
    return out;
  };
  double worst = 0.0;
  worst = std::max(worst, oracle::max_abs(builtin_state(BuiltinState::Plus).vector() - vec({r, r})));
  worst = std::max(worst, oracle::max_abs(builtin_state(BuiltinState::Minus).vector() - vec({r, -r})));
  worst = std::max(worst, oracle::max_abs(builtin_state(BuiltinState::Bell, 1).vector() - vec({r, 0, 0, r})));
  worst = std::max(worst, oracle::max_abs(builtin_state(BuiltinState::Bell, 2).vector() - vec({r, 0, 0, -r})));
  worst = std::max(worst, oracle::max_abs(builtin_state(BuiltinState::Bell, 3).vector() - vec({0, r, r, 0})));
  worst = std::max(worst, oracle::max_abs(builtin_state(BuiltinState::Bell, 4).vector() - vec({0, r, -r, 0})));
  using namespace shape;
  const double T = 2.0;
  for (double t : {0.0, 0.13, 0.37, 1.0, 1.61, 2.0}) {
    const double x = 3.0 * t / T;
    const double saw = 2.0 * 0.7 * (x - std::floor(0.5 + x));
    const double expect[] = {0.0,
                             2.0 * t + 1.0,
                             1.5 * std::sin(3.0 * t + 0.2),
                             saw,
                             2.0 * std::abs(saw) - 1.0,
                             2.0 * std::exp(-(t - 0.5) * (t - 0.5) / (2.0 * 0.3)),
                             1.2 - 1.2 * std::exp(-t * t / 0.4) - 1.2 * std::exp(-(t - T) * (t - T) / 0.4)};
    const ControlShape shapes[] = {Zero{},          Linear{2.0, 1.0},       Sine{1.5, 3.0, 0.2},
                                   Saw{0.7, 3},     Triangle{0.7, 3},       Gaussian{2.0, 0.5, 0.3},
                                   GaussianEdge{1.2, 0.4}};
    for (int i = 0; i < 7; ++i) worst = std::max(worst, std::abs(control_shape_eval(shapes[i], t, T) - expect[i]));
  }
  v.require(worst <= 1e-15, "within 1e-15");
  v.note(fmt::format("max deviation {:.1e} over 6 states and 7 shapes", worst));
  return v;
}

Verdict determinism() {
  Verdict v;
  const Scheme s = qubit_control_scheme(4, {});
  opt::Scenario sc = opt::Scenario::control(ControlBounds{-1.0, 1.0});
  for (opt::AlgorithmKind kind : {opt::AlgorithmKind::DE, opt::AlgorithmKind::PSO}) {
    opt::Algorithm alg;
    alg.kind = kind;
    alg.seed = 2024;
    alg.max_episode = 15;
    const auto a = opt::optimize(s, sc, alg, Objective{});
    const auto b = opt::optimize(s, sc, alg, Objective{});
    bool same = a.record.history.size() == b.record.history.size();
    for (std::size_t k = 0; same && k < a.record.history.size(); ++k) {
      same = same_bits(a.record.history[k], b.record.history[k]);
    }
    same = same && a.record.best == b.record.best;
    v.require(same, fmt::format("{} logs identical", opt::to_string(kind)));
  }
  // Adaptive logs: phase model x sz / 2, sx readout, uniform prior on [0, pi].
  auto h0 = [](const RVector& u, double) { return CMatrix(0.5 * u(0) * oracle::sz()); };
  auto dh = [](const RVector&, double) { return MatrixList{0.5 * oracle::sz()}; };
  LindbladSpec spec(HamiltonianSpec::parametric(h0, dh, RVector::Constant(1, 0.0)), {0.0, 1.0}, {},
                    {DecayChannel(oracle::sz(), 0.1)}, DynMethod::Expm);
  const int n = 60;
  RVector x(n), p = RVector::Constant(n, 1.0 / M_PI), dp = RVector::Zero(n);
  for (int i = 0; i < n; ++i) x(i) = M_PI * i / (n - 1);
  const Scheme as = make_general_scheme(ProbeState::from_vector(oracle::plus()), std::move(spec), sx_basis(),
                                        PriorSpec({x}, p, {dp}));
  for (adaptive::Method m : {adaptive::Method::FOP, adaptive::Method::MI}) {
    adaptive::AdaptiveStrategy s1 = adaptive::strategy_from_scheme(as), s2 = adaptive::strategy_from_scheme(as);
    const auto r1 = adaptive::adapt(as, s1, m, 50, adaptive::OutcomeSource::simulated(1.1, 8));
    const auto r2 = adaptive::adapt(as, s2, m, 50, adaptive::OutcomeSource::simulated(1.1, 8));
    bool same = r1.log.size() == r2.log.size();
    for (std::size_t k = 0; same && k < r1.log.size(); ++k) {
      same = same_bits(r1.log[k].offset, r2.log[k].offset) && r1.log[k].outcome == r2.log[k].outcome &&
             same_bits(r1.log[k].mean, r2.log[k].mean) && same_bits(r1.log[k].sd, r2.log[k].sd);
    }
    v.require(same, fmt::format("{} adaptive logs identical", adaptive::to_string(m)));
  }
  v.note("DE, PSO, FOP and MI logs bit-identical across repeated runs");
  return v;
}

}  // namespace

int main() {
  set_warning_handler(nullptr);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"analytic QFI law (noiseless qubit)", qfi_law},
      {"dephasing law", dephasing_law},
      {"CFI = QFI in the sx basis", cfi_equals_qfi},
      {"NV Expm/Ode trajectory agreement", nv_agreement},
      {"derivative consistency (d <= 3)", derivative_consistency},
      {"bound orderings on the random battery", bound_orderings},
      {"QVTB <= VTB with quadrature oracle", bayesian_bounds},
      {"optimization sanity", optimization_sanity},
      {"error tools", error_tools},
      {"NV module identities and constants", nv_module},
      {"builtin states and control shapes exact", tables_exact},
      {"determinism of optimization and adaptive logs", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    const double secs = timed([&] {
      try {
        v = check();
      } catch (const std::exception& e) {
        v.pass = false;
        v.notes.push_back(std::string("exception: ") + e.what());
      }
    });
    failed += v.pass ? 0 : 1;
    std::string detail;
    for (const auto& n : v.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::cout << fmt::format("{} {} ({:.2f} s): {}", v.pass ? "PASS" : "FAIL", name, secs, detail) << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - static_cast<std::size_t>(failed),
                           criteria.size())
            << std::endl;
  return failed == 0 ? 0 : 1;
}
