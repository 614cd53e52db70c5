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

#pragma once

// Shared models and oracles for the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "qestim/metrology.hpp"

namespace fixture {

using namespace qestim;

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

inline CMatrix from_bloch(const Eigen::Vector3d& r) {
  return 0.5 * (oracle::id2() + r(0) * oracle::sx() + r(1) * oracle::sy() + r(2) * oracle::sz());
}

inline CMatrix bloch_derivative(const Eigen::Vector3d& dr) {
  return 0.5 * (dr(0) * oracle::sx() + dr(1) * oracle::sy() + dr(2) * oracle::sz());
}

inline Scheme qubit_scheme(double gamma, std::vector<double> tspan, DynMethod method, Measurement m) {
  std::vector<DecayChannel> decays;
  if (gamma > 0.0) decays.emplace_back(oracle::sz(), gamma);
  LindbladSpec spec(HamiltonianSpec::constant(0.5 * oracle::sz(), {0.5 * oracle::sz()}), std::move(tspan), {},
                    std::move(decays), method);
  return Scheme(ProbeState::from_vector(oracle::plus()), std::move(spec), std::move(m));
}

inline Measurement sx_basis() {
  CMatrix basis(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  basis << s, s, s, -s;
  return Measurement::projective(basis);
}

// A random two-parameter qubit model: mixed state with |r| < 1 and two
// independent Bloch derivatives. Nearly non-identifiable draws (QFIM
// condition number above 1e3) are redrawn.
struct QubitModel {
  CMatrix rho;
  MatrixList drho;
  Eigen::Vector3d r;
  std::vector<Eigen::Vector3d> dr;
  RMatrix w;
};

inline QubitModel random_qubit_model_once(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 0.9);
  QubitModel m;
  m.r = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized() * u(rng);
  m.rho = from_bloch(m.r);
  for (int a = 0; a < 2; ++a) {
    m.dr.emplace_back(g(rng), g(rng), g(rng));
    m.drho.push_back(bloch_derivative(m.dr.back()));
  }
  RMatrix b(2, 2);
  b << g(rng), g(rng), g(rng), g(rng);
  m.w = b * b.transpose() + 0.2 * RMatrix::Identity(2, 2);
  return m;
}

inline QubitModel random_qubit_model(std::mt19937_64& rng) {
  for (;;) {
    QubitModel m = random_qubit_model_once(rng);
    const RVector ev = Eigen::SelfAdjointEigenSolver<RMatrix>(qfim_sld(m.rho, m.drho)).eigenvalues();
    if (ev.minCoeff() * 1e3 >= ev.maxCoeff()) return m;
  }
}

// Qubit QFIM from Bloch vectors, polarization identity on bloch_qfi.
inline RMatrix bloch_qfim(const Eigen::Vector3d& r, const std::vector<Eigen::Vector3d>& dr) {
  const std::size_t n = dr.size();
  RMatrix f(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      f(a, b) = 0.25 * (oracle::bloch_qfi(r, dr[a] + dr[b]) - oracle::bloch_qfi(r, dr[a] - dr[b]));
  return f;
}

// Bayesian bounds on the prior example: H0(x) = (sx cos x + sz sin x) / 2,
// probe |+>, sz dephasing, SIC(2), Gaussian prior around pi/2 on [0, pi].

constexpr double kBayesGamma = 0.1;
constexpr double kBayesTime = 1.0;

inline Scheme bayes_scheme(DynMethod method) {
  const int n = 200;
  RVector x(n), p(n), dp(n);
  const double mu = M_PI / 2;
  for (int i = 0; i < n; ++i) {
    x(i) = M_PI * i / (n - 1);
    p(i) = std::exp(-(x(i) - mu) * (x(i) - mu) / 2.0);
    dp(i) = -(x(i) - mu) * p(i);
  }
  auto h0 = [](const RVector& u, double) {
    return CMatrix(0.5 * (oracle::sx() * std::cos(u(0)) + oracle::sz() * std::sin(u(0))));
  };
  auto dh = [](const RVector& u, double) {
    return MatrixList{0.5 * (-oracle::sx() * std::sin(u(0)) + oracle::sz() * std::cos(u(0)))};
  };
  LindbladSpec spec(HamiltonianSpec::parametric(h0, dh, RVector::Constant(1, mu)), linspace(0.0, kBayesTime, 11),
                    {}, {DecayChannel(oracle::sz(), kBayesGamma)}, method);
  return make_general_scheme(ProbeState::from_vector(oracle::plus()), std::move(spec), sic_povm(2),
                             PriorSpec({x}, p, {dp}));
}

// Bloch equations for the same model: dr/dt = n x r - 2 gamma (rx, ry, 0).
inline Eigen::Vector3d bloch_final(double x) {
  const Eigen::Vector3d n(std::cos(x), 0.0, std::sin(x));
  Eigen::Matrix3d m;
  m << -2.0 * kBayesGamma, -n(2), n(1), n(2), -2.0 * kBayesGamma, -n(0), -n(1), n(0), 0.0;
  const Eigen::Matrix3d e = (m * kBayesTime).exp();
  return e * Eigen::Vector3d(1.0, 0.0, 0.0);
}

struct OracleBounds {
  double vtb, qvtb;
};

inline OracleBounds bayes_oracle() {
  const int n = 200;
  const double mu = M_PI / 2, h = 1e-5;
  std::vector<double> x(n), p(n), dp(n);
  for (int i = 0; i < n; ++i) {
    x[i] = M_PI * i / (n - 1);
    p[i] = std::exp(-(x[i] - mu) * (x[i] - mu) / 2.0);
    dp[i] = -(x[i] - mu) * p[i];
  }
  const double z = oracle::trapezoid(x, p);
  for (int i = 0; i < n; ++i) {
    p[i] /= z;
    dp[i] /= z;
  }
  const MatrixList sic = sic_povm(2).elements();
  std::vector<double> ip(n), pq(n), pc(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d r = bloch_final(x[i]);
    const Eigen::Vector3d dr = (bloch_final(x[i] + h) - bloch_final(x[i] - h)) / (2.0 * h);
    const CMatrix rho = from_bloch(r), drho = bloch_derivative(dr);
    double fc = 0.0;
    for (const auto& e : sic) {
      const double pm = (rho * e).trace().real();
      const double dpm = (drho * e).trace().real();
      fc += dpm * dpm / pm;
    }
    ip[i] = dp[i] * dp[i] / p[i];
    pq[i] = p[i] * oracle::bloch_qfi(r, dr);
    pc[i] = p[i] * fc;
  }
  const double prior_info = oracle::trapezoid(x, ip);
  return {1.0 / (prior_info + oracle::trapezoid(x, pc)), 1.0 / (prior_info + oracle::trapezoid(x, pq))};
}


inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  return scale * 0.5 * (a + a.adjoint());
}

inline CMatrix random_operator(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = scale * Complex(g(rng), g(rng));
  return a;
}

inline CVector random_state(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  CVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

// Random open-system model of dimension d with one estimated parameter
// entering H linearly, one control channel and two decay channels.
struct RandomModel {
  CMatrix ha, hb, hc;
  MatrixList ops;
  std::vector<double> rates;
  CVector psi;
  std::vector<double> ctrl;

  LindbladSpec spec(double u, DynMethod method, std::vector<double> tspan, OdeOptions ode = {}) const {
    const CMatrix h0 = ha + u * hb;
    std::vector<DecayChannel> decays;
    for (std::size_t i = 0; i < ops.size(); ++i) decays.emplace_back(ops[i], rates[i]);
    return LindbladSpec(HamiltonianSpec::constant(h0, {hb}), std::move(tspan), ControlSpec({hc}, {ctrl}),
                        std::move(decays), method, ode);
  }
};

inline RandomModel random_model(std::mt19937_64& rng, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.05, 0.4);
  RandomModel m;
  m.ha = random_hermitian(rng, d);
  m.hb = random_hermitian(rng, d, 0.5);
  m.hc = random_hermitian(rng, d, 0.3);
  m.ops = {random_operator(rng, d, 0.5), random_operator(rng, d, 0.3)};
  m.rates = {u(rng), u(rng)};
  m.psi = random_state(rng, d);
  m.ctrl = {0.4, -0.7, 0.2, 0.9};
  return m;
}

}  // namespace fixture
