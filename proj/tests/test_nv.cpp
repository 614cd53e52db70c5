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

#include "oracles.hpp"
#include "qestim/linalg.hpp"
#include "qestim/metrology.hpp"
#include "qestim/nv.hpp"

using namespace qestim;

namespace {

CMatrix comm(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("spin-1 algebra") {
  const auto s = nv::spin1_ops();
  CHECK(oracle::max_abs(comm(s[0], s[1]) - kI * s[2]) < 1e-14);
  CHECK(oracle::max_abs(comm(s[1], s[2]) - kI * s[0]) < 1e-14);
  CHECK(oracle::max_abs(comm(s[2], s[0]) - kI * s[1]) < 1e-14);
  const CMatrix casimir = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
  CHECK(oracle::max_abs(casimir - 2.0 * CMatrix::Identity(3, 3)) < 1e-14);
  for (const auto& op : s) CHECK(linalg::hermiticity_defect(op) == 0.0);
  CHECK(s[2](0, 0) == 1.0);
  CHECK(s[2](1, 1) == 0.0);
  CHECK(s[2](2, 2) == -1.0);
}

TEST_CASE("electron and nuclear operators commute") {
  const auto e = nv::electron_ops();
  const auto n = nv::nuclear_ops();
  for (int i = 0; i < 3; ++i) {
    CHECK(e[i].rows() == 6);
    for (int j = 0; j < 3; ++j) CHECK(oracle::max_abs(comm(e[i], n[j])) < 1e-14);
  }
  CHECK(oracle::max_abs(comm(e[0], e[1]) - kI * e[2]) < 1e-14);
  CHECK(oracle::max_abs(comm(n[0], n[1]) - 2.0 * kI * n[2]) < 1e-14);
}

TEST_CASE("default parameters byte-match the listing") {
  const nv::NVParams p;
  CHECK(same_bits(p.D, 18032.741831605414));
  CHECK(same_bits(p.gS, 176.1176841602438));
  CHECK(same_bits(p.gI, 0.027143360527015815));
  CHECK(same_bits(p.A1, 22.933626371205488));
  CHECK(same_bits(p.A2, 19.038051480754145));
  CHECK(same_bits(p.gamma, 6.283185307179586));
  for (double b : p.B) CHECK(same_bits(b, 0.5));

  const Scheme s = nv::nv_scheme();
  CHECK(s.dim() == 6);
  CHECK(s.num_params() == 3);
  const CMatrix rho = s.probe().density();
  const double amp = 0.7071067811865475;
  CHECK(same_bits(rho(0, 0).real(), amp * amp));
  CHECK(same_bits(rho(4, 4).real(), amp * amp));
  CHECK(same_bits(rho(0, 4).real(), amp * amp));
  CHECK(std::abs(rho.trace() - 1.0) < 1e-15);

  const auto& tspan = s.lindblad().tspan();
  REQUIRE(tspan.size() == 201);
  CHECK(tspan.front() == 0.0);
  CHECK(tspan.back() == 2.0);
  for (std::size_t k = 0; k < tspan.size(); ++k) CHECK(same_bits(tspan[k], static_cast<double>(k) / 100.0));
  CHECK(s.measurement().size() == 36);
  CHECK(s.lindblad().controls().hamiltonians().size() == 3);
  REQUIRE(s.lindblad().decays().size() == 1);
}

TEST_CASE("Hamiltonian matches the term-by-term construction") {
  const nv::NVParams p;
  const auto h = nv::nv_hamiltonian(p);
  const auto s = nv::electron_ops();
  const auto n = nv::nuclear_ops();
  const double a[3] = {p.A1, p.A1, p.A2};
  CMatrix expected = p.D * s[2] * s[2];
  for (int i = 0; i < 3; ++i) expected += p.gS * p.B[i] * s[i] + p.gI * p.B[i] * n[i] + a[i] * s[i] * n[i];
  CHECK(oracle::max_abs(h.h0 - expected) < 1e-10);
  CHECK(linalg::hermiticity_defect(h.h0) < 1e-12);
  REQUIRE(h.dh.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(oracle::max_abs(h.dh[i] - (p.gS * s[i] + p.gI * n[i])) < 1e-12);
    CHECK(oracle::max_abs(h.hc[i] - s[i]) == 0.0);
  }
}

TEST_CASE("QFIM of the default scheme is symmetric and positive semidefinite") {
  nv::NVParams p;
  p.tspan = {0.0, 0.05, 0.1};
  const BoundResult q = qfim(nv::nv_scheme(p));
  const RMatrix f = q.final_value();
  CHECK((f - f.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(Eigen::SelfAdjointEigenSolver<RMatrix>(f).eigenvalues().minCoeff() > -1e-10);
  CHECK(f.trace() > 0.0);
}

TEST_CASE("NV parameter validation") {
  nv::NVParams p;
  p.gamma = -1.0;
  CHECK_THROWS_AS(nv::nv_scheme(p), ValidationError);
  p = nv::NVParams{};
  p.psi0 = CVector::Zero(3);
  CHECK_THROWS_AS(nv::nv_scheme(p), ValidationError);
}
