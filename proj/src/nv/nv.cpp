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

#include "qestim/nv.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qestim/linalg.hpp"

namespace qestim::nv {

std::array<CMatrix, 3> spin1_ops() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix s1 = CMatrix::Zero(3, 3);
  CMatrix s2 = CMatrix::Zero(3, 3);
  CMatrix s3 = CMatrix::Zero(3, 3);
  s1(0, 1) = s1(1, 0) = s1(1, 2) = s1(2, 1) = r;
  s2(0, 1) = s2(1, 2) = Complex(0.0, -r);
  s2(1, 0) = s2(2, 1) = Complex(0.0, r);
  s3(0, 0) = 1.0;
  s3(2, 2) = -1.0;
  return {s1, s2, s3};
}

namespace {

std::array<CMatrix, 3> pauli() {
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {x, y, z};
}

}  // namespace

std::array<CMatrix, 3> electron_ops() {
  const auto s = spin1_ops();
  const CMatrix id = CMatrix::Identity(2, 2);
  return {linalg::kron(s[0], id), linalg::kron(s[1], id), linalg::kron(s[2], id)};
}

std::array<CMatrix, 3> nuclear_ops() {
  const auto p = pauli();
  const CMatrix id = CMatrix::Identity(3, 3);
  return {linalg::kron(id, p[0]), linalg::kron(id, p[1]), linalg::kron(id, p[2])};
}

std::vector<double> default_tspan() {
  std::vector<double> t(201);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) / 100.0;
  return t;
}

void NVParams::validate() const {
  for (double v : {D, gS, gI, A1, A2, B[0], B[1], B[2], gamma}) {
    if (!std::isfinite(v)) throw ValidationError("NV parameters must be finite");
  }
  if (gamma < 0.0) throw ValidationError(fmt::format("NV dephasing rate gamma must be nonnegative (got {})", gamma));
  if (psi0.size() != 0) {
    if (psi0.size() != 6) throw ValidationError(fmt::format("NV psi0 must have 6 entries (got {})", psi0.size()));
    if (std::abs(psi0.norm() - 1.0) > 1e-12) throw ValidationError("NV psi0 must have unit norm");
  }
}

NVHamiltonian nv_hamiltonian(const NVParams& params) {
  params.validate();
  const auto s = electron_ops();
  const auto n = nuclear_ops();
  const double a[3] = {params.A1, params.A1, params.A2};
  NVHamiltonian out;
  out.h0 = params.D * s[2] * s[2];
  for (int i = 0; i < 3; ++i) {
    out.h0 += params.gS * params.B[i] * s[i] + params.gI * params.B[i] * n[i] + a[i] * s[i] * n[i];
    out.dh.push_back(params.gS * s[i] + params.gI * n[i]);
    out.hc.push_back(s[i]);
  }
  out.h0 = linalg::hermitian_part(out.h0);
  return out;
}

Scheme nv_scheme(const NVParams& params) {
  NVHamiltonian ham = nv_hamiltonian(params);
  CVector psi0 = params.psi0;
  if (psi0.size() == 0) {
    psi0 = CVector::Zero(6);
    psi0(0) = psi0(4) = 1.0 / std::sqrt(2.0);
  }
  std::vector<double> tspan = params.tspan.empty() ? default_tspan() : params.tspan;
  const CMatrix s3 = electron_ops()[2];
  LindbladSpec dynamics(HamiltonianSpec::constant(ham.h0, ham.dh), std::move(tspan), ControlSpec(ham.hc, {}),
                        {DecayChannel(s3, params.gamma)}, params.method, params.ode);
  return make_general_scheme(ProbeState::from_vector(psi0), std::move(dynamics));
}

}  // namespace qestim::nv
