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

#include <array>

#include "qestim/scheme.hpp"

namespace qestim::nv {

/// Spin-1 operators (s1, s2, s3) with s3 = diag(1, 0, -1).
std::array<CMatrix, 3> spin1_ops();

/// Frequencies in angular MHz, times in microseconds.
struct NVParams {
  double D = 18032.741831605414;
  double gS = 176.1176841602438;
  double gI = 0.027143360527015815;
  double A1 = 22.933626371205488;
  double A2 = 19.038051480754145;
  std::array<double, 3> B{0.5, 0.5, 0.5};
  double gamma = 6.283185307179586;
  std::vector<double> tspan;  // empty: 0:0.01:2
  CVector psi0;                // empty: (|0> + |4>)/sqrt(2)
  DynMethod method = DynMethod::Expm;
  OdeOptions ode;

  void validate() const;
};

/// Electron operators S_i = s_i (x) 1 (6x6).
std::array<CMatrix, 3> electron_ops();
/// Nuclear operators I_i = 1 (x) sigma_i (6x6).
std::array<CMatrix, 3> nuclear_ops();

struct NVHamiltonian {
  CMatrix h0;
  MatrixList dh;  // d H0 / d B_i
  MatrixList hc;  // control Hamiltonians S_1, S_2, S_3
};

NVHamiltonian nv_hamiltonian(const NVParams& params);

/// tspan 0:0.01:2 (201 points, each value computed as k / 100).
std::vector<double> default_tspan();

/// Lindblad dynamics with dephasing channel (S_3, gamma), controls on
/// S_1..S_3 with zero amplitude, measurement SIC(6).
Scheme nv_scheme(const NVParams& params = {});

}  // namespace qestim::nv
