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

#include <functional>

#include "qestim/dynamics.hpp"
#include "qestim/parallel.hpp"
#include "qestim/sensitivity.hpp"

namespace qestim::grad {

/// Reverse-mode sweep through a matrix-exponential propagation.
///
/// For sub-interval j the Van Loan integral M_j = van_loan(G_j, x_j lambda_{j+1}^dag, dt_j)
/// turns any perturbation E of the augmented generator into the objective
/// change Re Tr(E M_j). Only the blocks needed downstream are kept.
struct Backprop {
  sensitivity::ExpmTape tape;
  std::vector<CVector> lambda;  // cotangent of the augmented state at each tspan entry
  std::vector<CMatrix> diag;    // sum of the diagonal blocks of M_j
  std::vector<MatrixList> coupling;  // block (0, a+1) of M_j

  /// Objective change for a perturbation `e` of the Lindbladian on interval j.
  double lindbladian_term(std::size_t j, const CMatrix& e) const;
  /// Objective change for a perturbation `e` of the generator block (a+1, 0).
  double coupling_term(std::size_t j, std::size_t a, const CMatrix& e) const;
  /// Hermitian cotangent of the initial density matrix.
  CMatrix initial_cotangent() const;
};

/// Records the propagation of rho0 under `spec`, asks `cotangent_of` for the
/// final-state cotangent blocks [Lambda_rho, Lambda_1..n] (see
/// objective_cotangent), maps them back to t = 0 and evaluates the Van Loan
/// integrals in parallel over intervals.
Backprop backprop(const LindbladSpec& spec, const CMatrix& rho0,
                  const std::function<MatrixList(const CMatrix&, const MatrixList&)>& cotangent_of,
                  Execution exec = Execution::Parallel, bool with_generator_terms = true);

/// d f / d c_{k,s} for every control channel k and amplitude segment s.
std::vector<std::vector<double>> control_gradient(const Backprop& bp, const LindbladSpec& spec);

/// Real gradient of f(psi psi^dag) packed as a complex vector g, df = Re(g^dag dpsi).
CVector probe_gradient(const CMatrix& initial_cotangent, const CVector& psi);

/// Cotangent of the initial state through a Kraus channel.
CMatrix kraus_initial_cotangent(const KrausSpec& spec, const MatrixList& final_cotangent);

/// Re Tr(E N).
double re_trace(const CMatrix& e, const CMatrix& n);

}  // namespace qestim::grad
