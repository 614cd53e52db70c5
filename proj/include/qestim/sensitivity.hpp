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

#include "qestim/dynamics.hpp"

namespace qestim::sensitivity {

/// Record of a matrix-exponential propagation of the augmented state
/// x = [vec rho; vec d_1 rho; ...; vec d_n rho]. Sub-intervals that share a
/// generator and step length share one propagator.
struct ExpmTape {
  Eigen::Index dim = 0;
  std::size_t num_params = 0;
  std::vector<double> tspan;
  std::vector<CMatrix> generators;       // distinct augmented generators
  std::vector<CMatrix> propagators;      // exp(generator * dt)
  std::vector<double> dts;               // step length of each distinct generator
  std::vector<std::size_t> step_to_unique;  // sub-interval j -> distinct index
  std::vector<CVector> states;           // x at every tspan entry

  std::size_t intervals() const { return step_to_unique.size(); }
  const CMatrix& propagator(std::size_t j) const { return propagators[step_to_unique[j]]; }
  const CMatrix& generator(std::size_t j) const { return generators[step_to_unique[j]]; }
};

/// Lindbladian superoperator on sub-interval j (rates at the left endpoint).
CMatrix lindbladian(const LindbladSpec& spec, std::size_t j);

/// Propagates rho0 (and zero derivatives) with the matrix-exponential
/// method. With `derivatives` false only vec(rho) is carried.
ExpmTape record(const LindbladSpec& spec, const CMatrix& rho0, bool derivatives = true);

/// Reverse sweep: given the cotangent of the final augmented state, returns
/// the cotangent of x at every tspan entry (lambda_{j-1} = P_j^dagger lambda_j).
std::vector<CVector> adjoints(const ExpmTape& tape, const CVector& final_cotangent);

/// Integral of exp(G s) B exp(G (dt - s)) over s in [0, dt], from the upper
/// right block of exp([[G, B], [0, G]] dt). For a perturbation E of the
/// generator, lambda^dagger dP x = Tr(E M) with M = van_loan(G, x lambda^dagger, dt).
CMatrix van_loan(const CMatrix& generator, const CMatrix& b, double dt);

/// Splits an augmented vector into its (1 + n) d x d blocks.
MatrixList unstack(const CVector& x, Eigen::Index dim);
CVector stack(const MatrixList& blocks);

}  // namespace qestim::sensitivity
