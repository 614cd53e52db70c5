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

#include "qestim/gradient.hpp"

#include <fmt/format.h>

#include "qestim/linalg.hpp"
#include "qestim/superop.hpp"

namespace qestim::grad {

double re_trace(const CMatrix& e, const CMatrix& n) { return e.cwiseProduct(n.transpose()).sum().real(); }

double Backprop::lindbladian_term(std::size_t j, const CMatrix& e) const { return re_trace(e, diag[j]); }

double Backprop::coupling_term(std::size_t j, std::size_t a, const CMatrix& e) const {
  return re_trace(e, coupling[j][a]);
}

CMatrix Backprop::initial_cotangent() const {
  const Eigen::Index d = tape.dim;
  return linalg::hermitian_part(linalg::unvec(lambda.front().head(d * d), d));
}

Backprop backprop(const LindbladSpec& spec, const CMatrix& rho0,
                  const std::function<MatrixList(const CMatrix&, const MatrixList&)>& cotangent_of, Execution exec,
                  bool with_generator_terms) {
  Backprop bp;
  bp.tape = sensitivity::record(spec, rho0, true);
  const Eigen::Index d = bp.tape.dim;
  const MatrixList final_blocks = sensitivity::unstack(bp.tape.states.back(), d);
  const MatrixList final_drho(final_blocks.begin() + 1, final_blocks.end());
  const MatrixList cot = cotangent_of(final_blocks.front(), final_drho);
  if (cot.size() != final_blocks.size()) throw ValidationError("cotangent block count does not match the state");
  bp.lambda = sensitivity::adjoints(bp.tape, sensitivity::stack(cot));
  if (!with_generator_terms) return bp;

  const std::size_t m = bp.tape.intervals();
  const Eigen::Index s = d * d;
  const std::size_t n = bp.tape.num_params;
  bp.diag.resize(m);
  bp.coupling.resize(m);
  for_each_index(m, exec, [&](std::size_t j) {
    const double dt = bp.tape.tspan[j + 1] - bp.tape.tspan[j];
    const CMatrix b = bp.tape.states[j] * bp.lambda[j + 1].adjoint();
    const CMatrix vl = sensitivity::van_loan(bp.tape.generator(j), b, dt);
    CMatrix sum = CMatrix::Zero(s, s);
    for (std::size_t blk = 0; blk <= n; ++blk) {
      const auto o = static_cast<Eigen::Index>(blk) * s;
      sum += vl.block(o, o, s, s);
    }
    bp.diag[j] = std::move(sum);
    bp.coupling[j].resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      bp.coupling[j][a] = vl.block(0, static_cast<Eigen::Index>(a + 1) * s, s, s);
    }
  });
  return bp;
}

std::vector<std::vector<double>> control_gradient(const Backprop& bp, const LindbladSpec& spec) {
  const ControlSpec& ctrl = spec.controls();
  const std::size_t intervals = spec.intervals();
  const std::size_t segments = ctrl.segments() == 0 ? intervals : ctrl.segments();
  const std::size_t hold = intervals / segments;
  std::vector<std::vector<double>> g(ctrl.count(), std::vector<double>(segments, 0.0));
  for (std::size_t k = 0; k < ctrl.count(); ++k) {
    const CMatrix e = superop::hamiltonian(ctrl.hamiltonians()[k]);
    for (std::size_t j = 0; j < intervals; ++j) g[k][j / hold] += bp.lindbladian_term(j, e);
  }
  return g;
}

CVector probe_gradient(const CMatrix& initial_cotangent, const CVector& psi) { return 2.0 * initial_cotangent * psi; }

CMatrix kraus_initial_cotangent(const KrausSpec& spec, const MatrixList& final_cotangent) {
  const auto& ks = spec.ops();
  CMatrix out = CMatrix::Zero(spec.dim(), spec.dim());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out += ks[i].adjoint() * final_cotangent[0] * ks[i];
    for (std::size_t a = 0; a < spec.num_params(); ++a) {
      const CMatrix& dk = spec.derivatives()[a][i];
      out += ks[i].adjoint() * final_cotangent[a + 1] * dk + dk.adjoint() * final_cotangent[a + 1] * ks[i];
    }
  }
  return linalg::hermitian_part(out);
}

}  // namespace qestim::grad
