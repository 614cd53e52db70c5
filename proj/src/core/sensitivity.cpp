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

#include "qestim/sensitivity.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qestim/linalg.hpp"
#include "qestim/superop.hpp"

namespace qestim::sensitivity {

namespace {
constexpr double kDtTolerance = 1e-13;
}  // namespace

CMatrix lindbladian(const LindbladSpec& spec, std::size_t j) {
  CMatrix l = superop::hamiltonian(spec.total_hamiltonian(j));
  for (const auto& ch : spec.decays()) {
    const double rate = ch.rate(j);
    if (rate != 0.0) l += rate * superop::dissipator(ch.op());
  }
  return l;
}

ExpmTape record(const LindbladSpec& spec, const CMatrix& rho0, bool derivatives) {
  ExpmTape tape;
  tape.dim = spec.dim();
  tape.num_params = derivatives ? spec.num_params() : 0;
  tape.tspan = spec.tspan();
  const Eigen::Index d = tape.dim;
  CVector x = CVector::Zero(static_cast<Eigen::Index>(tape.num_params + 1) * d * d);
  x.head(d * d) = linalg::vec(rho0);
  tape.states.push_back(x);

  for (std::size_t j = 0; j < spec.intervals(); ++j) {
    const double dt = spec.tspan()[j + 1] - spec.tspan()[j];
    const CMatrix l = lindbladian(spec, j);
    CMatrix g = derivatives ? superop::augmented(l, spec.hamiltonian().derivatives(j, spec.tspan()[j])) : l;
    // Steps whose lengths differ only by rounding (k/100 grids) share a propagator.
    std::size_t idx = tape.generators.size();
    for (std::size_t u = 0; u < tape.generators.size(); ++u) {
      if (std::abs(tape.dts[u] - dt) <= kDtTolerance * dt && tape.generators[u] == g) {
        idx = u;
        break;
      }
    }
    if (idx == tape.generators.size()) {
      tape.propagators.push_back(linalg::expm(g * dt));
      tape.generators.push_back(std::move(g));
      tape.dts.push_back(dt);
    }
    tape.step_to_unique.push_back(idx);
    x = tape.propagators[idx] * x;
    if (!x.allFinite()) {
      throw NumericalError(fmt::format("non-finite density matrix at t = {:.17g}", spec.tspan()[j + 1]));
    }
    tape.states.push_back(x);
  }
  return tape;
}

std::vector<CVector> adjoints(const ExpmTape& tape, const CVector& final_cotangent) {
  std::vector<CVector> lambda(tape.states.size());
  lambda.back() = final_cotangent;
  for (std::size_t j = tape.intervals(); j-- > 0;) {
    lambda[j] = tape.propagator(j).adjoint() * lambda[j + 1];
  }
  return lambda;
}

CMatrix van_loan(const CMatrix& generator, const CMatrix& b, double dt) {
  const Eigen::Index s = generator.rows();
  CMatrix big = CMatrix::Zero(2 * s, 2 * s);
  big.topLeftCorner(s, s) = generator;
  big.topRightCorner(s, s) = b;
  big.bottomRightCorner(s, s) = generator;
  return linalg::expm(big * dt).topRightCorner(s, s);
}

MatrixList unstack(const CVector& x, Eigen::Index dim) {
  const Eigen::Index s = dim * dim;
  MatrixList out;
  for (Eigen::Index off = 0; off < x.size(); off += s) out.push_back(linalg::unvec(x.segment(off, s), dim));
  return out;
}

CVector stack(const MatrixList& blocks) {
  if (blocks.empty()) return {};
  const Eigen::Index s = blocks.front().size();
  CVector out(s * static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b) out.segment(static_cast<Eigen::Index>(b) * s, s) = linalg::vec(blocks[b]);
  return out;
}

}  // namespace qestim::sensitivity
