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

#include "qestim/superop.hpp"

#include "qestim/linalg.hpp"

namespace qestim::superop {

CMatrix hamiltonian(const CMatrix& h) {
  const CMatrix id = CMatrix::Identity(h.rows(), h.cols());
  return -kI * (linalg::kron(id, h) - linalg::kron(h.transpose(), id));
}

CMatrix dissipator(const CMatrix& gamma) {
  const CMatrix id = CMatrix::Identity(gamma.rows(), gamma.cols());
  const CMatrix gg = gamma.adjoint() * gamma;
  return linalg::kron(gamma.conjugate(), gamma) - 0.5 * linalg::kron(id, gg) - 0.5 * linalg::kron(gg.transpose(), id);
}

CMatrix dissipator_derivative(const CMatrix& gamma, const CMatrix& direction) {
  const CMatrix id = CMatrix::Identity(gamma.rows(), gamma.cols());
  const CMatrix dgg = direction.adjoint() * gamma + gamma.adjoint() * direction;
  return linalg::kron(direction.conjugate(), gamma) + linalg::kron(gamma.conjugate(), direction) -
         0.5 * linalg::kron(id, dgg) - 0.5 * linalg::kron(dgg.transpose(), id);
}

CMatrix augmented(const CMatrix& lindbladian, const MatrixList& dh) {
  const Eigen::Index s = lindbladian.rows();
  const auto blocks = static_cast<Eigen::Index>(dh.size() + 1);
  CMatrix out = CMatrix::Zero(blocks * s, blocks * s);
  for (Eigen::Index b = 0; b < blocks; ++b) out.block(b * s, b * s, s, s) = lindbladian;
  for (std::size_t a = 0; a < dh.size(); ++a) {
    out.block(static_cast<Eigen::Index>(a + 1) * s, 0, s, s) = hamiltonian(dh[a]);
  }
  return out;
}

}  // namespace qestim::superop
