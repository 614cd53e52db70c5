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

#include "qestim/measurement.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "qestim/linalg.hpp"
#include "sic_fiducials.hpp"

namespace qestim {

Measurement::Measurement(MatrixList povm) : povm_(std::move(povm)) {
  if (povm_.empty()) throw ValidationError("measurement must contain at least one POVM element");
  const Eigen::Index d = povm_.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t m = 0; m < povm_.size(); ++m) {
    if (povm_[m].rows() != d || povm_[m].cols() != d) {
      throw ValidationError(fmt::format("POVM element {} has shape {}x{}, expected {}x{}", m, povm_[m].rows(),
                                        povm_[m].cols(), d, d));
    }
    povm_[m] = linalg::require_hermitian(povm_[m], fmt::format("POVM element {}", m));
    const double min_eig = linalg::min_eigenvalue(povm_[m]);
    if (min_eig < -1e-10) {
      throw ValidationError(
          fmt::format("POVM element {} is not positive semidefinite (min eigenvalue {:.3e})", m, min_eig));
    }
    total += povm_[m];
  }
  if (!linalg::is_identity(total, 1e-10)) {
    const double defect = (total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    throw ValidationError(fmt::format("POVM elements do not sum to the identity (max deviation {:.3e})", defect));
  }
}

Measurement Measurement::projective(const CMatrix& basis) {
  MatrixList povm;
  povm.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    povm.push_back(basis.col(k) * basis.col(k).adjoint());
  }
  return Measurement(std::move(povm));
}

int sic_max_dimension() {
  int best = 2;
  for (const auto& entry : detail::bundled_sic_fiducials()) best = std::max(best, entry.dim);
  return best;
}

CVector sic_fiducial(int dim) {
  if (dim == 2) {
    // Bloch vector (1,1,1)/sqrt(3): its Weyl-Heisenberg orbit is a regular tetrahedron.
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    CVector psi(2);
    psi << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), std::numbers::pi / 4.0);
    return psi;
  }
  for (const auto& entry : detail::bundled_sic_fiducials()) {
    if (entry.dim != dim) continue;
    CVector psi(dim);
    std::istringstream in{std::string(entry.text)};
    std::string line;
    Eigen::Index i = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      std::istringstream fields(line);
      double re = 0.0, im = 0.0;
      fields >> re >> im;
      if (i >= dim) break;
      psi(i++) = Complex(re, im);
    }
    if (i != dim) throw ValidationError(fmt::format("bundled SIC fiducial for d={} is malformed", dim));
    return psi / psi.norm();
  }
  throw ValidationError(
      fmt::format("no bundled SIC fiducial for dimension {} (supported: 2..{})", dim, sic_max_dimension()));
}

Measurement sic_povm(int dim) {
  if (dim < 2) throw ValidationError(fmt::format("SIC-POVM requires dimension >= 2 (got {})", dim));
  const CVector fiducial = sic_fiducial(dim);
  const double d = static_cast<double>(dim);
  MatrixList povm;
  povm.reserve(static_cast<std::size_t>(dim * dim));
  for (int p = 0; p < dim; ++p) {
    for (int q = 0; q < dim; ++q) {
      // D_pq = X^p Z^q with X|j> = |j+1>, Z|j> = w^j |j>.
      CVector v(dim);
      for (int j = 0; j < dim; ++j) {
        const double phase = 2.0 * std::numbers::pi * q * j / d;
        v((j + p) % dim) = std::polar(1.0, phase) * fiducial(j);
      }
      povm.push_back(v * v.adjoint() / d);
    }
  }
  return Measurement(std::move(povm));
}

}  // namespace qestim
