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

#include "qestim/types.hpp"

namespace qestim {

/// A POVM {Pi_m}: Hermitian PSD elements (min eigenvalue >= -1e-10) that sum
/// to the identity within 1e-10 elementwise.
class Measurement {
 public:
  Measurement() = default;
  explicit Measurement(MatrixList povm);

  /// Rank-one projective measurement onto the columns of an orthonormal basis.
  static Measurement projective(const CMatrix& basis);

  const MatrixList& elements() const { return povm_; }
  std::size_t size() const { return povm_.size(); }
  Eigen::Index dim() const { return povm_.empty() ? 0 : povm_.front().rows(); }
  bool empty() const { return povm_.empty(); }

 private:
  MatrixList povm_;
};

/// Largest dimension with a bundled SIC fiducial.
int sic_max_dimension();

/// Weyl-Heisenberg covariant SIC-POVM with d^2 elements (1/d)|psi_m><psi_m|.
/// d = 2 uses the exact tetrahedron; 3 <= d <= sic_max_dimension() uses the
/// bundled fiducial vectors.
Measurement sic_povm(int dim);

/// The normalized fiducial vector used by sic_povm(d).
CVector sic_fiducial(int dim);

}  // namespace qestim
