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

#include <string_view>

#include "qestim/types.hpp"

namespace qestim::linalg {

/// Largest absolute entry of A - A^dagger.
double hermiticity_defect(const CMatrix& a);

/// (A + A^dagger) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// Returns A symmetrized when its Hermiticity defect is below `tol`; throws
/// ValidationError naming `what` otherwise.
CMatrix require_hermitian(const CMatrix& a, std::string_view what, double tol = 1e-12);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-stacking vectorization and its inverse.
CVector vec(const CMatrix& a);
CMatrix unvec(const Eigen::Ref<const CVector>& v, Eigen::Index dim);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& hermitian);

/// exp(A) for a general complex square matrix.
CMatrix expm(const CMatrix& a);

/// Hermitian square root of a PSD matrix (negative eigenvalues clamped to 0).
CMatrix sqrt_psd(const CMatrix& a);

/// Sum of singular values.
double trace_norm(const CMatrix& a);

/// Orthonormal Hermitian basis of d x d matrices with Tr(B_k B_l) = delta_kl.
/// Element 0 is I/sqrt(d); the rest are the normalized generalized Gell-Mann
/// matrices (symmetric, antisymmetric, then diagonal).
MatrixList gell_mann_basis(Eigen::Index dim);

/// Identity test within an elementwise tolerance.
bool is_identity(const CMatrix& a, double tol);

bool all_finite(const CMatrix& a);

}  // namespace qestim::linalg
