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

namespace qestim::superop {

// Column-stacking convention: vec(A X B) = (B^T (x) A) vec(X).

/// -i(I (x) H - H^T (x) I): the superoperator of X -> -i[H, X].
CMatrix hamiltonian(const CMatrix& h);

/// conj(G) (x) G - 1/2 I (x) G^dag G - 1/2 (G^dag G)^T (x) I.
CMatrix dissipator(const CMatrix& gamma);

/// Directional derivative of dissipator(G) along G -> G + eps E.
CMatrix dissipator_derivative(const CMatrix& gamma, const CMatrix& direction);

/// Block lower-triangular generator acting on [vec rho; vec d_1 rho; ...]:
/// diagonal blocks `lindbladian`, block (a+1, 0) = hamiltonian(dh[a]).
CMatrix augmented(const CMatrix& lindbladian, const MatrixList& dh);

}  // namespace qestim::superop
