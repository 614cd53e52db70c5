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

#include "qestim/state.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "qestim/linalg.hpp"

namespace qestim {

ProbeState ProbeState::from_vector(CVector psi) {
  if (psi.size() == 0) throw ValidationError("probe vector is empty");
  if (!psi.allFinite()) throw ValidationError("probe vector contains non-finite entries");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) >= 1e-12) {
    throw ValidationError(fmt::format("probe vector must have unit 2-norm (got {:.17g})", norm));
  }
  ProbeState state;
  state.kind_ = Kind::PureVector;
  state.dim_ = psi.size();
  state.rho_ = psi * psi.adjoint();
  state.psi_ = std::move(psi);
  return state;
}

ProbeState ProbeState::from_density(CMatrix rho) {
  if (rho.size() == 0) throw ValidationError("probe density matrix is empty");
  CMatrix herm = linalg::require_hermitian(rho, "probe density matrix");
  const double trace = herm.trace().real();
  if (std::abs(trace - 1.0) >= 1e-12) {
    throw ValidationError(fmt::format("probe density matrix must have unit trace (got {:.17g})", trace));
  }
  const double min_eig = linalg::min_eigenvalue(herm);
  if (min_eig < -1e-10) {
    throw ValidationError(
        fmt::format("probe density matrix is not positive semidefinite (min eigenvalue {:.3e})", min_eig));
  }
  ProbeState state;
  state.kind_ = Kind::DensityMatrix;
  state.dim_ = herm.rows();
  state.rho_ = std::move(herm);
  return state;
}

const CVector& ProbeState::vector() const {
  if (kind_ != Kind::PureVector) throw ValidationError("probe is a density matrix, not a state vector");
  return psi_;
}

ProbeState builtin_state(BuiltinState name, std::optional<int> index) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (name) {
    case BuiltinState::Plus: {
      CVector psi(2);
      psi << h, h;
      return ProbeState::from_vector(psi);
    }
    case BuiltinState::Minus: {
      CVector psi(2);
      psi << h, -h;
      return ProbeState::from_vector(psi);
    }
    case BuiltinState::Bell: {
      if (!index) throw ValidationError("Bell state requires an index in 1..4");
      CVector psi = CVector::Zero(4);
      switch (*index) {
        case 1: psi << h, 0, 0, h; break;
        case 2: psi << h, 0, 0, -h; break;
        case 3: psi << 0, h, h, 0; break;
        case 4: psi << 0, h, -h, 0; break;
        default: throw ValidationError(fmt::format("Bell state index must be in 1..4 (got {})", *index));
      }
      return ProbeState::from_vector(psi);
    }
  }
  throw ValidationError("unknown builtin state");
}

BuiltinState builtin_state_from_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  if (key == "plus" || key == "plusstate") return BuiltinState::Plus;
  if (key == "minus" || key == "minusstate") return BuiltinState::Minus;
  if (key == "bell" || key == "bellstate") return BuiltinState::Bell;
  throw ValidationError(fmt::format("unknown builtin state '{}' (expected plus, minus, or bell)", name));
}

}  // namespace qestim
