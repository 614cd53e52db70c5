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

#include <optional>
#include <string_view>

#include "qestim/types.hpp"

namespace qestim {

/// Probe state: a unit state vector or a density matrix. Validated on
/// construction and immutable afterwards.
class ProbeState {
 public:
  enum class Kind { PureVector, DensityMatrix };

  /// Unit 2-norm within 1e-12 is required; the vector is stored as given.
  static ProbeState from_vector(CVector psi);

  /// Hermitian (defects below 1e-12 are symmetrized), unit trace within 1e-12,
  /// and minimum eigenvalue >= -1e-10.
  static ProbeState from_density(CMatrix rho);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  bool is_pure_vector() const { return kind_ == Kind::PureVector; }

  /// The state vector; only valid for PureVector probes.
  const CVector& vector() const;

  /// The density matrix (|psi><psi| for vector probes).
  const CMatrix& density() const { return rho_; }

 private:
  ProbeState() = default;

  Kind kind_ = Kind::DensityMatrix;
  Eigen::Index dim_ = 0;
  CVector psi_;
  CMatrix rho_;
};

enum class BuiltinState { Plus, Minus, Bell };

/// The integrated catalog states. Bell requires index 1..4.
ProbeState builtin_state(BuiltinState name, std::optional<int> index = std::nullopt);

/// Name-based lookup ("plus", "minus", "bell"); throws ValidationError on
/// unknown names.
BuiltinState builtin_state_from_name(std::string_view name);

}  // namespace qestim
