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

#include "qestim/metrology.hpp"

namespace qestim {

/// Scalar figure of merit evaluated at the final time of a scheme.
///
/// QFIM and CFIM objectives are the Fisher information itself for one
/// parameter (maximized) and Tr(W F^-1) for several (minimized). HCRB is the
/// Holevo bound with weight W (minimized).
struct Objective {
  enum class Kind { QFIM, CFIM, HCRB };

  Kind kind = Kind::QFIM;
  RMatrix weight;  // empty: identity
  SldConfig sld;
  sdp::Options sdp;

  /// True when larger values are better for a model with n parameters.
  bool maximize(std::size_t n) const { return kind != Kind::HCRB && n == 1; }
  RMatrix weight_for(std::size_t n) const;
  void validate(std::size_t n) const;
};

const char* to_string(Objective::Kind kind);
Objective::Kind objective_kind_from_name(std::string_view name);

/// Objective value for the final state and its derivatives.
double objective_value(const Objective& objective, const CMatrix& rho, const MatrixList& drho,
                       const Measurement& measurement);

/// Objective value of a scheme (propagated to its final time).
double objective_value(const Objective& objective, const Scheme& scheme);

/// Hermitian cotangents [Lambda_rho, Lambda_1, ..., Lambda_n] with
/// df = Re Tr(Lambda_rho d rho) + sum_a Re Tr(Lambda_a d(d_a rho)).
/// Only QFIM (SLD) and CFIM objectives are differentiable.
MatrixList objective_cotangent(const Objective& objective, const CMatrix& rho, const MatrixList& drho,
                               const Measurement& measurement);

}  // namespace qestim
