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

#include <string>

#include "qestim/objective.hpp"

namespace qestim::error {

enum class Mode { Evaluation, Control };

/// Gradient magnitude of the objective over one group of real inputs.
struct Term {
  std::string input;
  std::size_t entries = 0;
  double gradient_norm = 0.0;
};

struct ErrorBudget {
  Mode mode = Mode::Evaluation;
  Objective::Kind objective = Objective::Kind::QFIM;
  double sld_eps = 1e-8;
  /// "expm", "ode" or "kraus".
  std::string path;
  /// Objective value f at the final time.
  double value = 0.0;
  /// Given (evaluation) or suggested (control) uniform input precision.
  double input_error_scaling = 0.0;
  /// Propagated (evaluation) or requested (control) output error.
  double output_error_scaling = 0.0;
  /// sqrt(sum_i (df/dx_i)^2) over the inputs (expm, kraus) or over the
  /// final state and its derivatives (ode).
  double gradient_norm = 0.0;
  /// Largest accepted ODE step and its fourth power (ode only).
  double max_step = 0.0;
  double step_error = 0.0;
  /// QFIM(eps) - QFIM(0) at the final time.
  RMatrix truncation_delta;
  std::vector<Term> terms;
  std::vector<std::string> warnings;

  /// Human-readable table.
  std::string table() const;
};

/// Every real input entry (H0, dH, control amplitudes, decay operators,
/// rates, probe; or Kraus operators, their derivatives and the probe) with
/// df/dx from the adjoint sweep.
struct InputGradient {
  std::vector<Term> groups;
  RVector values;  // concatenated in group order
};

InputGradient input_gradient(const Scheme& scheme, const Objective& objective);

/// |g| (dx + step_error): uniform input error dx pushed through gradient g.
double forward_error(const RVector& gradient, double input_error, double step_error = 0.0);

/// Inverse of forward_error: target / |g| - step_error, possibly negative.
/// Throws NumericalError when g vanishes.
double suggested_precision(const RVector& gradient, double output_error, double step_error = 0.0);

ErrorBudget error_evaluation(const Scheme& scheme, double input_error_scaling = 1e-8,
                             Objective::Kind objective = Objective::Kind::QFIM, double sld_eps = 1e-8);

ErrorBudget error_control(const Scheme& scheme, double output_error_scaling = 1e-9,
                          Objective::Kind objective = Objective::Kind::QFIM, double sld_eps = 1e-8);

}  // namespace qestim::error
