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
#include <variant>

#include "qestim/dynamics.hpp"
#include "qestim/measurement.hpp"
#include "qestim/prior.hpp"
#include "qestim/state.hpp"

namespace qestim {

using Parameterization = std::variant<LindbladSpec, KrausSpec>;

/// Probe, parameterization, measurement and an optional prior with matching
/// dimensions. Immutable; the with_* methods return modified copies.
class Scheme {
 public:
  Scheme(ProbeState probe, Parameterization param, Measurement measurement, std::optional<PriorSpec> prior = {});

  const ProbeState& probe() const { return probe_; }
  const Parameterization& param() const { return param_; }
  const Measurement& measurement() const { return measurement_; }
  const std::optional<PriorSpec>& prior() const { return prior_; }

  Eigen::Index dim() const { return probe_.dim(); }
  std::size_t num_params() const;

  bool is_lindblad() const { return std::holds_alternative<LindbladSpec>(param_); }
  const LindbladSpec& lindblad() const;
  const KrausSpec& kraus() const;

  Scheme with_probe(ProbeState probe) const;
  Scheme with_param(Parameterization param) const;
  Scheme with_measurement(Measurement measurement) const;

  /// Re-binds a parametric Hamiltonian or Kraus channel to the values x.
  Scheme at_parameters(const RVector& x) const;

 private:
  void validate() const;

  ProbeState probe_;
  Parameterization param_;
  Measurement measurement_;
  std::optional<PriorSpec> prior_;
};

/// Assembles a scheme; the measurement defaults to sic_povm(d).
Scheme make_general_scheme(ProbeState probe, Parameterization param, std::optional<Measurement> measurement = {},
                           std::optional<PriorSpec> prior = {});

/// Runs the parameterization. Kraus channels yield a single time point t = 0.
Trajectory propagate(const Scheme& scheme, const EvolveOptions& options = {});

}  // namespace qestim
