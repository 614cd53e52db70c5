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

#include "qestim/scheme.hpp"

#include <fmt/format.h>

namespace qestim {

namespace {

Eigen::Index param_dim(const Parameterization& param) {
  return std::visit([](const auto& p) { return p.dim(); }, param);
}

}  // namespace

Scheme::Scheme(ProbeState probe, Parameterization param, Measurement measurement, std::optional<PriorSpec> prior)
    : probe_(std::move(probe)), param_(std::move(param)), measurement_(std::move(measurement)), prior_(std::move(prior)) {
  validate();
}

void Scheme::validate() const {
  const Eigen::Index d = probe_.dim();
  const Eigen::Index dp = param_dim(param_);
  if (dp != d) {
    throw ValidationError(fmt::format("dimension mismatch: probe has dimension {} but the parameterization has {}", d, dp));
  }
  if (measurement_.empty()) throw ValidationError("measurement must contain at least one POVM element");
  if (measurement_.dim() != d) {
    throw ValidationError(
        fmt::format("dimension mismatch: probe has dimension {} but the POVM has {}", d, measurement_.dim()));
  }
  if (prior_ && prior_->num_params() != num_params()) {
    throw ValidationError(fmt::format("prior covers {} parameters but the parameterization has {}",
                                      prior_->num_params(), num_params()));
  }
}

std::size_t Scheme::num_params() const {
  return std::visit([](const auto& p) { return p.num_params(); }, param_);
}

const LindbladSpec& Scheme::lindblad() const {
  if (!is_lindblad()) throw ValidationError("scheme parameterization is a Kraus channel, not Lindblad dynamics");
  return std::get<LindbladSpec>(param_);
}

const KrausSpec& Scheme::kraus() const {
  if (is_lindblad()) throw ValidationError("scheme parameterization is Lindblad dynamics, not a Kraus channel");
  return std::get<KrausSpec>(param_);
}

Scheme Scheme::with_probe(ProbeState probe) const {
  return Scheme(std::move(probe), param_, measurement_, prior_);
}

Scheme Scheme::with_param(Parameterization param) const {
  return Scheme(probe_, std::move(param), measurement_, prior_);
}

Scheme Scheme::with_measurement(Measurement measurement) const {
  return Scheme(probe_, param_, std::move(measurement), prior_);
}

Scheme Scheme::at_parameters(const RVector& x) const {
  if (is_lindblad()) {
    const auto& spec = lindblad();
    if (spec.hamiltonian().kind() != HamiltonianSpec::Kind::Parametric) {
      throw ValidationError("evaluating over a parameter grid requires a parametric Hamiltonian H0(x)");
    }
    return with_param(spec.with_hamiltonian(spec.hamiltonian().with_parameters(x)));
  }
  const auto& spec = kraus();
  if (!spec.is_parametric()) {
    throw ValidationError("evaluating over a parameter grid requires a parametric Kraus channel K(x)");
  }
  return with_param(spec.with_parameters(x));
}

Scheme make_general_scheme(ProbeState probe, Parameterization param, std::optional<Measurement> measurement,
                           std::optional<PriorSpec> prior) {
  const Eigen::Index d = probe.dim();
  const Eigen::Index dp = param_dim(param);
  if (dp != d) {
    throw ValidationError(fmt::format("dimension mismatch: probe has dimension {} but the parameterization has {}", d, dp));
  }
  if (!measurement) {
    if (d > sic_max_dimension()) {
      throw ValidationError(fmt::format(
          "no measurement given and no bundled SIC-POVM for dimension {} (bundled up to {})", d, sic_max_dimension()));
    }
    measurement = sic_povm(static_cast<int>(d));
  }
  return Scheme(std::move(probe), std::move(param), std::move(*measurement), std::move(prior));
}

Trajectory propagate(const Scheme& scheme, const EvolveOptions& options) {
  if (scheme.is_lindblad()) return evolve(scheme.lindblad(), scheme.probe(), options);
  KrausResult r = kraus_apply(scheme.kraus(), scheme.probe());
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.rho.push_back(std::move(r.rho));
  traj.drho.push_back(options.derivatives ? std::move(r.drho) : MatrixList{});
  return traj;
}

}  // namespace qestim
