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

#include <functional>
#include <memory>
#include <optional>

#include "qestim/control.hpp"
#include "qestim/hamiltonian.hpp"
#include "qestim/state.hpp"
#include "qestim/types.hpp"

namespace qestim {

/// Lindblad decay channel: operator Gamma and a constant or per-tspan rate.
class DecayChannel {
 public:
  DecayChannel(CMatrix op, double rate);
  DecayChannel(CMatrix op, std::vector<double> rates);

  const CMatrix& op() const { return op_; }
  bool time_dependent() const { return rates_.size() > 1; }
  const std::vector<double>& rates() const { return rates_; }

  /// Rate at tspan index `step` (the constant rate for scalar channels).
  double rate(std::size_t step) const { return rates_.size() == 1 ? rates_.front() : rates_.at(step); }

 private:
  CMatrix op_;
  std::vector<double> rates_;
};

enum class DynMethod { Expm, Ode };

struct OdeOptions {
  double atol = 1e-8;
  double rtol = 1e-8;
};

/// Master-equation parameterization:
///   d rho/dt = -i[H0 + sum_k c_k(t) Hc_k, rho] + sum_i gamma_i D[Gamma_i](rho).
class LindbladSpec {
 public:
  LindbladSpec(HamiltonianSpec hamiltonian, std::vector<double> tspan, ControlSpec controls = {},
               std::vector<DecayChannel> decays = {}, DynMethod method = DynMethod::Ode, OdeOptions ode = {});

  const HamiltonianSpec& hamiltonian() const { return hamiltonian_; }
  const std::vector<double>& tspan() const { return tspan_; }
  const ControlSpec& controls() const { return controls_; }
  const std::vector<DecayChannel>& decays() const { return decays_; }
  DynMethod method() const { return method_; }
  const OdeOptions& ode_options() const { return ode_; }

  Eigen::Index dim() const { return hamiltonian_.dim(); }
  std::size_t num_params() const { return hamiltonian_.num_params(); }
  std::size_t intervals() const { return tspan_.size() - 1; }

  /// Total Hamiltonian H0 + sum_k c_k Hc_k held over sub-interval j.
  CMatrix total_hamiltonian(std::size_t j) const;

  LindbladSpec with_controls(ControlSpec controls) const;
  LindbladSpec with_hamiltonian(HamiltonianSpec hamiltonian) const;
  LindbladSpec with_method(DynMethod method) const;
  LindbladSpec with_decays(std::vector<DecayChannel> decays) const;

 private:
  void validate() const;

  HamiltonianSpec hamiltonian_;
  std::vector<double> tspan_;
  ControlSpec controls_;
  std::vector<DecayChannel> decays_;
  DynMethod method_;
  OdeOptions ode_;
};

/// Kraus channel rho = sum_i K_i rho0 K_i^dagger with derivatives dK[a][i].
class KrausSpec {
 public:
  using Function = std::function<MatrixList(const RVector& u)>;
  using DerivativeFunction = std::function<std::vector<MatrixList>(const RVector& u)>;

  KrausSpec(MatrixList ops, std::vector<MatrixList> derivatives);
  static KrausSpec parametric(Function ops, DerivativeFunction derivatives, RVector u);

  const MatrixList& ops() const { return ops_; }
  const std::vector<MatrixList>& derivatives() const { return dk_; }
  const RVector& parameters() const { return u_; }
  bool is_parametric() const { return static_cast<bool>(ops_fn_); }

  Eigen::Index dim() const { return ops_.front().rows(); }
  std::size_t num_params() const { return dk_.size(); }

  KrausSpec with_parameters(RVector u) const;

 private:
  KrausSpec() = default;
  void validate();

  MatrixList ops_;
  std::vector<MatrixList> dk_;
  std::shared_ptr<const Function> ops_fn_;
  std::shared_ptr<const DerivativeFunction> dk_fn_;
  RVector u_;
};

/// Density matrices and their parameter derivatives at each stored time.
struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> rho;
  std::vector<MatrixList> drho;  // drho[time][parameter]
  /// Largest accepted ODE step (0 for matrix-exponential and Kraus results).
  double max_step = 0.0;

  std::size_t size() const { return times.size(); }
  std::size_t num_params() const { return drho.empty() ? 0 : drho.front().size(); }
  Eigen::Index dim() const { return rho.empty() ? 0 : rho.front().rows(); }
};

struct EvolveOptions {
  /// Co-propagate the parameter derivatives.
  bool derivatives = true;
  /// Keep only the final time point.
  bool final_only = false;
};

/// Solves the master equation from `probe` over the spec's tspan, together
/// with the forward sensitivities d(d_a rho)/dt = L(d_a rho) - i[dH_a, rho].
Trajectory evolve(const LindbladSpec& spec, const ProbeState& probe, const EvolveOptions& options = {});

struct KrausResult {
  CMatrix rho;
  MatrixList drho;
};

KrausResult kraus_apply(const KrausSpec& spec, const ProbeState& probe);

}  // namespace qestim
