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

#include "qestim/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qestim/linalg.hpp"
#include "qestim/ode.hpp"
#include "qestim/sensitivity.hpp"

namespace qestim {

DecayChannel::DecayChannel(CMatrix op, double rate) : op_(std::move(op)), rates_{rate} {
  if (op_.rows() != op_.cols() || op_.size() == 0) throw ValidationError("decay operator must be a square matrix");
  if (!op_.allFinite()) throw ValidationError("decay operator contains non-finite entries");
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw ValidationError(fmt::format("decay rate must be finite and nonnegative (got {})", rate));
  }
}

DecayChannel::DecayChannel(CMatrix op, std::vector<double> rates) : op_(std::move(op)), rates_(std::move(rates)) {
  if (op_.rows() != op_.cols() || op_.size() == 0) throw ValidationError("decay operator must be a square matrix");
  if (!op_.allFinite()) throw ValidationError("decay operator contains non-finite entries");
  if (rates_.empty()) throw ValidationError("decay rate vector must not be empty");
  for (double r : rates_) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ValidationError(fmt::format("decay rates must be finite and nonnegative (got {})", r));
    }
  }
}

LindbladSpec::LindbladSpec(HamiltonianSpec hamiltonian, std::vector<double> tspan, ControlSpec controls,
                           std::vector<DecayChannel> decays, DynMethod method, OdeOptions ode)
    : hamiltonian_(std::move(hamiltonian)),
      tspan_(std::move(tspan)),
      controls_(std::move(controls)),
      decays_(std::move(decays)),
      method_(method),
      ode_(ode) {
  validate();
}

void LindbladSpec::validate() const {
  if (tspan_.size() < 2) throw ValidationError("tspan must contain at least two time points");
  for (std::size_t j = 0; j + 1 < tspan_.size(); ++j) {
    if (!std::isfinite(tspan_[j]) || !(tspan_[j + 1] > tspan_[j])) {
      throw ValidationError(fmt::format("tspan must be strictly increasing (entries {} and {})", j, j + 1));
    }
  }
  const Eigen::Index d = hamiltonian_.dim();
  if (hamiltonian_.kind() == HamiltonianSpec::Kind::TimeSeries && hamiltonian_.series_length() != tspan_.size()) {
    throw ValidationError(fmt::format("time-series H0 has {} entries but tspan has {}", hamiltonian_.series_length(),
                                      tspan_.size()));
  }
  controls_.validate(d, intervals());
  for (std::size_t i = 0; i < decays_.size(); ++i) {
    if (decays_[i].op().rows() != d) {
      throw ValidationError(
          fmt::format("decay operator {} has dimension {} but the Hamiltonian has {}", i, decays_[i].op().rows(), d));
    }
    if (decays_[i].time_dependent() && decays_[i].rates().size() != tspan_.size()) {
      throw ValidationError(fmt::format("decay rate vector {} has length {} but tspan has {}", i,
                                        decays_[i].rates().size(), tspan_.size()));
    }
  }
}

CMatrix LindbladSpec::total_hamiltonian(std::size_t j) const {
  CMatrix h = hamiltonian_.free(j, tspan_[j]);
  for (std::size_t k = 0; k < controls_.count(); ++k) {
    const double c = controls_.amplitude(k, j, intervals());
    if (c != 0.0) h += c * controls_.hamiltonians()[k];
  }
  return h;
}

LindbladSpec LindbladSpec::with_controls(ControlSpec controls) const {
  LindbladSpec out = *this;
  out.controls_ = std::move(controls);
  out.validate();
  return out;
}

LindbladSpec LindbladSpec::with_hamiltonian(HamiltonianSpec hamiltonian) const {
  LindbladSpec out = *this;
  out.hamiltonian_ = std::move(hamiltonian);
  out.validate();
  return out;
}

LindbladSpec LindbladSpec::with_method(DynMethod method) const {
  LindbladSpec out = *this;
  out.method_ = method;
  return out;
}

LindbladSpec LindbladSpec::with_decays(std::vector<DecayChannel> decays) const {
  LindbladSpec out = *this;
  out.decays_ = std::move(decays);
  out.validate();
  return out;
}

KrausSpec::KrausSpec(MatrixList ops, std::vector<MatrixList> derivatives)
    : ops_(std::move(ops)), dk_(std::move(derivatives)) {
  validate();
}

KrausSpec KrausSpec::parametric(Function ops, DerivativeFunction derivatives, RVector u) {
  if (!ops || !derivatives) throw ValidationError("parametric Kraus channel requires K(u) and dK(u) callables");
  KrausSpec spec;
  spec.ops_fn_ = std::make_shared<const Function>(std::move(ops));
  spec.dk_fn_ = std::make_shared<const DerivativeFunction>(std::move(derivatives));
  spec.u_ = std::move(u);
  spec.ops_ = (*spec.ops_fn_)(spec.u_);
  spec.dk_ = (*spec.dk_fn_)(spec.u_);
  spec.validate();
  if (static_cast<std::size_t>(spec.u_.size()) != spec.dk_.size()) {
    throw ValidationError(fmt::format("parametric Kraus channel has {} parameters u but dK(u) covers {}",
                                      spec.u_.size(), spec.dk_.size()));
  }
  return spec;
}

KrausSpec KrausSpec::with_parameters(RVector u) const {
  if (!is_parametric()) throw ValidationError("only parametric Kraus channels can be re-bound to new parameters");
  return parametric(*ops_fn_, *dk_fn_, std::move(u));
}

void KrausSpec::validate() {
  if (ops_.empty()) throw ValidationError("Kraus channel needs at least one operator");
  const Eigen::Index d = ops_.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].rows() != d || ops_[i].cols() != d) {
      throw ValidationError(fmt::format("Kraus operator {} is not {}x{}", i, d, d));
    }
    if (!ops_[i].allFinite()) throw ValidationError(fmt::format("Kraus operator {} has non-finite entries", i));
    total += ops_[i].adjoint() * ops_[i];
  }
  if (!linalg::is_identity(total, 1e-10)) {
    const double defect = (total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    throw ValidationError(
        fmt::format("Kraus operators violate completeness: max |sum K^dag K - I| = {:.3e}", defect));
  }
  if (dk_.empty()) throw ValidationError("Kraus channel needs derivatives for at least one parameter");
  for (std::size_t a = 0; a < dk_.size(); ++a) {
    if (dk_[a].size() != ops_.size()) {
      throw ValidationError(
          fmt::format("dK[{}] has {} matrices but there are {} Kraus operators", a, dk_[a].size(), ops_.size()));
    }
    for (const auto& m : dk_[a]) {
      if (m.rows() != d || m.cols() != d) throw ValidationError(fmt::format("dK[{}] entries must be {}x{}", a, d, d));
    }
  }
}

namespace {

void check_probe(const LindbladSpec& spec, const ProbeState& probe) {
  if (probe.dim() != spec.dim()) {
    throw ValidationError(
        fmt::format("probe dimension {} does not match the dynamics dimension {}", probe.dim(), spec.dim()));
  }
}

Trajectory evolve_expm(const LindbladSpec& spec, const ProbeState& probe, const EvolveOptions& options) {
  const auto tape = sensitivity::record(spec, probe.density(), options.derivatives);
  const Eigen::Index d = spec.dim();
  Trajectory traj;
  const std::size_t first = options.final_only ? tape.states.size() - 1 : 0;
  for (std::size_t j = first; j < tape.states.size(); ++j) {
    MatrixList blocks = sensitivity::unstack(tape.states[j], d);
    traj.times.push_back(spec.tspan()[j]);
    traj.rho.push_back(std::move(blocks.front()));
    traj.drho.emplace_back(std::make_move_iterator(blocks.begin() + 1), std::make_move_iterator(blocks.end()));
  }
  return traj;
}

// Master-equation right-hand side with forward sensitivities, in matrix form.
// Rates are interpolated linearly over each sub-interval.
class LindbladRhs {
 public:
  LindbladRhs(const LindbladSpec& spec, std::size_t blocks)
      : spec_(spec), d_(spec.dim()), blocks_(blocks), rates_(spec.decays().size()) {
    for (const auto& ch : spec_.decays()) {
      const CMatrix& g = ch.op();
      gg_.push_back(g.adjoint() * g);
      jump_.push_back(g);
      jump_adj_.push_back(g.adjoint());
      const bool diag = (g - CMatrix(g.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
      diagonal_.push_back(diag);
      // For diagonal G, G X G^dag = (g g^dag) o X elementwise.
      jump_outer_.push_back(diag ? CMatrix(g.diagonal() * g.diagonal().adjoint()) : CMatrix());
      time_dependent_ = time_dependent_ || ch.time_dependent();
    }
  }

  void set_interval(std::size_t j) {
    j_ = j;
    t0_ = spec_.tspan()[j];
    t1_ = spec_.tspan()[j + 1];
    h_ = spec_.total_hamiltonian(j);
    dh_ = spec_.hamiltonian().derivatives(j, t0_);
    update_rates(t0_);
  }

  void operator()(double t, const CVector& x, CVector& dx) {
    if (time_dependent_) update_rates(t);
    const Eigen::Index s2 = d_ * d_;
    // Products on owned matrices are much faster than on Maps for small d.
    rho_ = Eigen::Map<const CMatrix>(x.data(), d_, d_);
    for (std::size_t b = 0; b < blocks_; ++b) {
      if (b > 0) xb_ = Eigen::Map<const CMatrix>(x.data() + static_cast<Eigen::Index>(b) * s2, d_, d_);
      const CMatrix& xb = b == 0 ? rho_ : xb_;
      out_.noalias() = a_eff_ * xb;
      out_.noalias() += xb * a_eff_adj_;
      for (std::size_t c = 0; c < rates_.size(); ++c) {
        if (rates_[c] == 0.0) continue;
        if (diagonal_[c]) {
          out_ += rates_[c] * jump_outer_[c].cwiseProduct(xb);
        } else {
          tmp_.noalias() = jump_[c] * xb;
          out_.noalias() += rates_[c] * tmp_ * jump_adj_[c];
        }
      }
      if (b > 0) {
        tmp_.noalias() = dh_[b - 1] * rho_;
        out_ -= kI * (tmp_ - tmp_.adjoint());  // -i [dH, rho] for Hermitian rho
      }
      Eigen::Map<CMatrix>(dx.data() + static_cast<Eigen::Index>(b) * s2, d_, d_) = out_;
    }
  }

 private:
  void update_rates(double t) {
    const double s = (t - t0_) / (t1_ - t0_);
    a_eff_ = -kI * h_;
    for (std::size_t c = 0; c < rates_.size(); ++c) {
      const auto& ch = spec_.decays()[c];
      rates_[c] = ch.time_dependent() ? (1.0 - s) * ch.rate(j_) + s * ch.rate(j_ + 1) : ch.rate(0);
      if (rates_[c] != 0.0) a_eff_ -= 0.5 * rates_[c] * gg_[c];
    }
    a_eff_adj_ = a_eff_.adjoint();
  }

  const LindbladSpec& spec_;
  Eigen::Index d_;
  std::size_t blocks_;
  std::vector<double> rates_;
  MatrixList gg_;
  MatrixList jump_, jump_adj_, jump_outer_;
  std::vector<bool> diagonal_;
  bool time_dependent_ = false;
  std::size_t j_ = 0;
  double t0_ = 0.0, t1_ = 1.0;
  CMatrix h_;
  MatrixList dh_;
  CMatrix a_eff_, a_eff_adj_;
  CMatrix rho_, xb_, out_, tmp_;
};

Trajectory evolve_ode(const LindbladSpec& spec, const ProbeState& probe, const EvolveOptions& options) {
  const Eigen::Index d = spec.dim();
  const std::size_t n = options.derivatives ? spec.num_params() : 0;
  const std::size_t blocks = n + 1;
  CVector x = CVector::Zero(static_cast<Eigen::Index>(blocks) * d * d);
  x.head(d * d) = linalg::vec(probe.density());

  LindbladRhs rhs(spec, blocks);
  const ode::Tsit5 solver(spec.ode_options().atol, spec.ode_options().rtol);
  ode::Stats stats;
  double step = 0.0;

  Trajectory traj;
  auto store = [&](std::size_t j) {
    MatrixList parts = sensitivity::unstack(x, d);
    traj.times.push_back(spec.tspan()[j]);
    traj.rho.push_back(std::move(parts.front()));
    traj.drho.emplace_back(std::make_move_iterator(parts.begin() + 1), std::make_move_iterator(parts.end()));
  };
  if (!options.final_only) store(0);
  const auto f = [&rhs](double t, const CVector& y, CVector& dy) { rhs(t, y, dy); };
  for (std::size_t j = 0; j < spec.intervals(); ++j) {
    rhs.set_interval(j);
    solver.integrate(f, spec.tspan()[j], spec.tspan()[j + 1], x, step, stats);
    if (!x.allFinite()) {
      throw NumericalError(fmt::format("non-finite density matrix at t = {:.17g}", spec.tspan()[j + 1]));
    }
    if (!options.final_only || j + 1 == spec.intervals()) store(j + 1);
  }
  traj.max_step = stats.max_step;
  return traj;
}

}  // namespace

Trajectory evolve(const LindbladSpec& spec, const ProbeState& probe, const EvolveOptions& options) {
  check_probe(spec, probe);
  return spec.method() == DynMethod::Expm ? evolve_expm(spec, probe, options) : evolve_ode(spec, probe, options);
}

KrausResult kraus_apply(const KrausSpec& spec, const ProbeState& probe) {
  if (probe.dim() != spec.dim()) {
    throw ValidationError(
        fmt::format("probe dimension {} does not match the Kraus operator dimension {}", probe.dim(), spec.dim()));
  }
  const CMatrix& rho0 = probe.density();
  KrausResult out;
  out.rho = CMatrix::Zero(spec.dim(), spec.dim());
  for (const auto& k : spec.ops()) out.rho += k * rho0 * k.adjoint();
  for (const auto& dks : spec.derivatives()) {
    CMatrix d = CMatrix::Zero(spec.dim(), spec.dim());
    for (std::size_t i = 0; i < dks.size(); ++i) {
      const CMatrix& k = spec.ops()[i];
      d += dks[i] * rho0 * k.adjoint() + k * rho0 * dks[i].adjoint();
    }
    out.drho.push_back(std::move(d));
  }
  return out;
}

}  // namespace qestim
