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

#include "qestim/optimize.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qestim/gradient.hpp"
#include "qestim/linalg.hpp"
#include "qestim/log.hpp"

namespace qestim::opt {

Scenario Scenario::control(ControlBounds bound) {
  Scenario s;
  s.kind = ScenarioKind::Control;
  s.ctrl_bound = bound;
  return s;
}

Scenario Scenario::state() {
  Scenario s;
  s.kind = ScenarioKind::State;
  return s;
}

Scenario Scenario::measurement(MeasurementType type) {
  Scenario s;
  s.kind = ScenarioKind::Measurement;
  s.mtype = type;
  return s;
}

Scenario Scenario::comprehensive(CompType type, MeasurementType mtype) {
  Scenario s;
  s.kind = ScenarioKind::Comprehensive;
  s.ctype = type;
  s.mtype = mtype;
  return s;
}

bool Scenario::has_control() const {
  return kind == ScenarioKind::Control ||
         (kind == ScenarioKind::Comprehensive && ctype != CompType::SM);
}

bool Scenario::has_state() const {
  return kind == ScenarioKind::State || (kind == ScenarioKind::Comprehensive && ctype != CompType::CM);
}

bool Scenario::has_measurement() const {
  return kind == ScenarioKind::Measurement || (kind == ScenarioKind::Comprehensive && ctype != CompType::SC);
}

std::string Scenario::name() const {
  switch (kind) {
    case ScenarioKind::Control: return "ControlOpt";
    case ScenarioKind::State: return "StateOpt";
    case ScenarioKind::Measurement: return "MeasurementOpt";
    case ScenarioKind::Comprehensive: return "CompOpt";
  }
  return "?";
}

const char* to_string(MeasurementType type) {
  switch (type) {
    case MeasurementType::Projection: return "Projection";
    case MeasurementType::LC: return "LC";
    case MeasurementType::Rotation: return "Rotation";
  }
  return "?";
}

const char* to_string(CompType type) {
  switch (type) {
    case CompType::SM: return "SM";
    case CompType::SC: return "SC";
    case CompType::CM: return "CM";
    case CompType::SCM: return "SCM";
  }
  return "?";
}

MeasurementType measurement_type_from_name(std::string_view name) {
  if (name == "Projection" || name == "projection") return MeasurementType::Projection;
  if (name == "LC" || name == "lc") return MeasurementType::LC;
  if (name == "Rotation" || name == "rotation") return MeasurementType::Rotation;
  throw ValidationError(fmt::format("unknown measurement type '{}' (expected Projection, LC or Rotation)", name));
}

CompType comp_type_from_name(std::string_view name) {
  if (name == "SM") return CompType::SM;
  if (name == "SC") return CompType::SC;
  if (name == "CM") return CompType::CM;
  if (name == "SCM") return CompType::SCM;
  throw ValidationError(fmt::format("unknown comprehensive type '{}' (expected SM, SC, CM or SCM)", name));
}

const char* to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::GRAPE: return "GRAPE";
    case AlgorithmKind::PSO: return "PSO";
    case AlgorithmKind::DE: return "DE";
  }
  return "?";
}

AlgorithmKind algorithm_from_name(std::string_view name) {
  if (name == "GRAPE" || name == "grape" || name == "autoGRAPE") return AlgorithmKind::GRAPE;
  if (name == "PSO" || name == "pso") return AlgorithmKind::PSO;
  if (name == "DE" || name == "de") return AlgorithmKind::DE;
  throw ValidationError(fmt::format("unknown algorithm '{}' (expected GRAPE, PSO or DE)", name));
}

void Algorithm::validate() const {
  if (kind != AlgorithmKind::GRAPE && population < 2) {
    throw ValidationError(fmt::format("population must be at least 2 (got {})", population));
  }
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(fd_step > 0.0)) throw ValidationError("finite-difference step must be positive");
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw ValidationError("crossover rate must lie in [0, 1]");
  if (!std::isfinite(mutation) || !std::isfinite(inertia) || !std::isfinite(cognitive) || !std::isfinite(social)) {
    throw ValidationError("algorithm weights must be finite");
  }
  if (stall_window == 0) throw ValidationError("stall window must be positive");
}

Objective default_objective(const Scenario& scenario) {
  Objective o;
  o.kind = scenario.has_measurement() ? Objective::Kind::CFIM : Objective::Kind::QFIM;
  return o;
}

namespace {

CVector leading_vector(const ProbeState& probe) {
  if (probe.is_pure_vector()) return probe.vector();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(probe.density());
  return eig.eigenvectors().col(eig.eigenvalues().size() - 1);
}

// Columns of a projective basis when `m` consists of d rank-one projectors.
std::optional<CMatrix> projective_basis(const Measurement& m, Eigen::Index d) {
  if (static_cast<Eigen::Index>(m.size()) != d) return std::nullopt;
  CMatrix basis(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const CMatrix& e = m.elements()[static_cast<std::size_t>(k)];
    if (std::abs(e.trace() - 1.0) > 1e-10 || (e * e - e).cwiseAbs().maxCoeff() > 1e-10) return std::nullopt;
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(e);
    basis.col(k) = eig.eigenvectors().col(d - 1);
  }
  return basis;
}

void gram_schmidt(CMatrix& a) {
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index j = 0; j < k; ++j) a.col(k) -= a.col(j).dot(a.col(k)) * a.col(j);
    const double n = a.col(k).norm();
    if (n < 1e-12) {
      // Degenerate column: fall back to a QR completion of the whole set.
      const CMatrix q = Eigen::HouseholderQR<CMatrix>(a).householderQ();
      a = q;
      return;
    }
    a.col(k) /= n;
  }
}

}  // namespace

Problem::Problem(Scheme base, Scenario scenario, Objective objective)
    : base_(std::move(base)), scenario_(std::move(scenario)), objective_(std::move(objective)) {
  d_ = base_.dim();
  const std::size_t n = base_.num_params();
  objective_.validate(n);
  maximize_ = objective_.maximize(n);
  if (scenario_.has_measurement() && objective_.kind != Objective::Kind::CFIM) {
    throw ValidationError(fmt::format("{} optimizes the measurement and needs the CFIM objective (got {})",
                                      scenario_.name(), to_string(objective_.kind)));
  }
  std::vector<double> init;

  if (scenario_.has_control()) {
    if (!base_.is_lindblad() || base_.lindblad().controls().empty()) {
      throw ValidationError(fmt::format("{} needs a Lindblad scheme with control Hamiltonians", scenario_.name()));
    }
    const LindbladSpec& spec = base_.lindblad();
    std::vector<std::vector<double>> amps;
    if (scenario_.ctrl) {
      amps = *scenario_.ctrl;
    } else if (!spec.controls().amplitudes().empty()) {
      amps = spec.controls().amplitudes();
    } else {
      amps.assign(spec.controls().count(), std::vector<double>(spec.intervals(), 0.0));
    }
    if (scenario_.ctrl_bound.lo > scenario_.ctrl_bound.hi) throw ValidationError("ctrl_bound must satisfy lo <= hi");
    ControlSpec(spec.controls().hamiltonians(), amps, scenario_.ctrl_bound).validate(d_, spec.intervals());
    n_ctrl_ = amps.size();
    n_seg_ = amps.front().size();
    ctrl_off_ = init.size();
    for (const auto& row : amps) {
      for (double c : row) init.push_back(scenario_.ctrl_bound.clip(c));
    }
  }

  if (scenario_.has_state()) {
    CVector psi = scenario_.psi ? *scenario_.psi : leading_vector(base_.probe());
    if (psi.size() != d_) {
      throw ValidationError(fmt::format("initial probe has dimension {} (expected {})", psi.size(), d_));
    }
    state_off_ = init.size();
    for (Eigen::Index i = 0; i < d_; ++i) init.push_back(psi(i).real());
    for (Eigen::Index i = 0; i < d_; ++i) init.push_back(psi(i).imag());
  }

  if (scenario_.has_measurement()) {
    meas_off_ = init.size();
    switch (scenario_.mtype) {
      case MeasurementType::Projection: {
        const CMatrix basis = projective_basis(base_.measurement(), d_).value_or(CMatrix::Identity(d_, d_));
        for (Eigen::Index k = 0; k < d_ * d_; ++k) init.push_back(basis(k).real());
        for (Eigen::Index k = 0; k < d_ * d_; ++k) init.push_back(basis(k).imag());
        break;
      }
      case MeasurementType::LC: {
        basis_ = scenario_.povm_basis.empty() ? base_.measurement().elements() : scenario_.povm_basis;
        Measurement check(basis_);  // validates the input set
        if (check.dim() != d_) throw ValidationError("LC input POVM dimension does not match the scheme");
        lc_in_ = basis_.size();
        lc_out_ = scenario_.lc_outcomes == 0 ? lc_in_ : scenario_.lc_outcomes;
        for (std::size_t i = 0; i < lc_out_; ++i) {
          for (std::size_t j = 0; j < lc_in_; ++j) {
            init.push_back(lc_out_ == lc_in_ ? (i == j ? 1.0 : 0.0) : 1.0 / static_cast<double>(lc_out_));
          }
        }
        break;
      }
      case MeasurementType::Rotation: {
        basis_ = scenario_.povm_basis.empty() ? base_.measurement().elements() : scenario_.povm_basis;
        Measurement check(basis_);
        if (check.dim() != d_) throw ValidationError("Rotation input POVM dimension does not match the scheme");
        MatrixList gm = linalg::gell_mann_basis(d_);
        generators_.assign(gm.begin() + 1, gm.end());
        init.resize(init.size() + generators_.size(), 0.0);
        break;
      }
    }
    meas_len_ = init.size() - meas_off_;
  }

  initial_ = Eigen::Map<const RVector>(init.data(), static_cast<Eigen::Index>(init.size()));
  project(initial_);
}

void Problem::project(RVector& v) const {
  if (scenario_.has_control()) {
    for (std::size_t i = 0; i < n_ctrl_ * n_seg_; ++i) v(ctrl_off_ + i) = scenario_.ctrl_bound.clip(v(ctrl_off_ + i));
  }
  if (scenario_.has_state()) {
    const double norm = v.segment(state_off_, 2 * d_).norm();
    if (norm > 0.0 && std::isfinite(norm)) {
      v.segment(state_off_, 2 * d_) /= norm;
    } else {
      v.segment(state_off_, 2 * d_).setZero();
      v(state_off_) = 1.0;
    }
  }
  if (scenario_.has_measurement()) {
    switch (scenario_.mtype) {
      case MeasurementType::Projection: {
        const Eigen::Index s = d_ * d_;
        CMatrix a(d_, d_);
        for (Eigen::Index k = 0; k < s; ++k) a(k) = Complex(v(meas_off_ + k), v(meas_off_ + s + k));
        gram_schmidt(a);
        for (Eigen::Index k = 0; k < s; ++k) {
          v(meas_off_ + k) = a(k).real();
          v(meas_off_ + s + k) = a(k).imag();
        }
        break;
      }
      case MeasurementType::LC: {
        for (std::size_t j = 0; j < lc_in_; ++j) {
          double sum = 0.0;
          for (std::size_t i = 0; i < lc_out_; ++i) {
            double& b = v(meas_off_ + i * lc_in_ + j);
            b = std::isfinite(b) ? std::max(b, 0.0) : 0.0;
            sum += b;
          }
          for (std::size_t i = 0; i < lc_out_; ++i) {
            double& b = v(meas_off_ + i * lc_in_ + j);
            b = sum > 0.0 ? b / sum : 1.0 / static_cast<double>(lc_out_);
          }
        }
        break;
      }
      case MeasurementType::Rotation: break;
    }
  }
}

Scheme Problem::apply(const RVector& v) const {
  Scheme s = base_;
  if (scenario_.has_control()) {
    const LindbladSpec& spec = base_.lindblad();
    std::vector<std::vector<double>> amps(n_ctrl_, std::vector<double>(n_seg_));
    for (std::size_t k = 0; k < n_ctrl_; ++k) {
      for (std::size_t j = 0; j < n_seg_; ++j) amps[k][j] = v(ctrl_off_ + k * n_seg_ + j);
    }
    s = s.with_param(spec.with_controls(ControlSpec(spec.controls().hamiltonians(), std::move(amps), scenario_.ctrl_bound)));
  }
  if (scenario_.has_state()) {
    CVector psi(d_);
    for (Eigen::Index i = 0; i < d_; ++i) psi(i) = Complex(v(state_off_ + i), v(state_off_ + d_ + i));
    s = s.with_probe(ProbeState::from_vector(psi / psi.norm()));
  }
  if (scenario_.has_measurement()) {
    MatrixList elems;
    switch (scenario_.mtype) {
      case MeasurementType::Projection: {
        const Eigen::Index n = d_ * d_;
        CMatrix a(d_, d_);
        for (Eigen::Index k = 0; k < n; ++k) a(k) = Complex(v(meas_off_ + k), v(meas_off_ + n + k));
        s = s.with_measurement(Measurement::projective(a));
        return s;
      }
      case MeasurementType::LC:
        for (std::size_t i = 0; i < lc_out_; ++i) {
          CMatrix e = CMatrix::Zero(d_, d_);
          for (std::size_t j = 0; j < lc_in_; ++j) e += v(meas_off_ + i * lc_in_ + j) * basis_[j];
          elems.push_back(std::move(e));
        }
        break;
      case MeasurementType::Rotation: {
        CMatrix g = CMatrix::Zero(d_, d_);
        for (std::size_t k = 0; k < generators_.size(); ++k) g += v(meas_off_ + k) * generators_[k];
        const CMatrix u = linalg::expm(kI * g);
        for (const auto& e : basis_) elems.push_back(u * e * u.adjoint());
        break;
      }
    }
    s = s.with_measurement(Measurement(std::move(elems)));
  }
  return s;
}

double Problem::value(const RVector& v) const { return objective_value(objective_, apply(v)); }

RVector Problem::gradient(const RVector& v) const {
  if (scenario_.has_measurement()) throw ValidationError("adjoint gradients cover control and probe variables only");
  const Scheme s = apply(v);
  const Measurement& m = s.measurement();
  auto cotangent = [&](const CMatrix& rho, const MatrixList& drho) {
    return objective_cotangent(objective_, rho, drho, m);
  };
  RVector g = RVector::Zero(v.size());
  CMatrix lambda0;
  if (s.is_lindblad()) {
    const grad::Backprop bp =
        grad::backprop(s.lindblad(), s.probe().density(), cotangent, Execution::Parallel, scenario_.has_control());
    if (scenario_.has_control()) {
      const auto cg = grad::control_gradient(bp, s.lindblad());
      for (std::size_t k = 0; k < n_ctrl_; ++k) {
        for (std::size_t j = 0; j < n_seg_; ++j) g(ctrl_off_ + k * n_seg_ + j) = cg[k][j];
      }
    }
    lambda0 = bp.initial_cotangent();
  } else {
    const KrausResult r = kraus_apply(s.kraus(), s.probe());
    lambda0 = grad::kraus_initial_cotangent(s.kraus(), cotangent(r.rho, r.drho));
  }
  if (scenario_.has_state()) {
    const CVector& psi = s.probe().vector();
    CVector gp = grad::probe_gradient(lambda0, psi);
    // Tangent to the unit sphere (the variables are renormalized).
    gp -= psi * psi.dot(gp).real();
    for (Eigen::Index i = 0; i < d_; ++i) {
      g(state_off_ + i) = gp(i).real();
      g(state_off_ + d_ + i) = gp(i).imag();
    }
  }
  return g;
}

RVector Problem::finite_difference_gradient(const RVector& v, double h, Execution exec) const {
  RVector g(v.size());
  for_each_index(size(), exec, [&](std::size_t i) {
    RVector plus = v, minus = v;
    plus(static_cast<Eigen::Index>(i)) += h;
    minus(static_cast<Eigen::Index>(i)) -= h;
    project(plus);
    project(minus);
    g(static_cast<Eigen::Index>(i)) = (value(plus) - value(minus)) / (2.0 * h);
  });
  return g;
}

RVector Problem::random_point(std::mt19937_64& rng) const {
  RVector v = initial_;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (scenario_.has_control()) {
    const ControlBounds& b = scenario_.ctrl_bound;
    const double lo = std::isfinite(b.lo) ? b.lo : (std::isfinite(b.hi) ? std::min(b.hi, 1.0) - 2.0 : -1.0);
    const double hi = std::isfinite(b.hi) ? b.hi : lo + 2.0;
    for (std::size_t i = 0; i < n_ctrl_ * n_seg_; ++i) v(ctrl_off_ + i) = lo + (hi - lo) * unit(rng);
  }
  if (scenario_.has_state()) {
    for (Eigen::Index i = 0; i < 2 * d_; ++i) v(state_off_ + i) = normal(rng);
  }
  if (scenario_.has_measurement()) {
    for (std::size_t i = 0; i < meas_len_; ++i) {
      switch (scenario_.mtype) {
        case MeasurementType::Projection: v(meas_off_ + i) = normal(rng); break;
        case MeasurementType::LC: v(meas_off_ + i) = unit(rng); break;
        case MeasurementType::Rotation: v(meas_off_ + i) = 2.0 * unit(rng) - 1.0; break;
      }
    }
  }
  project(v);
  return v;
}

double Problem::span(std::size_t i) const {
  if (scenario_.has_control() && i >= ctrl_off_ && i < ctrl_off_ + n_ctrl_ * n_seg_) {
    return scenario_.ctrl_bound.bounded() ? scenario_.ctrl_bound.hi - scenario_.ctrl_bound.lo : 2.0;
  }
  if (scenario_.has_measurement() && scenario_.mtype == MeasurementType::LC && i >= meas_off_) return 1.0;
  return 2.0;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Runner {
 public:
  Runner(const Problem& p, const Algorithm& a, bool savefile) : p_(p), a_(a), savefile_(savefile), rng_(a.seed) {}

  double fitness(double value) const {
    if (!std::isfinite(value) && !(p_.maximize() && value > 0.0)) return kNegInf;
    return p_.maximize() ? value : -value;
  }

  // Evaluates every point of `pts`, in parallel.
  std::vector<double> evaluate(const std::vector<RVector>& pts) const {
    std::vector<double> out(pts.size());
    for_each_index(pts.size(), a_.exec, [&](std::size_t i) { out[i] = p_.value(pts[i]); });
    return out;
  }

  void push(const RVector& best, double value) {
    rec_.history.push_back(value);
    if (savefile_) rec_.variable_history.push_back(best);
  }

  // True when the best value has stalled over the last window.
  bool stalled() const {
    const auto& h = rec_.history;
    if (h.size() <= a_.stall_window) return false;
    const double now = h.back(), then = h[h.size() - 1 - a_.stall_window];
    const double scale = std::max(std::abs(now), std::abs(then));
    return std::abs(now - then) <= a_.stall_tol * scale;
  }

  // Returns after finishing iteration `it`, true when the loop should stop.
  bool finish_iteration(std::size_t it) {
    rec_.iterations = it;
    if (stalled()) {
      rec_.converged = true;
      rec_.reason = fmt::format("best objective changed by less than {:g} (relative) over {} iterations",
                                a_.stall_tol, a_.stall_window);
      return true;
    }
    return false;
  }

  void grape(RVector cur, double cur_val) {
    push(cur, cur_val);
    for (std::size_t it = 1; it <= a_.max_episode; ++it) {
      const RVector g = a_.finite_difference ? p_.finite_difference_gradient(cur, a_.fd_step, a_.exec)
                                             : p_.gradient(cur);
      if (!g.allFinite()) throw NumericalError(fmt::format("GRAPE gradient is not finite at iteration {}", it));
      const RVector dir = p_.maximize() ? g : RVector(-g);
      double lr = a_.learning_rate;
      bool accepted = false;
      for (int k = 0; k < 40 && !accepted; ++k, lr *= 0.5) {
        RVector cand = cur + lr * dir;
        p_.project(cand);
        const double val = p_.value(cand);
        if (fitness(val) >= fitness(cur_val)) {
          cur = std::move(cand);
          cur_val = val;
          accepted = true;
        }
      }
      push(cur, cur_val);
      if (!accepted) {
        rec_.iterations = it;
        rec_.converged = true;
        rec_.reason = "no step along the gradient improves the objective";
        break;
      }
      if (finish_iteration(it)) break;
    }
    rec_.best = cur;
    rec_.best_value = cur_val;
  }

  std::vector<RVector> initial_population(const RVector& start) {
    std::vector<RVector> pop{start};
    while (pop.size() < a_.population) pop.push_back(p_.random_point(rng_));
    return pop;
  }

  std::size_t argbest(const std::vector<double>& vals) const {
    std::size_t b = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      if (fitness(vals[i]) > fitness(vals[b])) b = i;
    }
    return b;
  }

  void pso(const RVector& start) {
    std::vector<RVector> x = initial_population(start);
    std::vector<double> val = evaluate(x);
    std::vector<RVector> v(x.size(), RVector::Zero(start.size()));
    std::vector<RVector> pbest = x;
    std::vector<double> pval = val;
    std::size_t g = argbest(pval);
    RVector gbest = pbest[g];
    double gval = pval[g];
    push(gbest, gval);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t it = 1; it <= a_.max_episode; ++it) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (Eigen::Index k = 0; k < start.size(); ++k) {
          const double r1 = unit(rng_), r2 = unit(rng_);
          double vel = a_.inertia * v[i](k) + a_.cognitive * r1 * (pbest[i](k) - x[i](k)) +
                       a_.social * r2 * (gbest(k) - x[i](k));
          const double vmax = p_.span(static_cast<std::size_t>(k));
          vel = std::clamp(vel, -vmax, vmax);
          v[i](k) = vel;
          x[i](k) += vel;
        }
        p_.project(x[i]);
      }
      val = evaluate(x);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (fitness(val[i]) > fitness(pval[i])) {
          pbest[i] = x[i];
          pval[i] = val[i];
        }
        if (fitness(val[i]) > fitness(gval)) {
          gbest = x[i];
          gval = val[i];
        }
      }
      push(gbest, gval);
      if (finish_iteration(it)) break;
    }
    rec_.best = gbest;
    rec_.best_value = gval;
  }

  void de(const RVector& start) {
    std::vector<RVector> x = initial_population(start);
    std::vector<double> val = evaluate(x);
    std::size_t b = argbest(val);
    push(x[b], val[b]);
    const std::size_t np = x.size();
    const auto dim = start.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> other(0, np - 2);
    std::uniform_int_distribution<Eigen::Index> pick_dim(0, dim - 1);
    auto draw_other = [&](std::size_t i) {
      const std::size_t r = other(rng_);
      return r >= i ? r + 1 : r;
    };
    for (std::size_t it = 1; it <= a_.max_episode; ++it) {
      std::vector<RVector> trial(np);
      for (std::size_t i = 0; i < np; ++i) {
        std::size_t r1 = draw_other(i), r2 = draw_other(i), r3 = draw_other(i);
        if (np >= 4) {
          while (r2 == r1) r2 = draw_other(i);
          while (r3 == r1 || r3 == r2) r3 = draw_other(i);
        }
        const RVector mutant = x[r1] + a_.mutation * (x[r2] - x[r3]);
        const Eigen::Index jrand = pick_dim(rng_);
        trial[i] = x[i];
        for (Eigen::Index k = 0; k < dim; ++k) {
          if (unit(rng_) < a_.crossover || k == jrand) trial[i](k) = mutant(k);
        }
        p_.project(trial[i]);
      }
      const std::vector<double> tval = evaluate(trial);
      for (std::size_t i = 0; i < np; ++i) {
        if (fitness(tval[i]) >= fitness(val[i])) {
          x[i] = std::move(trial[i]);
          val[i] = tval[i];
        }
      }
      b = argbest(val);
      push(x[b], val[b]);
      if (finish_iteration(it)) break;
    }
    rec_.best = x[b];
    rec_.best_value = val[b];
  }

  OptimizationRecord take() { return std::move(rec_); }
  OptimizationRecord& record() { return rec_; }

 private:
  const Problem& p_;
  const Algorithm& a_;
  bool savefile_;
  std::mt19937_64 rng_;
  OptimizationRecord rec_;
};

}  // namespace

OptimizeResult optimize(const Scheme& scheme, const Scenario& scenario, const Algorithm& algorithm,
                        const Objective& objective, bool savefile) {
  const auto t0 = std::chrono::steady_clock::now();
  algorithm.validate();
  if (algorithm.kind == AlgorithmKind::GRAPE) {
    if (scenario.has_measurement()) {
      throw ValidationError(fmt::format("GRAPE does not optimize measurements ({}); use PSO or DE", scenario.name()));
    }
    if (objective.kind == Objective::Kind::HCRB) throw ValidationError("GRAPE needs a QFIM or CFIM objective");
  }
  const Problem problem(scheme, scenario, objective);
  const RVector start = problem.initial();
  const double start_val = problem.value(start);
  if (!std::isfinite(start_val)) {
    throw NumericalError(fmt::format("{} objective is not finite at the initial point", to_string(objective.kind)));
  }

  Runner runner(problem, algorithm, savefile);
  OptimizationRecord& rec = runner.record();
  rec.scenario = scenario.name();
  rec.algorithm = to_string(algorithm.kind);
  rec.objective = to_string(objective.kind);
  rec.maximize = problem.maximize();
  rec.reason = fmt::format("reached max_episode = {}", algorithm.max_episode);
  switch (algorithm.kind) {
    case AlgorithmKind::GRAPE: runner.grape(start, start_val); break;
    case AlgorithmKind::PSO: runner.pso(start); break;
    case AlgorithmKind::DE: runner.de(start); break;
  }
  if (!rec.converged) rec.iterations = rec.history.empty() ? 0 : rec.history.size() - 1;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Scheme best = problem.apply(rec.best);
  return OptimizeResult{std::move(best), runner.take()};
}

}  // namespace qestim::opt
