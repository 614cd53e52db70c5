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

#include "qestim/error.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qestim/gradient.hpp"
#include "qestim/linalg.hpp"
#include "qestim/log.hpp"
#include "qestim/superop.hpp"

namespace qestim::error {

namespace {

CMatrix unit(Eigen::Index d, Eigen::Index p, Eigen::Index q, Complex v) {
  CMatrix e = CMatrix::Zero(d, d);
  e(p, q) = v;
  return e;
}

class Collector {
 public:
  void add(std::string name, const std::vector<double>& g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    groups_.push_back(Term{std::move(name), g.size(), std::sqrt(s)});
    values_.insert(values_.end(), g.begin(), g.end());
  }

  InputGradient take() {
    InputGradient out;
    out.groups = std::move(groups_);
    out.values = Eigen::Map<const RVector>(values_.data(), static_cast<Eigen::Index>(values_.size()));
    return out;
  }

 private:
  std::vector<Term> groups_;
  std::vector<double> values_;
};

// Gradient over the real and imaginary parts of every entry of a d x d matrix,
// given the change of f along a complex unit perturbation.
template <typename F>
std::vector<double> matrix_gradient(Eigen::Index d, F&& along) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(2 * d * d));
  for (Eigen::Index q = 0; q < d; ++q) {
    for (Eigen::Index p = 0; p < d; ++p) {
      g.push_back(along(p, q, Complex(1.0, 0.0)));
      g.push_back(along(p, q, Complex(0.0, 1.0)));
    }
  }
  return g;
}

// Gradient with respect to the entries of a probe vector or density matrix.
void add_probe(Collector& c, const ProbeState& probe, const CMatrix& lambda0) {
  if (probe.is_pure_vector()) {
    const CVector g = grad::probe_gradient(lambda0, probe.vector());
    std::vector<double> out;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      out.push_back(g(i).real());
      out.push_back(g(i).imag());
    }
    c.add("probe", out);
  } else {
    const Eigen::Index d = lambda0.rows();
    // df = Re Tr(Lambda d rho0) = Re sum_pq Lambda_qp d rho_pq.
    c.add("probe", matrix_gradient(d, [&](Eigen::Index p, Eigen::Index q, Complex v) {
            return (lambda0(q, p) * v).real();
          }));
  }
}

InputGradient lindblad_gradient(const Scheme& scheme, const Objective& objective) {
  const LindbladSpec& spec = scheme.lindblad();
  const Measurement& m = scheme.measurement();
  const grad::Backprop bp = grad::backprop(
      spec, scheme.probe().density(),
      [&](const CMatrix& rho, const MatrixList& drho) { return objective_cotangent(objective, rho, drho, m); });
  const Eigen::Index d = spec.dim();
  const std::size_t intervals = spec.intervals();
  const HamiltonianSpec& ham = spec.hamiltonian();
  const bool per_interval = ham.time_dependent();
  Collector c;

  // H0 and dH: one group for a static Hamiltonian, one per sub-interval otherwise.
  const std::size_t groups = per_interval ? intervals : 1;
  for (std::size_t gidx = 0; gidx < groups; ++gidx) {
    const std::size_t j0 = per_interval ? gidx : 0, j1 = per_interval ? gidx + 1 : intervals;
    const std::string suffix = per_interval ? fmt::format("[{}]", gidx) : "";
    c.add("H0" + suffix, matrix_gradient(d, [&](Eigen::Index p, Eigen::Index q, Complex v) {
            const CMatrix e = superop::hamiltonian(unit(d, p, q, v));
            double s = 0.0;
            for (std::size_t j = j0; j < j1; ++j) s += bp.lindbladian_term(j, e);
            return s;
          }));
    for (std::size_t a = 0; a < spec.num_params(); ++a) {
      c.add(fmt::format("dH{}{}", a, suffix), matrix_gradient(d, [&](Eigen::Index p, Eigen::Index q, Complex v) {
              const CMatrix e = superop::hamiltonian(unit(d, p, q, v));
              double s = 0.0;
              for (std::size_t j = j0; j < j1; ++j) s += bp.coupling_term(j, a, e);
              return s;
            }));
    }
  }

  if (!spec.controls().empty()) {
    const auto cg = grad::control_gradient(bp, spec);
    for (std::size_t k = 0; k < cg.size(); ++k) c.add(fmt::format("ctrl{}", k), cg[k]);
  }

  for (std::size_t i = 0; i < spec.decays().size(); ++i) {
    const DecayChannel& ch = spec.decays()[i];
    c.add(fmt::format("decay{}.op", i), matrix_gradient(d, [&](Eigen::Index p, Eigen::Index q, Complex v) {
            const CMatrix e = superop::dissipator_derivative(ch.op(), unit(d, p, q, v));
            double s = 0.0;
            for (std::size_t j = 0; j < intervals; ++j) s += ch.rate(j) * bp.lindbladian_term(j, e);
            return s;
          }));
    const CMatrix diss = superop::dissipator(ch.op());
    std::vector<double> rates;
    if (ch.rates().size() == 1) {
      double s = 0.0;
      for (std::size_t j = 0; j < intervals; ++j) s += bp.lindbladian_term(j, diss);
      rates.push_back(s);
    } else {
      for (std::size_t j = 0; j < ch.rates().size(); ++j) {
        rates.push_back(j < intervals ? bp.lindbladian_term(j, diss) : 0.0);
      }
    }
    c.add(fmt::format("decay{}.rate", i), rates);
  }

  add_probe(c, scheme.probe(), bp.initial_cotangent());
  return c.take();
}

InputGradient kraus_gradient(const Scheme& scheme, const Objective& objective) {
  const KrausSpec& spec = scheme.kraus();
  const KrausResult r = kraus_apply(spec, scheme.probe());
  const MatrixList cot = objective_cotangent(objective, r.rho, r.drho, scheme.measurement());
  const CMatrix& rho0 = scheme.probe().density();
  const Eigen::Index d = spec.dim();
  Collector c;
  // d f = Re Tr(G dK) with G = 2 rho0 (K^dag Lambda_rho + sum_a dK_a^dag Lambda_a).
  for (std::size_t i = 0; i < spec.ops().size(); ++i) {
    CMatrix inner = spec.ops()[i].adjoint() * cot[0];
    for (std::size_t a = 0; a < spec.num_params(); ++a) inner += spec.derivatives()[a][i].adjoint() * cot[a + 1];
    const CMatrix g = 2.0 * rho0 * inner;
    c.add(fmt::format("K{}", i), matrix_gradient(d, [&](Eigen::Index p, Eigen::Index q, Complex v) {
            return (g(q, p) * v).real();
          }));
  }
  for (std::size_t a = 0; a < spec.num_params(); ++a) {
    for (std::size_t i = 0; i < spec.ops().size(); ++i) {
      const CMatrix g = 2.0 * rho0 * spec.ops()[i].adjoint() * cot[a + 1];
      c.add(fmt::format("dK{}.{}", a, i), matrix_gradient(d, [&](Eigen::Index p, Eigen::Index q, Complex v) {
              return (g(q, p) * v).real();
            }));
    }
  }
  add_probe(c, scheme.probe(), grad::kraus_initial_cotangent(spec, cot));
  return c.take();
}

Objective make_objective(Objective::Kind kind, double sld_eps) {
  if (kind == Objective::Kind::HCRB) throw ValidationError("error analysis supports the QFIM and CFIM objectives");
  Objective o;
  o.kind = kind;
  o.sld.eps = sld_eps;
  o.sld.validate();
  return o;
}

struct Analysis {
  ErrorBudget budget;
  double state_gradient_norm = 0.0;  // ode path
};

Analysis analyse(const Scheme& scheme, Objective::Kind kind, double sld_eps) {
  const Objective obj = make_objective(kind, sld_eps);
  Analysis a;
  ErrorBudget& b = a.budget;
  b.objective = kind;
  b.sld_eps = sld_eps;
  const Trajectory traj = propagate(scheme, EvolveOptions{true, true});
  const CMatrix& rho = traj.rho.back();
  const MatrixList& drho = traj.drho.back();
  b.value = objective_value(obj, rho, drho, scheme.measurement());
  if (!std::isfinite(b.value)) throw NumericalError("objective is not finite at the final time");
  b.truncation_delta = truncation_delta(rho, drho, obj.sld);

  if (!scheme.is_lindblad()) {
    b.path = "kraus";
  } else if (scheme.lindblad().method() == DynMethod::Expm) {
    b.path = "expm";
  } else {
    b.path = "ode";
  }

  if (b.path == "ode") {
    b.max_step = traj.max_step;
    b.step_error = std::pow(traj.max_step, 4);
    const MatrixList cot = objective_cotangent(obj, rho, drho, scheme.measurement());
    double s = 0.0;
    for (const auto& blk : cot) s += blk.squaredNorm();
    a.state_gradient_norm = std::sqrt(s);
    b.gradient_norm = a.state_gradient_norm;
    b.terms.push_back(Term{"state", static_cast<std::size_t>(2 * rho.size() * static_cast<Eigen::Index>(cot.size())),
                           a.state_gradient_norm});
  } else {
    InputGradient g = input_gradient(scheme, obj);
    if (!g.values.allFinite()) {
      for (const auto& t : g.groups) {
        if (!std::isfinite(t.gradient_norm)) {
          throw NumericalError(fmt::format("non-finite gradient with respect to input '{}'", t.input));
        }
      }
    }
    b.gradient_norm = g.values.norm();
    b.terms = std::move(g.groups);
  }
  return a;
}

}  // namespace

double forward_error(const RVector& gradient, double input_error, double step_error) {
  return gradient.norm() * (input_error + step_error);
}

double suggested_precision(const RVector& gradient, double output_error, double step_error) {
  const double g = gradient.norm();
  if (!(g > 0.0)) {
    throw NumericalError("all gradients vanish; no input precision is implied by the output requirement");
  }
  return output_error / g - step_error;
}

InputGradient input_gradient(const Scheme& scheme, const Objective& objective) {
  return scheme.is_lindblad() ? lindblad_gradient(scheme, objective) : kraus_gradient(scheme, objective);
}

ErrorBudget error_evaluation(const Scheme& scheme, double input_error_scaling, Objective::Kind objective,
                             double sld_eps) {
  if (!(input_error_scaling > 0.0) || !std::isfinite(input_error_scaling)) {
    throw ValidationError("input_error_scaling must be positive");
  }
  Analysis a = analyse(scheme, objective, sld_eps);
  ErrorBudget& b = a.budget;
  b.mode = Mode::Evaluation;
  b.input_error_scaling = input_error_scaling;
  b.output_error_scaling = forward_error(RVector::Constant(1, b.gradient_norm), input_error_scaling, b.step_error);
  return b;
}

ErrorBudget error_control(const Scheme& scheme, double output_error_scaling, Objective::Kind objective,
                          double sld_eps) {
  if (!(output_error_scaling > 0.0) || !std::isfinite(output_error_scaling)) {
    throw ValidationError("output_error_scaling must be positive");
  }
  Analysis a = analyse(scheme, objective, sld_eps);
  ErrorBudget& b = a.budget;
  b.mode = Mode::Control;
  b.output_error_scaling = output_error_scaling;
  b.input_error_scaling = suggested_precision(RVector::Constant(1, b.gradient_norm), output_error_scaling, b.step_error);
  const double allowance = output_error_scaling / b.gradient_norm;
  if (b.input_error_scaling < 0.0) {
    b.warnings.push_back(fmt::format(
        "the ODE step error h^4 = {:.3e} exceeds the state error allowance {:.3e}; tighten the ODE tolerances",
        b.step_error, allowance));
    warn(b.warnings.back());
    b.input_error_scaling = 0.0;
  }
  return b;
}

std::string ErrorBudget::table() const {
  std::string out;
  out += fmt::format("error {} ({} path, objective {}, SLD eps {:g})\n",
                     mode == Mode::Evaluation ? "evaluation" : "control", path, to_string(objective), sld_eps);
  out += fmt::format("  {:<22}{:>24}\n", "objective value f", fmt::format("{:.10g}", value));
  out += fmt::format("  {:<22}{:>24}\n", "gradient norm", fmt::format("{:.6e}", gradient_norm));
  if (path == "ode") {
    out += fmt::format("  {:<22}{:>24}\n", "max step h", fmt::format("{:.6e}", max_step));
    out += fmt::format("  {:<22}{:>24}\n", "h^4", fmt::format("{:.6e}", step_error));
  }
  const char* in_label = mode == Mode::Evaluation ? "input error (given)" : "input error (suggested)";
  const char* out_label = mode == Mode::Evaluation ? "output error" : "output error (target)";
  out += fmt::format("  {:<22}{:>24}\n", in_label, fmt::format("{:.6e}", input_error_scaling));
  out += fmt::format("  {:<22}{:>24}\n", out_label, fmt::format("{:.6e}", output_error_scaling));
  const double df = truncation_delta.size() ? truncation_delta.cwiseAbs().maxCoeff() : 0.0;
  out += fmt::format("  {:<22}{:>24}\n", "dF (truncation)", fmt::format("{:.6e}", df));
  out += "  gradient by input:\n";
  for (const auto& t : terms) {
    out += fmt::format("    {:<18}{:>6} entries {:>14}\n", t.input, t.entries, fmt::format("{:.6e}", t.gradient_norm));
  }
  for (const auto& w : warnings) out += "  warning: " + w + "\n";
  return out;
}

}  // namespace qestim::error
