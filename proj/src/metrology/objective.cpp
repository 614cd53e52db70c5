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

#include "qestim/objective.hpp"

#include <cmath>

#include <fmt/format.h>

namespace qestim {

const char* to_string(Objective::Kind kind) {
  switch (kind) {
    case Objective::Kind::QFIM: return "QFIM";
    case Objective::Kind::CFIM: return "CFIM";
    case Objective::Kind::HCRB: return "HCRB";
  }
  return "?";
}

Objective::Kind objective_kind_from_name(std::string_view name) {
  if (name == "QFIM" || name == "qfim" || name == "QFI" || name == "qfi") return Objective::Kind::QFIM;
  if (name == "CFIM" || name == "cfim" || name == "CFI" || name == "cfi") return Objective::Kind::CFIM;
  if (name == "HCRB" || name == "hcrb") return Objective::Kind::HCRB;
  throw ValidationError(fmt::format("unknown objective '{}' (expected QFIM, CFIM or HCRB)", name));
}

RMatrix Objective::weight_for(std::size_t n) const {
  const auto size = static_cast<Eigen::Index>(n);
  return weight.size() == 0 ? RMatrix(RMatrix::Identity(size, size)) : weight;
}

void Objective::validate(std::size_t n) const {
  sld.validate();
  if (weight.size() == 0) return;
  const auto size = static_cast<Eigen::Index>(n);
  if (weight.rows() != size || weight.cols() != size) {
    throw ValidationError(fmt::format("objective weight must be {}x{} (got {}x{})", n, n, weight.rows(), weight.cols()));
  }
  if ((weight - weight.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      Eigen::SelfAdjointEigenSolver<RMatrix>(weight).eigenvalues().minCoeff() < -1e-12) {
    throw ValidationError("objective weight must be symmetric positive semidefinite");
  }
}

double objective_value(const Objective& objective, const CMatrix& rho, const MatrixList& drho,
                       const Measurement& measurement) {
  const std::size_t n = drho.size();
  const RMatrix w = objective.weight_for(n);
  switch (objective.kind) {
    case Objective::Kind::HCRB: return hcrb(rho, drho, w, objective.sdp);
    case Objective::Kind::QFIM:
    case Objective::Kind::CFIM: {
      const RMatrix f = objective.kind == Objective::Kind::QFIM ? qfim_sld(rho, drho, objective.sld)
                                                                : cfim(rho, drho, measurement);
      return n == 1 ? f(0, 0) : weighted_inverse_trace(f, w);
    }
  }
  return 0.0;
}

double objective_value(const Objective& objective, const Scheme& scheme) {
  const Trajectory traj = propagate(scheme, EvolveOptions{true, true});
  return objective_value(objective, traj.rho.back(), traj.drho.back(), scheme.measurement());
}

namespace {

// Cotangent of each Fisher matrix entry, contracted with C: df = sum_ab C_ab dF_ab.
MatrixList qfim_cotangent(const CMatrix& rho, const MatrixList& drho, const RMatrix& c, const SldConfig& cfg) {
  const std::size_t n = drho.size();
  MatrixList l(n);
  for (std::size_t a = 0; a < n; ++a) l[a] = sld(rho, drho[a], cfg);
  MatrixList out(n + 1, CMatrix::Zero(rho.rows(), rho.cols()));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double cab = c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (cab == 0.0) continue;
      // F_ab = Tr(rho {L_a, L_b}) / 2 with rho L + L rho = 2 d rho.
      out[0] -= 0.5 * cab * (l[a] * l[b] + l[b] * l[a]);
      out[a + 1] += cab * l[b];
      out[b + 1] += cab * l[a];
    }
  }
  return out;
}

MatrixList cfim_cotangent(const CMatrix& rho, const MatrixList& drho, const RMatrix& c, const Measurement& m) {
  const auto n = static_cast<Eigen::Index>(drho.size());
  MatrixList out(drho.size() + 1, CMatrix::Zero(rho.rows(), rho.cols()));
  RVector dp(n);
  for (const auto& pi : m.elements()) {
    const double p = (rho * pi).trace().real();
    if (p < kProbabilityFloor) continue;
    for (Eigen::Index a = 0; a < n; ++a) dp(a) = (drho[a] * pi).trace().real();
    // F_ab += dp_a dp_b / p.
    out[0] -= (dp.dot(c * dp) / (p * p)) * pi;
    const RVector g = (c + c.transpose()) * dp / p;
    for (Eigen::Index a = 0; a < n; ++a) out[a + 1] += g(a) * pi;
  }
  return out;
}

}  // namespace

MatrixList objective_cotangent(const Objective& objective, const CMatrix& rho, const MatrixList& drho,
                               const Measurement& measurement) {
  const std::size_t n = drho.size();
  const auto size = static_cast<Eigen::Index>(n);
  if (objective.kind == Objective::Kind::HCRB) {
    throw ValidationError("the HCRB objective has no gradient; use PSO or DE");
  }
  const bool quantum = objective.kind == Objective::Kind::QFIM;
  const RMatrix f = quantum ? qfim_sld(rho, drho, objective.sld) : cfim(rho, drho, measurement);
  RMatrix c;
  if (n == 1) {
    c = RMatrix::Ones(1, 1);
  } else {
    const Eigen::LDLT<RMatrix> ldlt(f);
    if (!f.allFinite() || ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw NumericalError("Fisher information matrix is singular; Tr(W F^-1) has no gradient");
    }
    const RMatrix finv = ldlt.solve(RMatrix::Identity(size, size));
    // d Tr(W F^-1) = -Tr(F^-1 W F^-1 dF).
    c = -finv * objective.weight_for(n) * finv;
  }
  return quantum ? qfim_cotangent(rho, drho, c, objective.sld) : cfim_cotangent(rho, drho, c, measurement);
}

}  // namespace qestim
