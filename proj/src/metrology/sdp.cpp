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

#include "qestim/sdp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

namespace qestim::sdp {

CMatrix Problem::lmi(const RVector& y) const {
  CMatrix out = f0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (y[static_cast<Eigen::Index>(i)] != 0.0) out += y[static_cast<Eigen::Index>(i)] * f[i];
  }
  return out;
}

void Problem::validate() const {
  const auto m = static_cast<Eigen::Index>(f.size());
  if (c.size() != m) throw ValidationError(fmt::format("SDP: c has {} entries for {} variables", c.size(), m));
  if (a.cols() != m || a.rows() != b.size()) throw ValidationError("SDP: equality constraint shapes do not match");
  const Eigen::Index n = f0.rows();
  if (f0.cols() != n) throw ValidationError("SDP: F0 must be square");
  for (const auto& fi : f) {
    if (fi.rows() != n || fi.cols() != n) throw ValidationError("SDP: every F_i must match the size of F0");
  }
}

CMatrix project_psd(const CMatrix& m) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()));
  const RVector lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace {

RVector adjoint_map(const MatrixList& f, const CMatrix& m) {
  RVector out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    // Re Tr(F_i M) for Hermitian F_i
    out[static_cast<Eigen::Index>(i)] = (f[i].conjugate().cwiseProduct(m)).sum().real();
  }
  return out;
}

}  // namespace

Solution AdmmSolver::solve(const Problem& problem, const Options& options) const {
  problem.validate();
  const auto m = static_cast<Eigen::Index>(problem.num_vars());
  const Eigen::Index p = problem.b.size();
  const Eigen::Index n = problem.block_size();

  RMatrix gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      gram(i, j) = gram(j, i) = (problem.f[i].conjugate().cwiseProduct(problem.f[j])).sum().real();
    }
  }

  double penalty = options.penalty;
  RMatrix kkt = RMatrix::Zero(m + p, m + p);
  kkt.bottomLeftCorner(p, m) = problem.a;
  kkt.topRightCorner(m, p) = problem.a.transpose();
  Eigen::FullPivLU<RMatrix> lu;
  auto factor = [&] {
    kkt.topLeftCorner(m, m) = penalty * gram;
    lu.compute(kkt);
  };
  factor();

  Solution sol;
  sol.y = RVector::Zero(m);
  CMatrix s = project_psd(problem.f0);
  CMatrix u = CMatrix::Zero(n, n);  // scaled dual
  RVector nu = RVector::Zero(p);
  RVector rhs(m + p);
  const double scale_n = std::sqrt(static_cast<double>(n));

  for (int it = 1; it <= options.max_iter; ++it) {
    rhs.head(m) = -problem.c - penalty * adjoint_map(problem.f, problem.f0 - s + u);
    rhs.tail(p) = problem.b;
    const RVector sol_kkt = lu.solve(rhs);
    sol.y = sol_kkt.head(m);
    nu = sol_kkt.tail(p);

    const CMatrix fy = problem.lmi(sol.y);
    const CMatrix s_prev = s;
    s = project_psd(fy + u);
    u += fy - s;

    const double r_primal = (fy - s).norm();
    const double r_dual = penalty * adjoint_map(problem.f, s - s_prev).norm();
    const CMatrix z = -penalty * u;
    const double primal = problem.c.dot(sol.y);
    const double dual = -problem.b.dot(nu) - (z.conjugate().cwiseProduct(problem.f0)).sum().real();
    sol.primal_residual = r_primal;
    sol.dual_residual = r_dual;
    sol.iterations = it;
    sol.primal = primal;
    sol.dual = dual;

    const double eps_primal = options.tol * (scale_n + std::max(fy.norm(), s.norm()));
    const double eps_dual = options.tol * (std::sqrt(static_cast<double>(m)) + problem.c.norm());
    const double eps_gap = options.tol * (1.0 + std::abs(primal) + std::abs(dual));
    if (r_primal <= eps_primal && r_dual <= eps_dual && std::abs(primal - dual) <= eps_gap) {
      sol.converged = true;
      break;
    }

    if (it % 10 == 0) {
      const double rp = r_primal / eps_primal;
      const double rd = r_dual / eps_dual;
      if (rp > 10.0 * rd) {
        penalty *= 2.0;
        u *= 0.5;
        factor();
      } else if (rd > 10.0 * rp) {
        penalty *= 0.5;
        u *= 2.0;
        factor();
      }
    }
  }
  sol.z = -penalty * u;
  return sol;
}

const Solver& default_solver() {
  static const AdmmSolver solver;
  return solver;
}

Solution solve_or_throw(const Problem& problem, const Options& options, const Solver& solver, const char* what) {
  Solution sol = solver.solve(problem, options);
  if (!sol.converged) {
    throw ConvergenceError(
        fmt::format("{}: SDP did not converge after {} iterations (primal {:.9g}, dual {:.9g}, gap {:.3e}, "
                    "residuals {:.3e}/{:.3e})",
                    what, sol.iterations, sol.primal, sol.dual, sol.gap(), sol.primal_residual, sol.dual_residual),
        sol.gap());
  }
  return sol;
}

}  // namespace qestim::sdp
