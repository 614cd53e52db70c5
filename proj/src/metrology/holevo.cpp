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

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qestim/linalg.hpp"
#include "qestim/metrology.hpp"

namespace qestim {

namespace {

void check_inputs(const CMatrix& rho, const MatrixList& drho, const RMatrix& w) {
  if (drho.empty()) throw ValidationError("at least one parameter derivative is required");
  const auto n = static_cast<Eigen::Index>(drho.size());
  if (w.rows() != n || w.cols() != n) {
    throw ValidationError(fmt::format("weight matrix W must be {}x{} (got {}x{})", n, n, w.rows(), w.cols()));
  }
  for (const auto& d : drho) {
    if (d.rows() != rho.rows() || d.cols() != rho.cols()) {
      throw ValidationError("derivatives must match the density-matrix dimension");
    }
  }
}

RMatrix sqrt_symmetric(const RMatrix& w) {
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(0.5 * (w + w.transpose()));
  const RVector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

// Tr(X_a d_b rho) = delta_ab, with X_a = sum_k x[offset + k + K a] lambda_k.
void unbiasedness(const MatrixList& basis, const MatrixList& drho, Eigen::Index offset, sdp::Problem& problem) {
  const auto n = static_cast<Eigen::Index>(drho.size());
  const auto k_count = static_cast<Eigen::Index>(basis.size());
  problem.a = RMatrix::Zero(n * n, problem.c.size());
  problem.b = RVector::Zero(n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const Eigen::Index row = a * n + b;
      for (Eigen::Index k = 0; k < k_count; ++k) {
        problem.a(row, offset + a * k_count + k) = (basis[k] * drho[b]).trace().real();
      }
      problem.b(row) = a == b ? 1.0 : 0.0;
    }
  }
}

CMatrix operator_from(const MatrixList& basis, const RVector& y, Eigen::Index offset) {
  CMatrix x = CMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) x += y(offset + static_cast<Eigen::Index>(k)) * basis[k];
  return x;
}

// Both bounds are covariant under a linear reparametrization d'_a = sum_b T_ab d_b
// with W' = T W T^T. Taking T = F^{-1/2} (SLD QFIM) and dividing W' by its trace
// gives the solver a unit-scale problem.
struct Scaled {
  MatrixList drho;
  RMatrix w;
  double factor = 1.0;
};

Scaled rescale(const CMatrix& rho, const MatrixList& drho, const RMatrix& w) {
  Scaled out{drho, w, 1.0};
  const RMatrix f = qfim_sld(rho, drho);
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(f);
  if (!f.allFinite() || eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff())) {
    return out;
  }
  const RMatrix t =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  const auto n = static_cast<Eigen::Index>(drho.size());
  for (Eigen::Index a = 0; a < n; ++a) {
    out.drho[a].setZero();
    for (Eigen::Index b = 0; b < n; ++b) out.drho[a] += t(a, b) * drho[b];
  }
  out.w = t * w * t.transpose();
  out.factor = out.w.trace();
  if (out.factor > 0.0) out.w /= out.factor;
  else out.factor = 1.0;
  return out;
}

double hcrb_scaled(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options,
                   const sdp::Solver& solver);
double nhb_scaled(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options,
                  const sdp::Solver& solver);

}  // namespace

double hcrb(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options,
            const sdp::Solver& solver) {
  check_inputs(rho, drho, w);
  const Scaled s = rescale(rho, drho, w);
  return s.factor * hcrb_scaled(rho, s.drho, s.w, options, solver);
}

double nhb(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options,
           const sdp::Solver& solver) {
  check_inputs(rho, drho, w);
  const Scaled s = rescale(rho, drho, w);
  return s.factor * nhb_scaled(rho, s.drho, s.w, options, solver);
}

namespace {

double hcrb_scaled(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options,
                   const sdp::Solver& solver) {
  const Eigen::Index d = rho.rows();
  const auto n = static_cast<Eigen::Index>(drho.size());
  const MatrixList basis = linalg::gell_mann_basis(d);
  const auto k_count = static_cast<Eigen::Index>(basis.size());

  CMatrix s(k_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const CMatrix rk = rho * basis[k];
    for (Eigen::Index l = 0; l < k_count; ++l) s(k, l) = (rk * basis[l]).trace();
  }
  s = linalg::hermitian_part(s);
  const CMatrix r = linalg::sqrt_psd(s);

  const Eigen::Index nv = n * (n + 1) / 2;
  const Eigen::Index m = nv + k_count * n;
  const Eigen::Index size = n + k_count;
  sdp::Problem problem;
  problem.c = RVector::Zero(m);
  problem.f0 = CMatrix::Zero(size, size);
  problem.f0.bottomRightCorner(k_count, k_count).setIdentity();
  problem.f.assign(static_cast<std::size_t>(m), CMatrix::Zero(size, size));
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j, ++idx) {
      problem.f[idx](i, j) = 1.0;
      problem.f[idx](j, i) = 1.0;
      problem.c(idx) = i == j ? w(i, i) : 2.0 * w(i, j);
    }
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index k = 0; k < k_count; ++k) {
      CMatrix& f = problem.f[nv + a * k_count + k];
      f.block(n, a, k_count, 1) = r.col(k);
      f.block(a, n, 1, k_count) = r.col(k).adjoint();
    }
  }
  unbiasedness(basis, drho, nv, problem);

  const sdp::Solution sol = sdp::solve_or_throw(problem, options, solver, "HCRB");

  // Exact Holevo objective at the (feasible) operators found by the solver.
  RMatrix x(k_count, n);
  for (Eigen::Index a = 0; a < n; ++a) x.col(a) = sol.y.segment(nv + a * k_count, k_count);
  const CMatrix z = x.transpose().cast<Complex>() * s * x.cast<Complex>();
  const RMatrix sw = sqrt_symmetric(w);
  const RMatrix im = sw * z.imag() * sw;
  return (w * z.real()).trace() + linalg::trace_norm(im.cast<Complex>());
}

double nhb_scaled(const CMatrix& rho, const MatrixList& drho, const RMatrix& w, const sdp::Options& options,
                  const sdp::Solver& solver) {
  const Eigen::Index d = rho.rows();
  const auto n = static_cast<Eigen::Index>(drho.size());
  const MatrixList basis = linalg::gell_mann_basis(d);
  const auto k_count = static_cast<Eigen::Index>(basis.size());

  const Eigen::Index pairs = n * (n + 1) / 2;
  const Eigen::Index x_offset = pairs * k_count;
  const Eigen::Index m = x_offset + n * k_count;
  const Eigen::Index size = n * d + d;
  sdp::Problem problem;
  problem.c = RVector::Zero(m);
  problem.f0 = CMatrix::Zero(size, size);
  problem.f0.bottomRightCorner(d, d).setIdentity();
  problem.f.assign(static_cast<std::size_t>(m), CMatrix::Zero(size, size));
  Eigen::Index pair = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k, ++pair) {
      const double weight = (j == k ? 1.0 : 2.0) * w(j, k);
      for (Eigen::Index q = 0; q < k_count; ++q) {
        CMatrix& f = problem.f[pair * k_count + q];
        f.block(j * d, k * d, d, d) = basis[q];
        f.block(k * d, j * d, d, d) = basis[q];
        problem.c(pair * k_count + q) = weight * (rho * basis[q]).trace().real();
      }
    }
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index q = 0; q < k_count; ++q) {
      CMatrix& f = problem.f[x_offset + a * k_count + q];
      f.block(a * d, n * d, d, d) = basis[q];
      f.block(n * d, a * d, d, d) = basis[q];
    }
  }
  unbiasedness(basis, drho, x_offset, problem);

  const sdp::Solution sol = sdp::solve_or_throw(problem, options, solver, "NHB");

  // Objective at the solver's point, shifted by t I so that L >= X X^dag holds exactly.
  CMatrix big_l = CMatrix::Zero(n * d, n * d);
  double value = 0.0;
  pair = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k, ++pair) {
      const CMatrix block = operator_from(basis, sol.y, pair * k_count);
      big_l.block(j * d, k * d, d, d) = block;
      big_l.block(k * d, j * d, d, d) = block;
      value += (j == k ? 1.0 : 2.0) * w(j, k) * (rho * block).trace().real();
    }
  }
  CMatrix xs(n * d, d);
  for (Eigen::Index a = 0; a < n; ++a) xs.block(a * d, 0, d, d) = operator_from(basis, sol.y, x_offset + a * k_count);
  const double shift = std::max(0.0, -linalg::min_eigenvalue(linalg::hermitian_part(big_l - xs * xs.adjoint())));
  return value + shift * w.trace();
}

}  // namespace

}  // namespace qestim
