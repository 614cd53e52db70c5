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

#include "qestim/linalg.hpp"

#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qestim::linalg {

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix require_hermitian(const CMatrix& a, std::string_view what, double tol) {
  if (a.rows() != a.cols()) {
    throw ValidationError(fmt::format("{} must be square (got {}x{})", what, a.rows(), a.cols()));
  }
  if (!all_finite(a)) throw ValidationError(fmt::format("{} contains non-finite entries", what));
  const double defect = hermiticity_defect(a);
  if (defect >= tol) {
    throw ValidationError(
        fmt::format("{} is not Hermitian (max |A - A^dagger| = {:.3e}, tolerance {:.1e})", what, defect, tol));
  }
  return hermitian_part(a);
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

CMatrix kron(const CMatrix& a, const CMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

CVector vec(const CMatrix& a) { return Eigen::Map<const CVector>(a.data(), a.size()); }

CMatrix unvec(const Eigen::Ref<const CVector>& v, Eigen::Index dim) {
  CMatrix out(dim, dim);
  Eigen::Map<CVector>(out.data(), out.size()) = v;
  return out;
}

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMatrix expm(const CMatrix& a) { return a.exp(); }

CMatrix sqrt_psd(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  RVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

MatrixList gell_mann_basis(Eigen::Index dim) {
  MatrixList basis;
  basis.reserve(static_cast<std::size_t>(dim * dim));
  basis.push_back(CMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      CMatrix s = CMatrix::Zero(dim, dim);
      s(j, k) = inv_sqrt2;
      s(k, j) = inv_sqrt2;
      basis.push_back(std::move(s));
    }
  }
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      CMatrix s = CMatrix::Zero(dim, dim);
      s(j, k) = Complex(0.0, -inv_sqrt2);
      s(k, j) = Complex(0.0, inv_sqrt2);
      basis.push_back(std::move(s));
    }
  }
  for (Eigen::Index l = 1; l < dim; ++l) {
    CMatrix s = CMatrix::Zero(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) s(j, j) = norm;
    s(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(std::move(s));
  }
  return basis;
}

bool is_identity(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - CMatrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

}  // namespace qestim::linalg
