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

#include "qestim/metrology.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qestim/linalg.hpp"

namespace qestim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Eigenbasis {
  RVector lambda;
  CMatrix vectors;
  MatrixList drho;  // derivatives expressed in the eigenbasis
};

Eigenbasis to_eigenbasis(const CMatrix& rho, const MatrixList& drho) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(linalg::hermitian_part(rho));
  Eigenbasis out{eig.eigenvalues(), eig.eigenvectors(), {}};
  out.drho.reserve(drho.size());
  for (const auto& d : drho) out.drho.push_back(out.vectors.adjoint() * d * out.vectors);
  return out;
}

RMatrix sld_qfim_in_basis(const Eigenbasis& eb, double threshold) {
  const auto n = static_cast<Eigen::Index>(eb.drho.size());
  const Eigen::Index d = eb.lambda.size();
  RMatrix f = RMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
          const double s = eb.lambda(i) + eb.lambda(j);
          if (!(s > threshold)) continue;
          acc += 2.0 * (eb.drho[a](i, j) * eb.drho[b](j, i)).real() / s;
        }
      }
      f(a, b) = f(b, a) = acc;
    }
  }
  return f;
}

CMatrix rld_qfim_in_basis(const Eigenbasis& eb, double eps) {
  const auto n = static_cast<Eigen::Index>(eb.drho.size());
  const Eigen::Index d = eb.lambda.size();
  CMatrix f = CMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex acc = 0.0;
      bool infinite = false;
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
          const Complex term = eb.drho[a](i, j) * eb.drho[b](j, i);
          if (eb.lambda(i) > eps) {
            acc += term / eb.lambda(i);
          } else if (std::abs(term) > kProbabilityFloor) {
            infinite = true;
          }
        }
      }
      f(a, b) = infinite ? Complex(kInf, 0.0) : acc;
    }
  }
  return f;
}

void check_state(const CMatrix& rho, const MatrixList& drho) {
  if (rho.rows() != rho.cols() || rho.size() == 0) throw ValidationError("density matrix must be square and non-empty");
  if (drho.empty()) throw ValidationError("at least one parameter derivative is required");
  for (std::size_t a = 0; a < drho.size(); ++a) {
    if (drho[a].rows() != rho.rows() || drho[a].cols() != rho.cols()) {
      throw ValidationError(fmt::format("derivative {} does not match the density-matrix dimension", a));
    }
  }
}

}  // namespace

const char* to_string(LdType type) {
  switch (type) {
    case LdType::SLD: return "SLD";
    case LdType::RLD: return "RLD";
    case LdType::LLD: return "LLD";
  }
  return "?";
}

const char* to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::QFIM: return "QFIM";
    case Quantity::CFIM: return "CFIM";
    case Quantity::HCRB: return "HCRB";
    case Quantity::NHB: return "NHB";
    case Quantity::VTB: return "VTB";
    case Quantity::QVTB: return "QVTB";
  }
  return "?";
}

LdType ld_type_from_name(std::string_view name) {
  if (name == "SLD") return LdType::SLD;
  if (name == "RLD") return LdType::RLD;
  if (name == "LLD") return LdType::LLD;
  throw ValidationError(fmt::format("unknown logarithmic-derivative type '{}' (expected SLD, RLD or LLD)", name));
}

void SldConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError(fmt::format("sld eps must be positive (got {})", eps));
}

CMatrix sld(const CMatrix& rho, const CMatrix& drho, const SldConfig& config) {
  config.validate();
  check_state(rho, {drho});
  const Eigenbasis eb = to_eigenbasis(rho, {drho});
  const Eigen::Index d = eb.lambda.size();
  CMatrix l = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double s = eb.lambda(i) + eb.lambda(j);
      if (s > config.eps) l(i, j) = 2.0 * eb.drho[0](i, j) / s;
    }
  }
  return linalg::hermitian_part(eb.vectors * l * eb.vectors.adjoint());
}

RMatrix qfim_sld(const CMatrix& rho, const MatrixList& drho, const SldConfig& config) {
  config.validate();
  check_state(rho, drho);
  return sld_qfim_in_basis(to_eigenbasis(rho, drho), config.eps);
}

CMatrix qfim(const CMatrix& rho, const MatrixList& drho, LdType type, const SldConfig& config) {
  if (type == LdType::SLD) return qfim_sld(rho, drho, config).cast<Complex>();
  config.validate();
  check_state(rho, drho);
  const CMatrix f = rld_qfim_in_basis(to_eigenbasis(rho, drho), config.eps);
  return type == LdType::RLD ? f : CMatrix(f.transpose());
}

RMatrix truncation_delta(const CMatrix& rho, const MatrixList& drho, const SldConfig& config) {
  config.validate();
  check_state(rho, drho);
  const Eigenbasis eb = to_eigenbasis(rho, drho);
  return sld_qfim_in_basis(eb, config.eps) - sld_qfim_in_basis(eb, 0.0);
}

RMatrix cfim(const CMatrix& rho, const MatrixList& drho, const Measurement& measurement) {
  check_state(rho, drho);
  if (measurement.dim() != rho.rows()) {
    throw ValidationError(fmt::format("POVM dimension {} does not match the state dimension {}", measurement.dim(),
                                      rho.rows()));
  }
  const auto n = static_cast<Eigen::Index>(drho.size());
  RMatrix f = RMatrix::Zero(n, n);
  RVector dp(n);
  for (const auto& pi : measurement.elements()) {
    const double p = (rho.transpose().cwiseProduct(pi)).sum().real();
    for (Eigen::Index a = 0; a < n; ++a) dp(a) = (drho[a].transpose().cwiseProduct(pi)).sum().real();
    if (p < kProbabilityFloor) {
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          if (std::abs(dp(a)) >= kProbabilityFloor && std::abs(dp(b)) >= kProbabilityFloor) f(a, b) = kInf;
        }
      }
      continue;
    }
    f.noalias() += dp * dp.transpose() / p;
  }
  return f;
}

double weighted_inverse_trace(const RMatrix& f, const RMatrix& w) {
  if (f.rows() != w.rows() || f.cols() != w.cols()) throw ValidationError("weight matrix shape does not match the QFIM");
  if (!f.allFinite()) return 0.0;
  const Eigen::LDLT<RMatrix> ldlt(f);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return (w * ldlt.solve(RMatrix::Identity(f.rows(), f.cols()))).trace();
}

namespace {

std::vector<std::size_t> selected_times(const Trajectory& traj, bool final_only) {
  if (traj.size() == 0) throw ValidationError("trajectory is empty");
  std::vector<std::size_t> idx;
  if (final_only) {
    idx.push_back(traj.size() - 1);
  } else {
    for (std::size_t j = 0; j < traj.size(); ++j) idx.push_back(j);
  }
  return idx;
}

BoundResult series(Quantity quantity, const Trajectory& traj, const BoundOptions& options,
                   const std::function<CMatrix(const CMatrix&, const MatrixList&)>& kernel) {
  if (traj.num_params() == 0) throw ValidationError("trajectory carries no parameter derivatives");
  const auto idx = selected_times(traj, options.final_only);
  BoundResult out;
  out.quantity = quantity;
  out.values.resize(idx.size());
  for (std::size_t k : idx) out.times.push_back(traj.times[k]);
  for_each_index(idx.size(), options.exec, [&](std::size_t k) {
    out.values[k] = kernel(traj.rho[idx[k]], traj.drho[idx[k]]);
  });
  return out;
}

void check_weight(const RMatrix& w, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  if (w.rows() != m || w.cols() != m) {
    throw ValidationError(fmt::format("weight matrix W must be {}x{} (got {}x{})", n, n, w.rows(), w.cols()));
  }
  if (!w.allFinite() || (w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("weight matrix W must be real symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<RMatrix> eig(w, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12) throw ValidationError("weight matrix W must be positive semidefinite");
}

}  // namespace

BoundResult qfim(const Trajectory& traj, const BoundOptions& options) {
  options.sld.validate();
  BoundResult out = series(Quantity::QFIM, traj, options, [&](const CMatrix& rho, const MatrixList& drho) {
    return qfim(rho, drho, options.ld_type, options.sld);
  });
  out.ld_type = options.ld_type;
  if (options.ld_type == LdType::SLD) {
    const auto idx = selected_times(traj, options.final_only);
    out.truncation.resize(idx.size());
    for_each_index(idx.size(), options.exec, [&](std::size_t k) {
      out.truncation[k] = truncation_delta(traj.rho[idx[k]], traj.drho[idx[k]], options.sld);
    });
  }
  return out;
}

BoundResult cfim(const Trajectory& traj, const Measurement& measurement, const BoundOptions& options) {
  return series(Quantity::CFIM, traj, options, [&](const CMatrix& rho, const MatrixList& drho) {
    return CMatrix(cfim(rho, drho, measurement).cast<Complex>());
  });
}

namespace {

EvolveOptions evolve_options(const BoundOptions& options) { return EvolveOptions{true, options.final_only}; }

}  // namespace

BoundResult qfim(const Scheme& scheme, const BoundOptions& options) {
  return qfim(propagate(scheme, evolve_options(options)), options);
}

BoundResult cfim(const Scheme& scheme, const BoundOptions& options) {
  return cfim(propagate(scheme, evolve_options(options)), scheme.measurement(), options);
}

BoundResult hcrb(const Scheme& scheme, const RMatrix& w, const BoundOptions& options) {
  check_weight(w, scheme.num_params());
  const sdp::Solver& solver = options.solver ? *options.solver : sdp::default_solver();
  BoundResult out = series(Quantity::HCRB, propagate(scheme, evolve_options(options)), options,
                           [&](const CMatrix& rho, const MatrixList& drho) {
                             return CMatrix::Constant(1, 1, hcrb(rho, drho, w, options.sdp, solver));
                           });
  out.weight = w;
  return out;
}

BoundResult nhb(const Scheme& scheme, const RMatrix& w, const BoundOptions& options) {
  check_weight(w, scheme.num_params());
  const sdp::Solver& solver = options.solver ? *options.solver : sdp::default_solver();
  BoundResult out = series(Quantity::NHB, propagate(scheme, evolve_options(options)), options,
                           [&](const CMatrix& rho, const MatrixList& drho) {
                             return CMatrix::Constant(1, 1, nhb(rho, drho, w, options.sdp, solver));
                           });
  out.weight = w;
  return out;
}

RMatrix prior_information(const PriorSpec& prior) {
  const auto n = static_cast<Eigen::Index>(prior.num_params());
  RMatrix ip = RMatrix::Zero(n, n);
  RVector dp(n);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double p = prior.p()(k);
    for (Eigen::Index a = 0; a < n; ++a) dp(a) = prior.dp()[static_cast<std::size_t>(a)](k);
    if (p <= 0.0) {
      if (dp.cwiseAbs().maxCoeff() > 0.0) {
        throw ValidationError(fmt::format("prior p vanishes at grid point {} where dp does not", i));
      }
      continue;
    }
    ip.noalias() += prior.weights()(k) * dp * dp.transpose() / p;
  }
  return ip;
}

namespace {

RMatrix van_trees(const Scheme& scheme, const BoundOptions& options, bool quantum) {
  if (!scheme.prior()) throw ValidationError("Van Trees bounds require a prior (x, p, dp) on the scheme");
  const PriorSpec& prior = *scheme.prior();
  const auto n = static_cast<Eigen::Index>(scheme.num_params());
  std::vector<RMatrix> fisher(prior.size());
  for_each_index(prior.size(), options.exec, [&](std::size_t i) {
    const Scheme local = scheme.at_parameters(prior.point(i));
    const Trajectory traj = propagate(local, EvolveOptions{true, true});
    const RMatrix f = quantum ? qfim_sld(traj.rho.back(), traj.drho.back(), options.sld)
                              : cfim(traj.rho.back(), traj.drho.back(), local.measurement());
    if (!f.allFinite()) {
      throw NumericalError(fmt::format("{} is not finite at prior grid point {}", quantum ? "QFIM" : "CFIM", i));
    }
    fisher[i] = f;
  });
  RMatrix total = prior_information(prior);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    total += prior.weights()(k) * prior.p()(k) * fisher[i];
  }
  const Eigen::LDLT<RMatrix> ldlt(total);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0) {
    throw NumericalError("averaged Fisher information is singular; the Van Trees bound is unbounded");
  }
  return ldlt.solve(RMatrix::Identity(n, n));
}

}  // namespace

RMatrix vtb(const Scheme& scheme, const BoundOptions& options) { return van_trees(scheme, options, false); }

RMatrix qvtb(const Scheme& scheme, const BoundOptions& options) {
  options.sld.validate();
  return van_trees(scheme, options, true);
}

}  // namespace qestim
