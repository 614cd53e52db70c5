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

#include "qestim/hamiltonian.hpp"

#include <fmt/format.h>

#include "qestim/linalg.hpp"

namespace qestim {

namespace {

MatrixList checked_derivatives(MatrixList dh, Eigen::Index dim) {
  for (std::size_t a = 0; a < dh.size(); ++a) {
    dh[a] = linalg::require_hermitian(dh[a], fmt::format("dH[{}]", a));
    if (dh[a].rows() != dim) {
      throw ValidationError(fmt::format("dH[{}] has dimension {} but H0 has {}", a, dh[a].rows(), dim));
    }
  }
  return dh;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::constant(CMatrix h0, MatrixList dh) {
  HamiltonianSpec spec;
  spec.kind_ = Kind::Static;
  spec.h0_.push_back(linalg::require_hermitian(h0, "H0"));
  spec.dim_ = spec.h0_.front().rows();
  spec.dh_ = checked_derivatives(std::move(dh), spec.dim_);
  spec.num_params_ = spec.dh_.size();
  if (spec.num_params_ == 0) throw ValidationError("dH must contain at least one matrix");
  return spec;
}

HamiltonianSpec HamiltonianSpec::time_series(MatrixList h0, MatrixList dh) {
  if (h0.empty()) throw ValidationError("time-series H0 must not be empty");
  HamiltonianSpec spec;
  spec.kind_ = Kind::TimeSeries;
  spec.dim_ = h0.front().rows();
  for (std::size_t j = 0; j < h0.size(); ++j) {
    spec.h0_.push_back(linalg::require_hermitian(h0[j], fmt::format("H0[{}]", j)));
    if (spec.h0_.back().rows() != spec.dim_) {
      throw ValidationError(fmt::format("H0[{}] has dimension {} but H0[0] has {}", j, h0[j].rows(), spec.dim_));
    }
  }
  spec.dh_ = checked_derivatives(std::move(dh), spec.dim_);
  spec.num_params_ = spec.dh_.size();
  if (spec.num_params_ == 0) throw ValidationError("dH must contain at least one matrix");
  return spec;
}

HamiltonianSpec HamiltonianSpec::parametric(Function h0, DerivativeFunction dh, RVector u, bool time_dependent) {
  if (!h0 || !dh) throw ValidationError("parametric Hamiltonian requires both H0(u) and dH(u) callables");
  HamiltonianSpec spec;
  spec.kind_ = Kind::Parametric;
  spec.h0_fn_ = std::make_shared<const Function>(std::move(h0));
  spec.dh_fn_ = std::make_shared<const DerivativeFunction>(std::move(dh));
  spec.u_ = std::move(u);
  spec.time_dependent_ = time_dependent;
  const CMatrix sample = linalg::require_hermitian((*spec.h0_fn_)(spec.u_, 0.0), "H0(u)");
  spec.dim_ = sample.rows();
  const MatrixList d = checked_derivatives((*spec.dh_fn_)(spec.u_, 0.0), spec.dim_);
  spec.num_params_ = d.size();
  if (spec.num_params_ == 0) throw ValidationError("dH(u) must return at least one matrix");
  if (static_cast<std::size_t>(spec.u_.size()) != spec.num_params_) {
    throw ValidationError(fmt::format("parametric Hamiltonian has {} parameters u but dH(u) returns {} matrices",
                                      spec.u_.size(), spec.num_params_));
  }
  return spec;
}

CMatrix HamiltonianSpec::free(std::size_t step, double t) const {
  switch (kind_) {
    case Kind::Static: return h0_.front();
    case Kind::TimeSeries: return h0_.at(step);
    case Kind::Parametric: {
      CMatrix h = linalg::require_hermitian((*h0_fn_)(u_, time_dependent_ ? t : 0.0), "H0(u)");
      if (h.rows() != dim_) throw ValidationError("H0(u) changed dimension between evaluations");
      return h;
    }
  }
  return {};
}

MatrixList HamiltonianSpec::derivatives(std::size_t, double t) const {
  if (kind_ != Kind::Parametric) return dh_;
  MatrixList d = checked_derivatives((*dh_fn_)(u_, time_dependent_ ? t : 0.0), dim_);
  if (d.size() != num_params_) throw ValidationError("dH(u) changed length between evaluations");
  return d;
}

HamiltonianSpec HamiltonianSpec::with_parameters(RVector u) const {
  if (kind_ != Kind::Parametric) {
    throw ValidationError("only parametric Hamiltonians can be re-bound to new parameter values");
  }
  if (static_cast<std::size_t>(u.size()) != num_params_) {
    throw ValidationError(fmt::format("expected {} parameter values, got {}", num_params_, u.size()));
  }
  HamiltonianSpec out = *this;
  out.u_ = std::move(u);
  return out;
}

}  // namespace qestim
