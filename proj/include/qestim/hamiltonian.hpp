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

#include "qestim/types.hpp"

namespace qestim {

/// Free Hamiltonian H0 and its derivatives dH_a with respect to the
/// estimated parameters. Three variants:
///  - static: one Hermitian H0 and a fixed dH list;
///  - time series: one H0 per tspan entry (held constant over each
///    sub-interval from its left endpoint) and a fixed dH list;
///  - parametric: callables H0(u, t) and dH(u, t) bound to a parameter
///    vector u, one dH entry per component of u.
class HamiltonianSpec {
 public:
  enum class Kind { Static, TimeSeries, Parametric };
  using Function = std::function<CMatrix(const RVector& u, double t)>;
  using DerivativeFunction = std::function<MatrixList(const RVector& u, double t)>;

  static HamiltonianSpec constant(CMatrix h0, MatrixList dh);
  static HamiltonianSpec time_series(MatrixList h0, MatrixList dh);
  static HamiltonianSpec parametric(Function h0, DerivativeFunction dh, RVector u, bool time_dependent = false);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t num_params() const { return num_params_; }

  /// True when H0 or dH changes between sub-intervals.
  bool time_dependent() const { return kind_ == Kind::TimeSeries || (kind_ == Kind::Parametric && time_dependent_); }

  /// Number of stored H0 samples (time-series variant only; 1 otherwise).
  std::size_t series_length() const { return kind_ == Kind::TimeSeries ? h0_.size() : 1; }

  /// H0 held over the sub-interval starting at tspan[step] = t.
  CMatrix free(std::size_t step, double t) const;
  MatrixList derivatives(std::size_t step, double t) const;

  /// Bound parameter vector (parametric variant; empty otherwise).
  const RVector& parameters() const { return u_; }

  /// Parametric variant re-bound to new parameter values.
  HamiltonianSpec with_parameters(RVector u) const;

 private:
  HamiltonianSpec() = default;

  Kind kind_ = Kind::Static;
  Eigen::Index dim_ = 0;
  std::size_t num_params_ = 0;
  MatrixList h0_;
  MatrixList dh_;
  std::shared_ptr<const Function> h0_fn_;
  std::shared_ptr<const DerivativeFunction> dh_fn_;
  RVector u_;
  bool time_dependent_ = false;
};

}  // namespace qestim
