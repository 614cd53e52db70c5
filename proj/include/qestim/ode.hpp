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

#include "qestim/types.hpp"

namespace qestim::ode {

struct Stats {
  double max_step = 0.0;  // largest accepted step
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive explicit Runge-Kutta 5(4) pair with Tsitouras coefficients
/// (7 stages, first-same-as-last). Local error is controlled in the RMS norm
/// of |err_i| / (atol + rtol max(|y_i|, |y_new_i|)).
class Tsit5 {
 public:
  using Rhs = std::function<void(double t, const CVector& y, CVector& dydt)>;

  Tsit5(double atol, double rtol);

  /// Advances y from t0 to t1 (t1 > t0). `step` carries the proposed step
  /// size between calls (pass 0 to pick one automatically). Throws
  /// NumericalError on non-finite states or step-size underflow.
  void integrate(const Rhs& f, double t0, double t1, CVector& y, double& step, Stats& stats) const;

  /// Butcher tableau, exposed for order-condition tests.
  static const double c[7];
  static const double a[7][7];
  static const double b[7];
  static const double btilde[7];  // b - bhat

 private:
  double initial_step(const Rhs& f, double t0, const CVector& y0, const CVector& f0, double span) const;
  double error_norm(const CVector& err, const CVector& y0, const CVector& y1) const;

  double atol_;
  double rtol_;
};

}  // namespace qestim::ode
