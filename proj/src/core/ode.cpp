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

#include "qestim/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace qestim::ode {

const double Tsit5::c[7] = {0.0, 0.161, 0.327, 0.9, 0.9800255409045097, 1.0, 1.0};

const double Tsit5::a[7][7] = {
    {0, 0, 0, 0, 0, 0, 0},
    {0.161, 0, 0, 0, 0, 0, 0},
    {-0.008480655492356989, 0.335480655492357, 0, 0, 0, 0, 0},
    {2.897153057105493, -6.359448489975075, 4.3622954328695815, 0, 0, 0, 0},
    {5.325864828439257, -11.748883564062828, 7.4955393428898365, -0.09249506636175525, 0, 0, 0},
    {5.86145544294642, -12.92096931784711, 8.159367898576159, -0.071584973281401, -0.028269050394068383, 0, 0},
    {0.09646076681806523, 0.01, 0.4798896504144996, 1.379008574103742, -3.290069515436081, 2.324710524099774, 0},
};

const double Tsit5::b[7] = {0.09646076681806523, 0.01, 0.4798896504144996, 1.379008574103742,
                            -3.290069515436081, 2.324710524099774, 0.0};

const double Tsit5::btilde[7] = {0.001780011052226, 0.000816434459657, -0.007880878010262, 0.144711007173263,
                                 -0.582357165452555, 0.458082105929187, -1.0 / 66.0};

Tsit5::Tsit5(double atol, double rtol) : atol_(atol), rtol_(rtol) {
  if (!(atol > 0.0) || !(rtol > 0.0)) throw ValidationError("ODE tolerances must be positive");
}

double Tsit5::error_norm(const CVector& err, const CVector& y0, const CVector& y1) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double mag = std::sqrt(std::max(std::norm(y0(i)), std::norm(y1(i))));
    const double scale = atol_ + rtol_ * mag;
    sum += std::norm(err(i)) / (scale * scale);
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

double Tsit5::initial_step(const Rhs& f, double t0, const CVector& y0, const CVector& f0, double span) const {
  // Hairer-Norsett-Wanner starting-step heuristic.
  const CVector zero = CVector::Zero(y0.size());
  const double d0 = error_norm(y0, y0, zero);
  const double d1 = error_norm(f0, y0, zero);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  CVector y1 = y0 + h0 * f0;
  CVector f1(y0.size());
  f(t0 + h0, y1, f1);
  const double d2 = error_norm(f1 - f0, y0, zero) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span});
}

void Tsit5::integrate(const Rhs& f, double t0, double t1, CVector& y, double& step, Stats& stats) const {
  if (!(t1 > t0)) return;
  const Eigen::Index n = y.size();
  std::array<CVector, 7> k;
  for (auto& v : k) v.resize(n);
  f(t0, y, k[0]);

  double h = step;
  if (!(h > 0.0)) h = initial_step(f, t0, y, k[0], t1 - t0);

  double t = t0;
  CVector stage(n), y_new(n), err(n);
  while (t < t1) {
    if (!std::isfinite(h) || h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw NumericalError(fmt::format("ODE step size underflow at t = {:.17g} (h = {:.3e})", t, h));
    }
    const bool last = t + h >= t1;
    const double h_try = last ? t1 - t : h;

    for (int s = 1; s < 7; ++s) {
      stage = y;
      for (int j = 0; j < s; ++j) {
        if (a[s][j] != 0.0) stage.noalias() += (h_try * a[s][j]) * k[j];
      }
      f(t + c[s] * h_try, stage, k[s]);
    }
    // Stage 7 is evaluated at the 5th-order solution (FSAL).
    y_new = stage;
    err.setZero();
    for (int j = 0; j < 7; ++j) err.noalias() += (h_try * btilde[j]) * k[j];

    const double e = error_norm(err, y, y_new);
    if (!std::isfinite(e)) {
      throw NumericalError(fmt::format("non-finite values in ODE solution at t = {:.17g}", t));
    }
    if (e <= 1.0) {
      t = last ? t1 : t + h_try;
      y.swap(y_new);
      k[0].swap(k[6]);
      stats.accepted += 1;
      stats.max_step = std::max(stats.max_step, h_try);
      const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      // A step clipped to land on t1 does not shrink the next proposal.
      h = last ? std::max(h, h_try * factor) : h_try * factor;
    } else {
      stats.rejected += 1;
      h = h_try * std::clamp(0.9 * std::pow(e, -0.2), 0.2, 1.0);
    }
  }
  step = h;
}

}  // namespace qestim::ode
