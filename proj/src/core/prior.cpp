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

#include "qestim/prior.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qestim/log.hpp"

namespace qestim {

RVector trapezoid_weights(const RVector& grid) {
  const Eigen::Index n = grid.size();
  RVector w = RVector::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = grid(i + 1) - grid(i);
    w(i) += 0.5 * h;
    w(i + 1) += 0.5 * h;
  }
  return w;
}

PriorSpec::PriorSpec(std::vector<RVector> grid, RVector p, std::vector<RVector> dp)
    : grid_(std::move(grid)), p_(std::move(p)), dp_(std::move(dp)) {
  if (grid_.empty()) throw ValidationError("prior grid x must contain at least one parameter axis");
  std::size_t total = 1;
  for (std::size_t a = 0; a < grid_.size(); ++a) {
    const RVector& g = grid_[a];
    if (g.size() < 2) throw ValidationError(fmt::format("prior grid x[{}] needs at least two points", a));
    for (Eigen::Index i = 0; i + 1 < g.size(); ++i) {
      if (!(g(i + 1) > g(i))) throw ValidationError(fmt::format("prior grid x[{}] must be strictly increasing", a));
    }
    total *= static_cast<std::size_t>(g.size());
  }
  if (static_cast<std::size_t>(p_.size()) != total) {
    throw ValidationError(fmt::format("prior p has {} values but the grid has {} points", p_.size(), total));
  }
  if (dp_.size() != grid_.size()) {
    throw ValidationError(
        fmt::format("prior dp must have one array per parameter ({} given, {} expected)", dp_.size(), grid_.size()));
  }
  for (std::size_t a = 0; a < dp_.size(); ++a) {
    if (static_cast<std::size_t>(dp_[a].size()) != total) {
      throw ValidationError(fmt::format("prior dp[{}] has {} values but the grid has {} points", a, dp_[a].size(), total));
    }
    if (!dp_[a].allFinite()) throw ValidationError(fmt::format("prior dp[{}] contains non-finite values", a));
  }
  if (!p_.allFinite() || (p_.array() < 0.0).any()) {
    throw ValidationError("prior p must be finite and nonnegative everywhere");
  }

  weights_ = RVector::Ones(static_cast<Eigen::Index>(total));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    for (std::size_t a = grid_.size(); a-- > 0;) {
      const auto n = static_cast<std::size_t>(grid_[a].size());
      w *= trapezoid_weights(grid_[a])(static_cast<Eigen::Index>(rem % n));
      rem /= n;
    }
    weights_(static_cast<Eigen::Index>(flat)) = w;
  }

  const double mass = weights_.dot(p_);
  if (!(mass > 0.0)) throw ValidationError("prior p integrates to zero on its grid");
  factor_ = 1.0 / mass;
  if (std::abs(mass - 1.0) > 1e-3) {
    warn(fmt::format("prior p integrates to {:.6g} on its grid; renormalized (dp rescaled by the same factor)", mass));
  }
  p_ *= factor_;
  for (auto& d : dp_) d *= factor_;
}

RVector PriorSpec::point(std::size_t flat) const {
  RVector out(static_cast<Eigen::Index>(grid_.size()));
  std::size_t rem = flat;
  for (std::size_t a = grid_.size(); a-- > 0;) {
    const auto n = static_cast<std::size_t>(grid_[a].size());
    out(static_cast<Eigen::Index>(a)) = grid_[a](static_cast<Eigen::Index>(rem % n));
    rem /= n;
  }
  return out;
}

}  // namespace qestim
