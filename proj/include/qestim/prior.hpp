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

#include "qestim/types.hpp"

namespace qestim {

/// Trapezoid weights for a 1-D grid (strictly increasing).
RVector trapezoid_weights(const RVector& grid);

/// Prior distribution on a tensor-product grid. `p` and each `dp[a]` are
/// flattened row-major over the grid (the last parameter varies fastest).
/// On construction p is renormalized so its trapezoid quadrature equals 1 and
/// dp is rescaled by the same factor; a warning is emitted when the
/// correction exceeds 1e-3.
class PriorSpec {
 public:
  PriorSpec(std::vector<RVector> grid, RVector p, std::vector<RVector> dp);

  std::size_t num_params() const { return grid_.size(); }
  const std::vector<RVector>& grid() const { return grid_; }
  const RVector& p() const { return p_; }
  const std::vector<RVector>& dp() const { return dp_; }

  /// Number of grid points (product of per-parameter grid sizes).
  std::size_t size() const { return static_cast<std::size_t>(p_.size()); }

  /// Parameter values at flat grid index `flat`.
  RVector point(std::size_t flat) const;

  /// Product trapezoid weights, flattened like p.
  const RVector& weights() const { return weights_; }

  /// Multiplicative factor applied to the user's p during normalization.
  double normalization_factor() const { return factor_; }

 private:
  std::vector<RVector> grid_;
  RVector p_;
  std::vector<RVector> dp_;
  RVector weights_;
  double factor_ = 1.0;
};

}  // namespace qestim
