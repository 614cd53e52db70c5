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

#include <memory>

#include "qestim/types.hpp"

namespace qestim::sdp {

/// minimize c'y  subject to  A y = b,  F0 + sum_i y_i F_i >= 0,
/// with real y and Hermitian F_i.
struct Problem {
  RVector c;
  RMatrix a;
  RVector b;
  CMatrix f0;
  MatrixList f;

  std::size_t num_vars() const { return static_cast<std::size_t>(c.size()); }
  Eigen::Index block_size() const { return f0.rows(); }
  /// F0 + sum_i y_i F_i.
  CMatrix lmi(const RVector& y) const;
  void validate() const;
};

struct Options {
  double tol = 1e-6;
  int max_iter = 50000;
  double penalty = 1.0;  // initial ADMM penalty
};

struct Solution {
  RVector y;
  CMatrix z;  // dual matrix (PSD)
  double primal = 0.0;
  double dual = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;

  double gap() const { return primal - dual; }
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double gap) : NumericalError(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

/// Backend interface; implementations return the last iterate even when
/// they stop without converging.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual Solution solve(const Problem& problem, const Options& options) const = 0;
};

/// Dense ADMM on the splitting F(y) = S, S >= 0, with residual balancing.
class AdmmSolver final : public Solver {
 public:
  Solution solve(const Problem& problem, const Options& options) const override;
};

const Solver& default_solver();

/// Solves and throws ConvergenceError (carrying the gap) when the backend
/// did not converge.
Solution solve_or_throw(const Problem& problem, const Options& options, const Solver& solver, const char* what);

/// Projection onto the positive semidefinite cone.
CMatrix project_psd(const CMatrix& m);

}  // namespace qestim::sdp
