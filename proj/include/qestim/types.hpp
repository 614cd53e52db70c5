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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qestim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using MatrixList = std::vector<CMatrix>;

inline constexpr Complex kI{0.0, 1.0};

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: a violated invariant, a dimension mismatch, a bad option.
/// The CLI maps it to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation that failed numerically (non-finite values, step-size
/// underflow, solver non-convergence). The CLI maps it to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qestim
