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

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "qestim/objective.hpp"

namespace qestim::opt {

enum class ScenarioKind { Control, State, Measurement, Comprehensive };
enum class MeasurementType { Projection, LC, Rotation };
enum class CompType { SM, SC, CM, SCM };

/// Which parts of the scheme are optimized, and their starting values.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Control;
  MeasurementType mtype = MeasurementType::Projection;
  CompType ctype = CompType::SC;

  /// Initial control amplitudes. Default: the scheme's, or zero on every
  /// sub-interval when it has none.
  std::optional<std::vector<std::vector<double>>> ctrl;
  ControlBounds ctrl_bound;
  /// Initial probe. Default: the scheme's probe (leading eigenvector when mixed).
  std::optional<CVector> psi;
  /// Input POVM for LC and Rotation. Default: the scheme's measurement.
  MatrixList povm_basis;
  /// LC: number of combined elements (0: size of the input POVM).
  std::size_t lc_outcomes = 0;

  static Scenario control(ControlBounds bound = {});
  static Scenario state();
  static Scenario measurement(MeasurementType type);
  static Scenario comprehensive(CompType type, MeasurementType mtype = MeasurementType::Projection);

  bool has_control() const;
  bool has_state() const;
  bool has_measurement() const;
  /// ControlOpt, StateOpt, MeasurementOpt or CompOpt.
  std::string name() const;
};

const char* to_string(MeasurementType type);
const char* to_string(CompType type);
MeasurementType measurement_type_from_name(std::string_view name);
CompType comp_type_from_name(std::string_view name);

enum class AlgorithmKind { GRAPE, PSO, DE };

struct Algorithm {
  AlgorithmKind kind = AlgorithmKind::DE;
  std::size_t max_episode = 1000;
  std::uint64_t seed = 1234;
  std::size_t population = 10;
  double inertia = 1.0;
  double cognitive = 2.0;
  double social = 2.0;
  double mutation = 1.0;
  double crossover = 0.5;
  double learning_rate = 0.01;
  /// GRAPE: central differences instead of the adjoint gradient.
  bool finite_difference = false;
  double fd_step = 1e-6;
  /// Stop when the best value moves less than stall_tol (relative) over stall_window iterations.
  std::size_t stall_window = 20;
  double stall_tol = 1e-8;
  Execution exec = Execution::Parallel;

  void validate() const;
};

const char* to_string(AlgorithmKind kind);
AlgorithmKind algorithm_from_name(std::string_view name);

/// The scenario's variables flattened into one real vector:
/// [controls k-major | Re psi, Im psi | measurement variables].
class Problem {
 public:
  Problem(Scheme base, Scenario scenario, Objective objective);

  std::size_t size() const { return static_cast<std::size_t>(initial_.size()); }
  const RVector& initial() const { return initial_; }
  const Scenario& scenario() const { return scenario_; }
  const Objective& objective() const { return objective_; }
  bool maximize() const { return maximize_; }

  /// Restores the constraints in place: clips controls, normalizes the
  /// probe, orthonormalizes projective bases, makes LC columns stochastic.
  void project(RVector& v) const;
  /// Scheme carrying the variables in `v` (assumed projected).
  Scheme apply(const RVector& v) const;
  double value(const RVector& v) const;
  /// d value / d v from the adjoint sweep (controls and probe only).
  RVector gradient(const RVector& v) const;
  RVector finite_difference_gradient(const RVector& v, double h, Execution exec = Execution::Serial) const;
  /// Projected random point; draws come from `rng` in a fixed order.
  RVector random_point(std::mt19937_64& rng) const;
  /// Per-variable velocity limit for PSO.
  double span(std::size_t i) const;

 private:
  Scheme base_;
  Scenario scenario_;
  Objective objective_;
  bool maximize_ = true;
  Eigen::Index d_ = 0;
  std::size_t n_ctrl_ = 0, n_seg_ = 0;
  std::size_t ctrl_off_ = 0, state_off_ = 0, meas_off_ = 0, meas_len_ = 0;
  std::size_t lc_in_ = 0, lc_out_ = 0;
  MatrixList basis_;      // LC / Rotation input elements
  MatrixList generators_;  // Rotation: traceless Gell-Mann matrices
  RVector initial_;
};

struct OptimizationRecord {
  std::string scenario;
  std::string algorithm;
  std::string objective;
  bool maximize = true;
  /// Best value after each iteration; entry 0 is the initial point.
  std::vector<double> history;
  /// Best variables after each iteration (only with savefile).
  std::vector<RVector> variable_history;
  RVector best;
  double best_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string reason;
  double wall_seconds = 0.0;
};

struct OptimizeResult {
  Scheme scheme;
  OptimizationRecord record;
};

/// Runs the design loop. Throws NumericalError when the objective is not
/// finite at the initial point and ValidationError for unsupported
/// combinations (GRAPE on measurement variables or HCRB; measurement
/// scenarios without a CFIM objective).
OptimizeResult optimize(const Scheme& scheme, const Scenario& scenario, const Algorithm& algorithm,
                        const Objective& objective, bool savefile = false);

/// QFIM unless measurement variables are optimized (then CFIM).
Objective default_objective(const Scenario& scenario);

}  // namespace qestim::opt
