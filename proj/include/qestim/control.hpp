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

#include <cmath>
#include <limits>
#include <optional>
#include <variant>

#include "qestim/types.hpp"

namespace qestim {

// Catalog control shapes. T is the end time of tspan.
namespace shape {
struct Zero {};
struct Linear { double k = 0.0, c0 = 0.0; };                 // k t + c0
struct Sine { double A = 0.0, omega = 0.0, phi = 0.0; };     // A sin(omega t + phi)
struct Saw { double k = 0.0; int n = 1; };                   // 2k(nt/T - floor(1/2 + nt/T))
struct Triangle { double k = 0.0; int n = 1; };              // 2|2k(nt/T - floor(1/2 + nt/T))| - 1
struct Gaussian { double A = 0.0, mu = 0.0, sigma = 1.0; };  // A exp(-(t-mu)^2 / (2 sigma))
struct GaussianEdge { double A = 0.0, sigma = 1.0; };        // A - A e^{-t^2/sigma} - A e^{-(t-T)^2/sigma}
}  // namespace shape

using ControlShape =
    std::variant<shape::Zero, shape::Linear, shape::Sine, shape::Saw, shape::Triangle, shape::Gaussian,
                 shape::GaussianEdge>;

/// Throws ValidationError when sigma <= 0 or n <= 0.
void validate_shape(const ControlShape& shape);

/// Exact evaluation of the catalog formula at time t (0 <= t <= T, T > 0).
double control_shape_eval(const ControlShape& shape, double t, double end_time);

/// Samples `shape` at the midpoints of consecutive tspan entries, producing
/// one amplitude per sub-interval.
std::vector<double> sample_control_shape(const ControlShape& shape, const std::vector<double>& tspan);

struct ControlBounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double clip(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

/// Control Hamiltonians with piecewise-constant amplitudes. Amplitude
/// sequences of length m must divide the number of tspan sub-intervals; each
/// amplitude is held over (len(tspan)-1)/m consecutive sub-intervals.
class ControlSpec {
 public:
  ControlSpec() = default;

  /// Explicit amplitudes, one sequence per control Hamiltonian. An empty
  /// `amplitudes` means zero control on every channel.
  ControlSpec(MatrixList hc, std::vector<std::vector<double>> amplitudes, ControlBounds bounds = {});

  /// Same shape sampled for every control Hamiltonian.
  static ControlSpec from_shape(MatrixList hc, const ControlShape& shape, const std::vector<double>& tspan,
                                ControlBounds bounds = {});

  const MatrixList& hamiltonians() const { return hc_; }
  const std::vector<std::vector<double>>& amplitudes() const { return amplitudes_; }
  const ControlBounds& bounds() const { return bounds_; }
  std::size_t count() const { return hc_.size(); }
  bool empty() const { return hc_.empty(); }

  /// Length of each amplitude sequence (0 when no amplitudes are stored).
  std::size_t segments() const { return amplitudes_.empty() ? 0 : amplitudes_.front().size(); }

  /// Validates the dimensions against d and the sub-interval count.
  void validate(Eigen::Index dim, std::size_t intervals) const;

  /// Amplitude of control k over sub-interval `interval` (0 when no amplitudes).
  double amplitude(std::size_t k, std::size_t interval, std::size_t intervals) const;

  /// Copy with new amplitudes (same Hc and bounds).
  ControlSpec with_amplitudes(std::vector<std::vector<double>> amplitudes) const;

 private:
  MatrixList hc_;
  std::vector<std::vector<double>> amplitudes_;
  ControlBounds bounds_;
};

}  // namespace qestim
