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

#include "qestim/control.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qestim/linalg.hpp"

namespace qestim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate_shape(const ControlShape& shape) {
  std::visit(overloaded{
                 [](const shape::Saw& s) {
                   if (s.n <= 0) throw ValidationError("Saw control requires n > 0");
                 },
                 [](const shape::Triangle& s) {
                   if (s.n <= 0) throw ValidationError("Triangle control requires n > 0");
                 },
                 [](const shape::Gaussian& s) {
                   if (!(s.sigma > 0.0)) throw ValidationError("Gaussian control requires sigma > 0");
                 },
                 [](const shape::GaussianEdge& s) {
                   if (!(s.sigma > 0.0)) throw ValidationError("GaussianEdge control requires sigma > 0");
                 },
                 [](const auto&) {},
             },
             shape);
}

double control_shape_eval(const ControlShape& shape, double t, double end_time) {
  validate_shape(shape);
  if (!(end_time > 0.0)) throw ValidationError("control shape end time must be positive");
  return std::visit(
      overloaded{
          [](const shape::Zero&) { return 0.0; },
          [t](const shape::Linear& s) { return s.k * t + s.c0; },
          [t](const shape::Sine& s) { return s.A * std::sin(s.omega * t + s.phi); },
          [t, end_time](const shape::Saw& s) {
            const double x = s.n * t / end_time;
            return 2.0 * s.k * (x - std::floor(0.5 + x));
          },
          [t, end_time](const shape::Triangle& s) {
            const double x = s.n * t / end_time;
            return 2.0 * std::abs(2.0 * s.k * (x - std::floor(0.5 + x))) - 1.0;
          },
          [t](const shape::Gaussian& s) {
            return s.A * std::exp(-(t - s.mu) * (t - s.mu) / (2.0 * s.sigma));
          },
          [t, end_time](const shape::GaussianEdge& s) {
            return s.A - s.A * std::exp(-t * t / s.sigma) -
                   s.A * std::exp(-(t - end_time) * (t - end_time) / s.sigma);
          },
      },
      shape);
}

std::vector<double> sample_control_shape(const ControlShape& shape, const std::vector<double>& tspan) {
  if (tspan.size() < 2) throw ValidationError("tspan needs at least two entries to sample a control shape");
  const double end = tspan.back();
  std::vector<double> out;
  out.reserve(tspan.size() - 1);
  for (std::size_t j = 0; j + 1 < tspan.size(); ++j) {
    out.push_back(control_shape_eval(shape, 0.5 * (tspan[j] + tspan[j + 1]), end));
  }
  return out;
}

ControlSpec::ControlSpec(MatrixList hc, std::vector<std::vector<double>> amplitudes, ControlBounds bounds)
    : hc_(std::move(hc)), amplitudes_(std::move(amplitudes)), bounds_(bounds) {
  if (bounds_.lo > bounds_.hi) {
    throw ValidationError(fmt::format("control bounds must satisfy lo <= hi (got [{}, {}])", bounds_.lo, bounds_.hi));
  }
  for (std::size_t k = 0; k < hc_.size(); ++k) {
    hc_[k] = linalg::require_hermitian(hc_[k], fmt::format("control Hamiltonian Hc[{}]", k));
  }
  if (!amplitudes_.empty() && amplitudes_.size() != hc_.size()) {
    throw ValidationError(fmt::format("got {} control amplitude sequences for {} control Hamiltonians",
                                      amplitudes_.size(), hc_.size()));
  }
  for (const auto& seq : amplitudes_) {
    if (seq.size() != amplitudes_.front().size()) {
      throw ValidationError("all control amplitude sequences must have the same length");
    }
    for (double a : seq) {
      if (!std::isfinite(a)) throw ValidationError("control amplitudes must be finite");
    }
  }
}

ControlSpec ControlSpec::from_shape(MatrixList hc, const ControlShape& shape, const std::vector<double>& tspan,
                                   ControlBounds bounds) {
  const auto samples = sample_control_shape(shape, tspan);
  std::vector<std::vector<double>> amps(hc.size(), samples);
  return ControlSpec(std::move(hc), std::move(amps), bounds);
}

void ControlSpec::validate(Eigen::Index dim, std::size_t intervals) const {
  for (std::size_t k = 0; k < hc_.size(); ++k) {
    if (hc_[k].rows() != dim) {
      throw ValidationError(
          fmt::format("control Hamiltonian Hc[{}] has dimension {} but the system has {}", k, hc_[k].rows(), dim));
    }
  }
  const std::size_t m = segments();
  if (m != 0 && (intervals % m) != 0) {
    throw ValidationError(fmt::format(
        "control amplitude length {} does not divide the number of tspan sub-intervals {}", m, intervals));
  }
}

double ControlSpec::amplitude(std::size_t k, std::size_t interval, std::size_t intervals) const {
  const std::size_t m = segments();
  if (m == 0) return 0.0;
  const std::size_t hold = intervals / m;
  return amplitudes_[k][interval / hold];
}

ControlSpec ControlSpec::with_amplitudes(std::vector<std::vector<double>> amplitudes) const {
  ControlSpec out = *this;
  if (!amplitudes.empty() && amplitudes.size() != hc_.size()) {
    throw ValidationError("amplitude sequence count does not match the number of control Hamiltonians");
  }
  out.amplitudes_ = std::move(amplitudes);
  return out;
}

}  // namespace qestim
