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
#include <string>
#include <vector>

#include "qestim/parallel.hpp"
#include "qestim/prior.hpp"
#include "qestim/scheme.hpp"

namespace qestim::adaptive {

enum class Method { FOP, MI };

std::string to_string(Method m);
Method method_from_name(const std::string& name);

/// Grid posterior for a single parameter with a set of tunable offsets.
class AdaptiveStrategy {
 public:
  /// `offsets` defaults to the prior's grid.
  explicit AdaptiveStrategy(PriorSpec prior, std::optional<RVector> offsets = {});

  const PriorSpec& prior() const { return prior_; }
  const RVector& grid() const { return prior_.grid().front(); }
  const RVector& offsets() const { return offsets_; }
  const RVector& posterior() const { return posterior_; }

  double mean() const;
  double sd() const;

  /// p(x) <- p(x) l(x), renormalized by trapezoid quadrature. Throws
  /// NumericalError when the product vanishes on the whole grid.
  void update(const RVector& likelihood);

  void reset();

 private:
  PriorSpec prior_;
  RVector offsets_;
  RVector posterior_;
};

/// Where outcomes come from: sampled at a true value with a seeded RNG, or
/// replayed from a record.
struct OutcomeSource {
  std::optional<double> true_value;
  std::uint64_t seed = 1234;
  std::vector<int> record;

  static OutcomeSource simulated(double true_value, std::uint64_t seed);
  static OutcomeSource replay(std::vector<int> outcomes);
  /// Newline-delimited integers; blank lines are skipped.
  static OutcomeSource from_file(const std::string& path);
};

struct Episode {
  std::size_t episode = 0;  // 1-based
  double offset = 0.0;
  int outcome = 0;
  double mean = 0.0;
  double sd = 0.0;
};

struct AdaptResult {
  std::vector<Episode> log;
  RVector posterior;
  /// CFI-maximizing grid point (FOP only).
  std::optional<double> operating_point;
  std::vector<std::string> warnings;
};

struct AdaptOptions {
  Execution exec = Execution::Parallel;
};

/// Runs up to max_episode measurement rounds. The likelihood of outcome m is
/// Tr(rho(x + u) Pi_m) with rho from the scheme at parameter x + u; FOP
/// offsets are u = x* - mean, MI offsets maximize the expected information
/// gain over strategy.offsets(). A replay record shorter than max_episode
/// ends the loop early.
AdaptResult adapt(const Scheme& scheme, AdaptiveStrategy& strategy, Method method, std::size_t max_episode,
                  const OutcomeSource& source, const AdaptOptions& options = {});

/// Uses the scheme's prior; throws ValidationError when it has none.
AdaptiveStrategy strategy_from_scheme(const Scheme& scheme);

/// Outcome probabilities Tr(rho(x) Pi_m) of the scheme at parameter x.
RVector outcome_probabilities(const Scheme& scheme, double x);

}  // namespace qestim::adaptive
