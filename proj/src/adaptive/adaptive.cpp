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

#include "qestim/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "qestim/log.hpp"
#include "qestim/metrology.hpp"

namespace qestim::adaptive {

std::string to_string(Method m) { return m == Method::FOP ? "FOP" : "MI"; }

Method method_from_name(const std::string& name) {
  if (name == "FOP") return Method::FOP;
  if (name == "MI") return Method::MI;
  throw ValidationError(fmt::format("unknown adaptive method '{}' (expected FOP or MI)", name));
}

AdaptiveStrategy::AdaptiveStrategy(PriorSpec prior, std::optional<RVector> offsets)
    : prior_(std::move(prior)) {
  if (prior_.num_params() != 1) {
    throw ValidationError(
        fmt::format("adaptive estimation supports a single parameter (prior has {})", prior_.num_params()));
  }
  offsets_ = offsets ? *offsets : grid();
  if (offsets_.size() == 0) throw ValidationError("offset grid is empty");
  if (!offsets_.allFinite()) throw ValidationError("offset grid contains non-finite values");
  posterior_ = prior_.p();
}

void AdaptiveStrategy::reset() { posterior_ = prior_.p(); }

double AdaptiveStrategy::mean() const {
  return prior_.weights().cwiseProduct(posterior_).dot(grid());
}

double AdaptiveStrategy::sd() const {
  const double m = mean();
  const RVector c = grid().array() - m;
  const double var = prior_.weights().cwiseProduct(posterior_).dot(c.cwiseProduct(c));
  return std::sqrt(std::max(var, 0.0));
}

void AdaptiveStrategy::update(const RVector& likelihood) {
  if (likelihood.size() != posterior_.size()) {
    throw ValidationError(
        fmt::format("likelihood has {} entries, grid has {}", likelihood.size(), posterior_.size()));
  }
  RVector next = posterior_.cwiseProduct(likelihood);
  const double z = prior_.weights().dot(next);
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw NumericalError("posterior vanishes on the whole grid; the observed outcome is impossible under the model");
  }
  posterior_ = next / z;
}

OutcomeSource OutcomeSource::simulated(double true_value, std::uint64_t seed) {
  if (!std::isfinite(true_value)) throw ValidationError("true parameter value must be finite");
  OutcomeSource s;
  s.true_value = true_value;
  s.seed = seed;
  return s;
}

OutcomeSource OutcomeSource::replay(std::vector<int> outcomes) {
  OutcomeSource s;
  s.record = std::move(outcomes);
  return s;
}

OutcomeSource OutcomeSource::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open outcome file '{}'", path));
  std::vector<int> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(first, last - first + 1);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ValidationError(fmt::format("{}:{}: expected an integer outcome, got '{}'", path, lineno, tok));
    }
    out.push_back(v);
  }
  return replay(std::move(out));
}

AdaptiveStrategy strategy_from_scheme(const Scheme& scheme) {
  if (!scheme.prior()) throw ValidationError("adaptive estimation requires a prior (x, p, dp)");
  return AdaptiveStrategy(*scheme.prior());
}

RVector outcome_probabilities(const Scheme& scheme, double x) {
  const Scheme at = scheme.at_parameters(RVector::Constant(1, x));
  const Trajectory traj = propagate(at, EvolveOptions{false, true});
  const CMatrix& rho = traj.rho.back();
  const MatrixList& povm = scheme.measurement().elements();
  RVector p(static_cast<Eigen::Index>(povm.size()));
  for (std::size_t m = 0; m < povm.size(); ++m) {
    p(static_cast<Eigen::Index>(m)) = std::max(0.0, (rho * povm[m]).trace().real());
  }
  return p;
}

namespace {

// Likelihood table L(i, m) = p(m | x_i + u).
RMatrix likelihood_table(const Scheme& scheme, const RVector& grid, double u, Execution exec) {
  const auto n = static_cast<std::size_t>(grid.size());
  const auto outcomes = static_cast<Eigen::Index>(scheme.measurement().size());
  RMatrix table(grid.size(), outcomes);
  for_each_index(n, exec, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    table.row(r) = outcome_probabilities(scheme, grid(r) + u).transpose();
  });
  if (!table.allFinite()) throw NumericalError(fmt::format("non-finite outcome probabilities at offset {}", u));
  return table;
}

double entropy(const RVector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  return h;
}

// Expected information gain H(sum_x w p(m|x)) - sum_x w H(p(.|x)).
double mutual_information(const RMatrix& table, const RVector& mass) {
  const RVector marginal = table.transpose() * mass;
  double conditional = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    if (mass(i) > 0.0) conditional += mass(i) * entropy(table.row(i).transpose());
  }
  return entropy(marginal) - conditional;
}

double operating_point(const Scheme& scheme, const RVector& grid, Execution exec) {
  RVector cfi(grid.size());
  for_each_index(static_cast<std::size_t>(grid.size()), exec, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    const Scheme at = scheme.at_parameters(RVector::Constant(1, grid(r)));
    const Trajectory traj = propagate(at, EvolveOptions{true, true});
    const double f = cfim(traj.rho.back(), traj.drho.back(), scheme.measurement())(0, 0);
    cfi(r) = std::isfinite(f) ? f : -1.0;
  });
  Eigen::Index best = 0;
  cfi.maxCoeff(&best);  // first maximum on ties
  return grid(best);
}

double min_spacing(const RVector& grid) {
  double h = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < grid.size(); ++i) h = std::min(h, grid(i) - grid(i - 1));
  return h;
}

}  // namespace

AdaptResult adapt(const Scheme& scheme, AdaptiveStrategy& strategy, Method method, std::size_t max_episode,
                  const OutcomeSource& source, const AdaptOptions& options) {
  if (scheme.num_params() != 1) {
    throw ValidationError(fmt::format("adaptive estimation supports a single parameter (scheme has {})",
                                      scheme.num_params()));
  }
  if (scheme.measurement().empty()) throw ValidationError("adaptive estimation requires a POVM");
  if (!source.true_value && source.record.empty() && max_episode > 0) {
    throw ValidationError("outcome source has neither a true value nor a record");
  }
  const auto outcomes = static_cast<int>(scheme.measurement().size());
  for (std::size_t k = 0; k < source.record.size(); ++k) {
    if (source.record[k] < 0 || source.record[k] >= outcomes) {
      throw ValidationError(fmt::format("recorded outcome {} at position {} is outside 0..{}", source.record[k],
                                        k + 1, outcomes - 1));
    }
  }

  const RVector& grid = strategy.grid();
  const RVector& offsets = strategy.offsets();
  AdaptResult result;
  if (max_episode == 0) {
    result.posterior = strategy.posterior();
    return result;
  }

  std::vector<std::optional<RMatrix>> cache(static_cast<std::size_t>(offsets.size()));
  auto cached_table = [&](Eigen::Index j) -> const RMatrix& {
    auto& slot = cache[static_cast<std::size_t>(j)];
    if (!slot) slot = likelihood_table(scheme, grid, offsets(j), options.exec);
    return *slot;
  };

  if (method == Method::FOP) result.operating_point = operating_point(scheme, grid, options.exec);

  std::mt19937_64 rng(source.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double resolution = min_spacing(grid);
  bool collapsed = false;
  const std::size_t episodes = source.true_value ? max_episode : std::min(max_episode, source.record.size());
  if (!source.true_value && source.record.size() < max_episode) {
    result.warnings.push_back(fmt::format("outcome record holds {} entries; stopping after them",
                                          source.record.size()));
    warn(result.warnings.back());
  }

  for (std::size_t e = 0; e < episodes; ++e) {
    double u = 0.0;
    RMatrix fresh;
    const RMatrix* table = nullptr;
    if (method == Method::FOP) {
      u = *result.operating_point - strategy.mean();
      fresh = likelihood_table(scheme, grid, u, options.exec);
      table = &fresh;
    } else {
      const RVector mass = strategy.prior().weights().cwiseProduct(strategy.posterior());
      Eigen::Index best = 0;
      double best_mi = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < offsets.size(); ++j) {
        const double mi = mutual_information(cached_table(j), mass);
        if (mi > best_mi) {
          best_mi = mi;
          best = j;
        }
      }
      u = offsets(best);
      table = &cached_table(best);
    }

    int m = 0;
    if (source.true_value) {
      const RVector p = outcome_probabilities(scheme, *source.true_value + u);
      const double r = uniform(rng) * p.sum();
      double acc = 0.0;
      m = outcomes - 1;
      for (int k = 0; k < outcomes; ++k) {
        acc += p(k);
        if (r < acc) {
          m = k;
          break;
        }
      }
    } else {
      m = source.record[e];
    }

    strategy.update(table->col(m));
    Episode ep{e + 1, u, m, strategy.mean(), strategy.sd()};
    result.log.push_back(ep);
    if (!collapsed && ep.sd < resolution) {
      collapsed = true;
      result.warnings.push_back(fmt::format(
          "posterior collapsed below the grid resolution ({:.3e} < {:.3e}) at episode {}", ep.sd, resolution,
          ep.episode));
      warn(result.warnings.back());
    }
  }
  result.posterior = strategy.posterior();
  return result;
}

}  // namespace qestim::adaptive
