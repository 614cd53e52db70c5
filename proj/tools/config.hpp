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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <toml.hpp>

#include "qestim/adaptive.hpp"
#include "qestim/error.hpp"
#include "qestim/metrology.hpp"
#include "qestim/nv.hpp"
#include "qestim/optimize.hpp"

namespace qestim::cli {

/// A TOML node with its dotted key path, for error messages.
class Cfg {
 public:
  Cfg(const toml::node* node, std::string path) : node_(node), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  bool is_table() const { return node_ && node_->is_table(); }
  bool is_array() const { return node_ && node_->is_array(); }
  bool is_number() const { return node_ && (node_->is_integer() || node_->is_floating_point()); }
  bool is_string() const { return node_ && node_->is_string(); }

  bool has(std::string_view key) const;
  Cfg at(std::string_view key) const;
  std::optional<Cfg> get(std::string_view key) const;
  std::size_t size() const;
  Cfg operator[](std::size_t i) const;

  /// Rejects keys outside `allowed`.
  void allow_only(std::initializer_list<std::string_view> allowed) const;

  double number() const;
  std::int64_t integer() const;
  std::size_t count() const;  // nonnegative integer
  bool boolean() const;
  std::string str() const;
  std::vector<double> numbers() const;
  /// A real or [re, im] entry.
  Complex complex() const;
  CVector cvector() const;
  CMatrix cmatrix() const;
  RMatrix rmatrix() const;
  MatrixList cmatrices() const;

  double number_or(std::string_view key, double fallback) const;
  std::size_t count_or(std::string_view key, std::size_t fallback) const;
  bool boolean_or(std::string_view key, bool fallback) const;
  std::string str_or(std::string_view key, std::string fallback) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  const toml::node* node_;
  std::string path_;
};

/// [start, step, stop] with the endpoint included when it lies on the grid
/// (within 1e-9 of a step).
std::vector<double> range_from_triple(const Cfg& node);

/// Parses "a.b.c=value" (value in TOML syntax; bare words are taken as
/// strings) and stores it into the table, creating intermediate tables.
void apply_override(toml::table& root, const std::string& assignment);

toml::table load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

struct SchemeConfig {
  Scheme scheme;
  std::string description;  // "nv", "lindblad" or "kraus"
};

SchemeConfig build_scheme(const Cfg& scheme_node);
nv::NVParams nv_params(const std::optional<Cfg>& node, const std::optional<Cfg>& scheme_node);

struct EvaluateTask {
  std::vector<std::string> quantities{"qfim", "cfim"};
  LdType ld_type = LdType::SLD;
  SldConfig sld;
  std::optional<RMatrix> weight;
  bool final_only = false;
  sdp::Options sdp;
};
EvaluateTask evaluate_task(const std::optional<Cfg>& node);

struct OptimizeTask {
  opt::Scenario scenario;
  opt::Algorithm algorithm;
  Objective objective;
  bool savefile = false;
};
OptimizeTask optimize_task(const std::optional<Cfg>& node, std::uint64_t seed);

struct ErrorTask {
  error::Mode mode = error::Mode::Evaluation;
  double input_error_scaling = 1e-8;
  double output_error_scaling = 1e-9;
  Objective::Kind objective = Objective::Kind::QFIM;
  double sld_eps = 1e-8;
};
ErrorTask error_task(const std::optional<Cfg>& node);

struct AdaptTask {
  adaptive::Method method = adaptive::Method::FOP;
  std::size_t max_episode = 1000;
  std::optional<double> true_value;
  std::optional<std::filesystem::path> outcomes;
  std::optional<RVector> offsets;
};
AdaptTask adapt_task(const std::optional<Cfg>& node, const std::filesystem::path& base_dir);

}  // namespace qestim::cli
