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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qestim/log.hpp"
#include "qestim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum parameter estimation: bounds, dynamics, design and error budgets", "qestim"};
  app.set_version_flag("--version", qestim::version());
  app.require_subcommand(1);

  qestim::cli::RunOptions opts;
  std::string out_dir;
  std::uint64_t seed = 0;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "TOML run configuration")->check(CLI::ExistingFile);
    sub->add_option("--set", opts.overrides, "Override a config key (key.path=value); repeatable")->take_all();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_flag("--quiet", opts.quiet, "Suppress the summary");
    sub->callback([&, name] { opts.command = name; });
    return sub;
  };
  add("evaluate", "Compute bounds (QFIM, CFIM, HCRB, NHB, VTB, QVTB) for a scheme");
  add("optimize", "Optimize controls, probe and/or measurement");
  add("error", "Error evaluation or input-precision budgeting");
  add("adapt", "Bayesian adaptive estimation loop");
  add("nv", "Nitrogen-vacancy magnetometer preset (task from the config, default evaluate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--out")) opts.out = out_dir;
    if (sub->count("--seed")) opts.seed = seed;
  }
  if (opts.quiet) qestim::set_warning_handler(nullptr);
  return qestim::cli::run(opts, std::cout, std::cerr);
}
