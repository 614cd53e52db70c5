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

#include "commands.hpp"

#include <chrono>
#include <iostream>

#include <fmt/format.h>

#include "config.hpp"
#include "output.hpp"
#include "qestim/version.hpp"

namespace qestim::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  const RunOptions& options;
  std::ostream& out;
  Cfg top;
  std::string task;
  std::uint64_t seed = 1234;
  fs::path dir;
  std::string timestamp;
  std::string stamp;  // compact, for file names
  Json results = Json::object();

  void say(const std::string& line) const {
    if (!options.quiet) out << line << '\n';
  }
};

const char* method_name(DynMethod m) { return m == DynMethod::Expm ? "expm" : "ode"; }

Json scheme_json(const SchemeConfig& sc) {
  const Scheme& s = sc.scheme;
  Json j = Json::object();
  j["kind"] = sc.description;
  j["dim"] = s.dim();
  j["num_params"] = s.num_params();
  j["outcomes"] = s.measurement().size();
  if (s.is_lindblad()) {
    const auto& l = s.lindblad();
    j["method"] = method_name(l.method());
    j["tspan"] = {{"start", l.tspan().front()}, {"stop", l.tspan().back()}, {"points", l.tspan().size()}};
    j["controls"] = l.controls().count();
    j["decays"] = l.decays().size();
  } else {
    j["kraus_ops"] = s.kraus().ops().size();
  }
  if (s.prior()) j["prior_points"] = s.prior()->size();
  return j;
}

std::string header_cell(const std::string& name, Eigen::Index r, Eigen::Index c) {
  return fmt::format("{}_{}_{}", name, r, c);
}

// Writes a per-time bound series to JSON and CSV.
Json bound_json(Context& ctx, const std::string& name, const BoundResult& b) {
  Json j = Json::object();
  j["quantity"] = to_string(b.quantity);
  if (b.ld_type) j["ld_type"] = to_string(*b.ld_type);
  j["times"] = b.times;
  Json values = Json::array();
  for (const auto& v : b.values) values.push_back(complex_matrix_json(v));
  j["values"] = std::move(values);
  if (!b.truncation.empty()) j["truncation_delta_final"] = matrix_json(b.truncation.back());

  const Eigen::Index n = b.values.front().rows();
  const bool complex = std::any_of(b.values.begin(), b.values.end(),
                                   [](const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() != 0.0; });
  std::vector<std::string> header{"time"};
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) header.push_back(header_cell("re", r, c));
  }
  if (complex) {
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) header.push_back(header_cell("im", r, c));
    }
  }
  CsvWriter csv(ctx.dir / (name + ".csv"), header);
  for (std::size_t k = 0; k < b.times.size(); ++k) {
    std::vector<double> row{b.times[k]};
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) row.push_back(b.values[k](r, c).real());
    }
    if (complex) {
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) row.push_back(b.values[k](r, c).imag());
      }
    }
    csv.row(row);
  }
  return j;
}

std::string matrix_line(const RMatrix& m) {
  std::string s = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) s += "; ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? " " : "") + fmt::format("{:.8g}", m(r, c));
  }
  return s + "]";
}

void run_evaluate(Context& ctx, const SchemeConfig& sc) {
  const EvaluateTask t = evaluate_task(ctx.top.get("evaluate"));
  const Scheme& s = sc.scheme;
  BoundOptions opts;
  opts.ld_type = t.ld_type;
  opts.sld = t.sld;
  opts.final_only = t.final_only;
  opts.sdp = t.sdp;
  const RMatrix w = t.weight ? *t.weight : RMatrix::Identity(static_cast<Eigen::Index>(s.num_params()),
                                                             static_cast<Eigen::Index>(s.num_params()));
  const bool needs_traj = std::any_of(t.quantities.begin(), t.quantities.end(),
                                      [](const std::string& q) { return q == "qfim" || q == "cfim"; });
  Trajectory traj;
  if (needs_traj) traj = propagate(s, EvolveOptions{true, t.final_only});
  Json res = Json::object();
  for (const auto& q : t.quantities) {
    if (q == "qfim" || q == "cfim" || q == "hcrb" || q == "nhb") {
      BoundResult b;
      if (q == "qfim") {
        b = qfim(traj, opts);
      } else if (q == "cfim") {
        b = cfim(traj, s.measurement(), opts);
      } else if (q == "hcrb") {
        b = hcrb(s, w, opts);
      } else {
        b = nhb(s, w, opts);
      }
      res[q] = bound_json(ctx, q, b);
      ctx.say(fmt::format("{} at t = {:g}: {}", to_string(b.quantity), b.times.back(), matrix_line(b.values.back().real())));
    } else {
      const RMatrix v = q == "vtb" ? vtb(s, opts) : qvtb(s, opts);
      res[q] = {{"quantity", q == "vtb" ? "VTB" : "QVTB"}, {"value", matrix_json(v)}};
      ctx.say(fmt::format("{}: {}", q == "vtb" ? "VTB" : "QVTB", matrix_line(v)));
    }
  }
  ctx.results["results"] = std::move(res);
}

Json variables_json(const Scheme& s) {
  Json j = Json::object();
  if (s.is_lindblad() && !s.lindblad().controls().empty()) j["ctrl"] = s.lindblad().controls().amplitudes();
  if (s.probe().is_pure_vector()) {
    j["psi"] = complex_vector_json(s.probe().vector());
  } else {
    j["rho"] = complex_matrix_json(s.probe().density());
  }
  Json povm = Json::array();
  for (const auto& m : s.measurement().elements()) povm.push_back(complex_matrix_json(m));
  j["measurement"] = std::move(povm);
  return j;
}

void run_optimize(Context& ctx, const SchemeConfig& sc) {
  const OptimizeTask t = optimize_task(ctx.top.get("optimize"), ctx.seed);
  const opt::OptimizeResult r = opt::optimize(sc.scheme, t.scenario, t.algorithm, t.objective, t.savefile);
  const opt::OptimizationRecord& rec = r.record;
  const std::string base = fmt::format("{}_{}_{}", rec.scenario, rec.algorithm, ctx.stamp);
  {
    CsvWriter csv(ctx.dir / (base + ".csv"), {"iteration", "objective"});
    for (std::size_t k = 0; k < rec.history.size(); ++k) csv.row({static_cast<double>(k), rec.history[k]});
  }
  if (t.savefile) {
    std::vector<std::string> header{"iteration"};
    for (Eigen::Index i = 0; i < rec.best.size(); ++i) header.push_back(fmt::format("v{}", i));
    CsvWriter csv(ctx.dir / (base + "_variables.csv"), header);
    for (std::size_t k = 0; k < rec.variable_history.size(); ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (Eigen::Index i = 0; i < rec.variable_history[k].size(); ++i) row.push_back(rec.variable_history[k](i));
      csv.row(row);
    }
  }
  const Json vars = variables_json(r.scheme);
  write_text(ctx.dir / (base + ".json"), dump_json(vars));

  Json j = Json::object();
  j["scenario"] = rec.scenario;
  j["algorithm"] = rec.algorithm;
  j["objective"] = rec.objective;
  j["maximize"] = rec.maximize;
  j["initial_value"] = rec.history.front();
  j["best_value"] = rec.best_value;
  j["iterations"] = rec.iterations;
  j["converged"] = rec.converged;
  j["reason"] = rec.reason;
  j["history"] = rec.history;
  j["variables"] = vars;
  ctx.results["results"] = std::move(j);
  ctx.say(fmt::format("{} / {} ({}): {:.10g} -> {:.10g} after {} iterations ({}; {:.2f} s)", rec.scenario,
                      rec.algorithm, rec.objective, rec.history.front(), rec.best_value, rec.iterations, rec.reason,
                      rec.wall_seconds));
  ctx.say(fmt::format("wrote {}.csv and {}.json", base, base));
}

void run_error(Context& ctx, const SchemeConfig& sc) {
  const ErrorTask t = error_task(ctx.top.get("error"));
  const error::ErrorBudget b =
      t.mode == error::Mode::Evaluation
          ? error::error_evaluation(sc.scheme, t.input_error_scaling, t.objective, t.sld_eps)
          : error::error_control(sc.scheme, t.output_error_scaling, t.objective, t.sld_eps);
  Json j = Json::object();
  j["mode"] = b.mode == error::Mode::Evaluation ? "evaluation" : "control";
  j["objective"] = to_string(b.objective);
  j["sld_eps"] = b.sld_eps;
  j["path"] = b.path;
  j["value"] = b.value;
  j["input_error_scaling"] = b.input_error_scaling;
  j["output_error_scaling"] = b.output_error_scaling;
  j["gradient_norm"] = b.gradient_norm;
  if (b.path == "ode") {
    j["max_step"] = b.max_step;
    j["step_error"] = b.step_error;
  }
  j["truncation_delta"] = matrix_json(b.truncation_delta);
  Json terms = Json::array();
  for (const auto& term : b.terms) {
    terms.push_back({{"input", term.input}, {"entries", term.entries}, {"gradient_norm", term.gradient_norm}});
  }
  j["terms"] = std::move(terms);
  j["warnings"] = b.warnings;
  ctx.results["results"] = std::move(j);
  if (!ctx.options.quiet) ctx.out << b.table();
}

void run_adapt(Context& ctx, const SchemeConfig& sc, const fs::path& base_dir) {
  const AdaptTask t = adapt_task(ctx.top.get("adapt"), base_dir);
  adaptive::AdaptiveStrategy st = [&] {
    adaptive::AdaptiveStrategy base = adaptive::strategy_from_scheme(sc.scheme);
    return t.offsets ? adaptive::AdaptiveStrategy(base.prior(), *t.offsets) : base;
  }();
  const adaptive::OutcomeSource src = t.true_value ? adaptive::OutcomeSource::simulated(*t.true_value, ctx.seed)
                                                   : adaptive::OutcomeSource::from_file(t.outcomes->string());
  const adaptive::AdaptResult r = adaptive::adapt(sc.scheme, st, t.method, t.max_episode, src);
  {
    CsvWriter csv(ctx.dir / "adapt.csv", {"episode", "offset", "outcome", "mean", "sd"});
    for (const auto& e : r.log) {
      csv.row({std::to_string(e.episode), format_double(e.offset), std::to_string(e.outcome), format_double(e.mean),
               format_double(e.sd)});
    }
  }
  Json j = Json::object();
  j["method"] = adaptive::to_string(t.method);
  j["episodes"] = r.log.size();
  if (t.true_value) j["true_value"] = *t.true_value;
  if (r.operating_point) j["operating_point"] = *r.operating_point;
  j["posterior_mean"] = st.mean();
  j["posterior_sd"] = st.sd();
  j["grid"] = vector_json(st.grid());
  j["posterior"] = vector_json(r.posterior);
  j["warnings"] = r.warnings;
  ctx.results["results"] = std::move(j);
  ctx.say(fmt::format("{} adaptive estimation: {} episodes, posterior mean {:.10g}, sd {:.3e}",
                      adaptive::to_string(t.method), r.log.size(), st.mean(), st.sd()));
}

int execute(const RunOptions& options, std::ostream& out) {
  const std::string& cmd = options.command;
  toml::table root = load_config(options.config, options.overrides);
  if (cmd == "nv") {
    if (auto* s = root.get("scheme"); s && s->is_table()) {
      if (auto* p = s->as_table()->get("preset"); p && p->value_or(std::string()) != "nv") {
        throw ValidationError("scheme.preset: the nv command uses the nv preset");
      }
    }
    apply_override(root, "scheme.preset=\"nv\"");
  }
  Context ctx{options, out, Cfg(&root, ""), "", 1234, {}, utc_timestamp(false), utc_timestamp(true)};
  ctx.top.allow_only({"task", "seed", "output", "scheme", "evaluate", "optimize", "error", "adapt"});

  ctx.task = cmd;
  if (cmd == "nv") {
    ctx.task = ctx.top.str_or("task", "evaluate");
    if (ctx.task != "evaluate" && ctx.task != "optimize" && ctx.task != "error" && ctx.task != "adapt") {
      ctx.top.at("task").fail(fmt::format("unknown task '{}'", ctx.task));
    }
  } else if (auto t = ctx.top.get("task"); t && t->str() != cmd) {
    t->fail(fmt::format("config is for task '{}' but the command is '{}'", t->str(), cmd));
  }
  if (options.seed) {
    ctx.seed = *options.seed;
  } else if (auto s = ctx.top.get("seed")) {
    const std::int64_t v = s->integer();
    if (v < 0) s->fail("expected a nonnegative integer");
    ctx.seed = static_cast<std::uint64_t>(v);
  }
  ctx.dir = options.out ? *options.out : fs::path(ctx.top.str_or("output", "qestim_out"));
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) throw ValidationError(fmt::format("cannot create output directory '{}': {}", ctx.dir.string(), ec.message()));

  const SchemeConfig sc = build_scheme(Cfg(root.get("scheme"), "scheme"));
  ctx.results["qestim_version"] = version();
  ctx.results["task"] = ctx.task;
  ctx.results["seed"] = ctx.seed;
  ctx.results["timestamp"] = ctx.timestamp;
  ctx.results["scheme"] = scheme_json(sc);

  const fs::path base_dir = options.config.empty() ? fs::current_path() : options.config.parent_path();
  if (ctx.task == "evaluate") {
    run_evaluate(ctx, sc);
  } else if (ctx.task == "optimize") {
    run_optimize(ctx, sc);
  } else if (ctx.task == "error") {
    run_error(ctx, sc);
  } else {
    run_adapt(ctx, sc, base_dir);
  }
  write_text(ctx.dir / "results.json", dump_json(ctx.results));
  ctx.say(fmt::format("results written to {}", (ctx.dir / "results.json").string()));
  return 0;
}

}  // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    return execute(options, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure in " << options.command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure in " << options.command << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace qestim::cli
