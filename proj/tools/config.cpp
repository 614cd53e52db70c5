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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace qestim::cli {

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Re-throws library validation errors under the config key that produced them.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace

bool Cfg::has(std::string_view key) const {
  return is_table() && node_->as_table()->contains(key);
}

Cfg Cfg::at(std::string_view key) const {
  auto v = get(key);
  if (!v) throw ValidationError(fmt::format("{}: missing required key", join(path_, key)));
  return *v;
}

std::optional<Cfg> Cfg::get(std::string_view key) const {
  if (!node_) return std::nullopt;
  if (!is_table()) fail("expected a table");
  const toml::node* child = node_->as_table()->get(key);
  if (!child) return std::nullopt;
  return Cfg(child, join(path_, key));
}

std::size_t Cfg::size() const {
  if (!is_array()) fail("expected an array");
  return node_->as_array()->size();
}

Cfg Cfg::operator[](std::size_t i) const {
  if (!is_array()) fail("expected an array");
  return Cfg(node_->as_array()->get(i), fmt::format("{}[{}]", path_, i));
}

void Cfg::allow_only(std::initializer_list<std::string_view> allowed) const {
  if (!is_table()) fail("expected a table");
  for (const auto& [k, v] : *node_->as_table()) {
    if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end()) {
      throw ValidationError(fmt::format("{}: unknown key", join(path_, k.str())));
    }
  }
}

void Cfg::fail(const std::string& message) const { throw ValidationError(fmt::format("{}: {}", path_, message)); }

double Cfg::number() const {
  if (!is_number()) fail("expected a number");
  return node_->value<double>().value();
}

std::int64_t Cfg::integer() const {
  if (!node_ || !node_->is_integer()) fail("expected an integer");
  return node_->value<std::int64_t>().value();
}

std::size_t Cfg::count() const {
  const std::int64_t v = integer();
  if (v < 0) fail("expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool Cfg::boolean() const {
  if (!node_ || !node_->is_boolean()) fail("expected true or false");
  return node_->value<bool>().value();
}

std::string Cfg::str() const {
  if (!is_string()) fail("expected a string");
  return node_->value<std::string>().value();
}

std::vector<double> Cfg::numbers() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].number());
  return out;
}

Complex Cfg::complex() const {
  if (is_number()) return {number(), 0.0};
  if (is_array() && size() == 2 && (*this)[0].is_number() && (*this)[1].is_number()) {
    return {(*this)[0].number(), (*this)[1].number()};
  }
  fail("expected a number or an [re, im] pair");
}

CVector Cfg::cvector() const {
  CVector v(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].complex();
  return v;
}

CMatrix Cfg::cmatrix() const {
  const std::size_t rows = size();
  if (rows == 0) fail("matrix is empty");
  CMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Cfg row = (*this)[r];
    if (!row.is_array()) row.fail("expected a matrix row");
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(row.size()));
    if (row.size() != static_cast<std::size_t>(m.cols())) {
      row.fail(fmt::format("row has {} entries, expected {}", row.size(), m.cols()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].complex();
    }
  }
  return m;
}

RMatrix Cfg::rmatrix() const {
  const CMatrix m = cmatrix();
  if (m.imag().cwiseAbs().maxCoeff() != 0.0) fail("expected a real matrix");
  return m.real();
}

MatrixList Cfg::cmatrices() const {
  MatrixList out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].cmatrix());
  return out;
}

double Cfg::number_or(std::string_view key, double fallback) const {
  auto v = get(key);
  return v ? v->number() : fallback;
}

std::size_t Cfg::count_or(std::string_view key, std::size_t fallback) const {
  auto v = get(key);
  return v ? v->count() : fallback;
}

bool Cfg::boolean_or(std::string_view key, bool fallback) const {
  auto v = get(key);
  return v ? v->boolean() : fallback;
}

std::string Cfg::str_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? v->str() : std::move(fallback);
}

std::vector<double> range_from_triple(const Cfg& node) {
  const auto v = node.numbers();
  if (v.size() != 3) node.fail("expected [start, step, stop]");
  const double start = v[0], step = v[1], stop = v[2];
  if (!(step > 0.0) || !(stop > start)) node.fail("need step > 0 and stop > start");
  const double n = (stop - start) / step;
  const auto count = static_cast<std::size_t>(std::floor(n + 1e-9)) + 1;
  if (count > 10'000'000) node.fail("range is too long");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = start + static_cast<double>(k) * step;
  if (std::abs(n - std::round(n)) <= 1e-9) out.back() = stop;
  return out;
}

void apply_override(toml::table& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError(fmt::format("--set '{}': expected key=value", assignment));
  }
  std::string key = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  key.erase(key.find_last_not_of(" \t") + 1);
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + value);
  } catch (const toml::parse_error&) {
    // Bare words become strings.
    toml::table t;
    t.insert("v", value);
    parsed = std::move(t);
  }
  toml::table* cur = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ValidationError(fmt::format("--set '{}': empty key component", assignment));
    if (dot == std::string::npos) {
      cur->insert_or_assign(part, *parsed.get("v"));
      return;
    }
    toml::node* next = cur->get(part);
    if (!next) {
      cur->insert(part, toml::table{});
      next = cur->get(part);
    }
    if (!next->is_table()) {
      throw ValidationError(fmt::format("--set '{}': '{}' is not a table", assignment, key.substr(0, dot)));
    }
    cur = next->as_table();
    start = dot + 1;
  }
}

toml::table load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  toml::table root;
  if (!path.empty()) {
    try {
      root = toml::parse_file(path.string());
    } catch (const toml::parse_error& e) {
      const auto& where = e.source().begin;
      throw ValidationError(fmt::format("{}:{}:{}: {}", path.string(), where.line, where.column, e.description()));
    }
  }
  for (const auto& o : overrides) apply_override(root, o);
  return root;
}

namespace {

ProbeState build_probe(const Cfg& node) {
  node.allow_only({"state", "index", "vector", "density"});
  return at_path(node.path(), [&] {
    const int given = node.has("state") + node.has("vector") + node.has("density");
    if (given != 1) node.fail("give exactly one of state, vector or density");
    if (auto s = node.get("state")) {
      std::optional<int> index;
      if (auto i = node.get("index")) index = static_cast<int>(i->integer());
      return builtin_state(builtin_state_from_name(s->str()), index);
    }
    if (auto v = node.get("vector")) return ProbeState::from_vector(v->cvector());
    return ProbeState::from_density(node.at("density").cmatrix());
  });
}

Measurement build_measurement(const std::optional<Cfg>& node, Eigen::Index dim) {
  if (!node) return sic_povm(static_cast<int>(dim));
  if (node->is_string()) {
    if (lower(node->str()) != "sic") node->fail("expected \"sic\" or a measurement table");
    return at_path(node->path(), [&] { return sic_povm(static_cast<int>(dim)); });
  }
  node->allow_only({"kind", "povm", "basis"});
  const std::string kind = lower(node->str_or("kind", node->has("povm") ? "povm" : node->has("basis") ? "projective" : "sic"));
  return at_path(node->path(), [&] {
    if (kind == "sic") return sic_povm(static_cast<int>(dim));
    if (kind == "povm") return Measurement(node->at("povm").cmatrices());
    if (kind == "projective") return Measurement::projective(node->at("basis").cmatrix());
    node->at("kind").fail(fmt::format("unknown measurement kind '{}' (sic, povm or projective)", kind));
  });
}

ControlShape build_shape(const Cfg& node) {
  const std::string kind = lower(node.at("kind").str());
  ControlShape s;
  if (kind == "zero") {
    node.allow_only({"kind"});
    s = shape::Zero{};
  } else if (kind == "linear") {
    node.allow_only({"kind", "k", "c0"});
    s = shape::Linear{node.number_or("k", 0.0), node.number_or("c0", 0.0)};
  } else if (kind == "sine") {
    node.allow_only({"kind", "A", "omega", "phi"});
    s = shape::Sine{node.number_or("A", 0.0), node.number_or("omega", 0.0), node.number_or("phi", 0.0)};
  } else if (kind == "saw" || kind == "triangle") {
    node.allow_only({"kind", "k", "n"});
    const int n = node.has("n") ? static_cast<int>(node.at("n").integer()) : 1;
    if (kind == "saw") {
      s = shape::Saw{node.number_or("k", 0.0), n};
    } else {
      s = shape::Triangle{node.number_or("k", 0.0), n};
    }
  } else if (kind == "gaussian") {
    node.allow_only({"kind", "A", "mu", "sigma"});
    s = shape::Gaussian{node.number_or("A", 0.0), node.number_or("mu", 0.0), node.number_or("sigma", 1.0)};
  } else if (kind == "gaussianedge") {
    node.allow_only({"kind", "A", "sigma"});
    s = shape::GaussianEdge{node.number_or("A", 0.0), node.number_or("sigma", 1.0)};
  } else {
    node.at("kind").fail(fmt::format("unknown control shape '{}'", kind));
  }
  at_path(node.path(), [&] { validate_shape(s); });
  return s;
}

ControlBounds build_bounds(const Cfg& node) {
  const auto v = node.numbers();
  if (v.size() != 2 || !(v[0] < v[1])) node.fail("expected [lo, hi] with lo < hi");
  return ControlBounds{v[0], v[1]};
}

ControlSpec build_controls(const std::optional<Cfg>& node, const std::vector<double>& tspan) {
  if (!node) return {};
  node->allow_only({"Hc", "amplitudes", "shape", "bounds"});
  MatrixList hc = node->at("Hc").cmatrices();
  ControlBounds bounds;
  if (auto b = node->get("bounds")) bounds = build_bounds(*b);
  if (node->has("amplitudes") && node->has("shape")) node->fail("give amplitudes or shape, not both");
  if (auto s = node->get("shape")) {
    const ControlShape shape = build_shape(*s);
    return at_path(node->path(), [&] { return ControlSpec::from_shape(hc, shape, tspan, bounds); });
  }
  std::vector<std::vector<double>> amps;
  if (auto a = node->get("amplitudes")) {
    for (std::size_t k = 0; k < a->size(); ++k) amps.push_back((*a)[k].numbers());
  }
  return at_path(node->path(), [&] { return ControlSpec(hc, amps, bounds); });
}

std::vector<DecayChannel> build_decays(const std::optional<Cfg>& node) {
  std::vector<DecayChannel> out;
  if (!node) return out;
  for (std::size_t i = 0; i < node->size(); ++i) {
    const Cfg d = (*node)[i];
    d.allow_only({"op", "rate"});
    const CMatrix op = d.at("op").cmatrix();
    const Cfg rate = d.at("rate");
    out.push_back(at_path(d.path(), [&] {
      return rate.is_array() ? DecayChannel(op, rate.numbers()) : DecayChannel(op, rate.number());
    }));
  }
  return out;
}

HamiltonianSpec build_hamiltonian(const Cfg& node) {
  node.allow_only({"H0", "H0_series", "dH", "linear", "x0"});
  const MatrixList dh = node.at("dH").cmatrices();
  if (node.has("H0") == node.has("H0_series")) node.fail("give exactly one of H0 or H0_series");
  if (auto series = node.get("H0_series")) {
    if (node.has("linear")) node.fail("linear applies to a constant H0");
    return at_path(node.path(), [&] { return HamiltonianSpec::time_series(series->cmatrices(), dh); });
  }
  const CMatrix h0 = node.at("H0").cmatrix();
  if (!node.boolean_or("linear", false)) {
    if (node.has("x0")) node.fail("x0 requires linear = true");
    return at_path(node.path(), [&] { return HamiltonianSpec::constant(h0, dh); });
  }
  // H0(x) = H0 + sum_a (x_a - x0_a) dH_a.
  RVector x0 = RVector::Zero(static_cast<Eigen::Index>(dh.size()));
  if (auto x = node.get("x0")) {
    const auto v = x->numbers();
    if (v.size() != dh.size()) x->fail(fmt::format("expected {} values (one per dH)", dh.size()));
    x0 = Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  auto h0fn = [h0, dh, x0](const RVector& u, double) {
    CMatrix h = h0;
    for (std::size_t a = 0; a < dh.size(); ++a) h += (u(static_cast<Eigen::Index>(a)) - x0(static_cast<Eigen::Index>(a))) * dh[a];
    return h;
  };
  auto dhfn = [dh](const RVector&, double) { return dh; };
  return at_path(node.path(), [&] { return HamiltonianSpec::parametric(h0fn, dhfn, x0); });
}

KrausSpec build_kraus(const Cfg& node) {
  node.allow_only({"K", "dK"});
  const MatrixList k = node.at("K").cmatrices();
  std::vector<MatrixList> dk;
  const Cfg d = node.at("dK");
  for (std::size_t a = 0; a < d.size(); ++a) dk.push_back(d[a].cmatrices());
  return at_path(node.path(), [&] { return KrausSpec(k, dk); });
}

std::optional<PriorSpec> build_prior(const std::optional<Cfg>& node) {
  if (!node) return std::nullopt;
  node->allow_only({"x", "x_values", "p", "dp", "shape", "mu", "sigma"});
  RVector x;
  if (node->has("x") == node->has("x_values")) node->fail("give exactly one of x ([start, step, stop]) or x_values");
  if (auto r = node->get("x")) {
    const auto v = range_from_triple(*r);
    x = Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  } else {
    const auto v = node->at("x_values").numbers();
    x = Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  RVector p(x.size()), dp(x.size());
  if (auto s = node->get("shape")) {
    if (node->has("p") || node->has("dp")) node->fail("give shape or p/dp, not both");
    const std::string shape = lower(s->str());
    if (shape == "uniform") {
      if (x.size() < 2) node->fail("a uniform prior needs at least two grid points");
      p.setConstant(1.0 / (x(x.size() - 1) - x(0)));
      dp.setZero();
    } else if (shape == "gaussian") {
      const double mu = node->at("mu").number(), sigma = node->at("sigma").number();
      if (!(sigma > 0.0)) node->at("sigma").fail("must be positive");
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double z = (x(i) - mu) / sigma;
        p(i) = std::exp(-0.5 * z * z);
        dp(i) = -z / sigma * p(i);
      }
    } else {
      s->fail(fmt::format("unknown prior shape '{}' (uniform or gaussian)", shape));
    }
  } else {
    const auto pv = node->at("p").numbers();
    const auto dv = node->at("dp").numbers();
    if (pv.size() != static_cast<std::size_t>(x.size())) node->at("p").fail("length differs from the grid");
    if (dv.size() != static_cast<std::size_t>(x.size())) node->at("dp").fail("length differs from the grid");
    p = Eigen::Map<const RVector>(pv.data(), x.size());
    dp = Eigen::Map<const RVector>(dv.data(), x.size());
  }
  return at_path(node->path(), [&] { return PriorSpec({x}, p, {dp}); });
}

DynMethod method_from(const Cfg& node) {
  const std::string m = lower(node.str());
  if (m == "expm") return DynMethod::Expm;
  if (m == "ode") return DynMethod::Ode;
  node.fail(fmt::format("unknown method '{}' (expm or ode)", m));
}

}  // namespace

nv::NVParams nv_params(const std::optional<Cfg>& node, const std::optional<Cfg>& scheme_node) {
  nv::NVParams p;
  if (node) {
    node->allow_only({"D", "gS", "gI", "A1", "A2", "B", "gamma", "psi0"});
    p.D = node->number_or("D", p.D);
    p.gS = node->number_or("gS", p.gS);
    p.gI = node->number_or("gI", p.gI);
    p.A1 = node->number_or("A1", p.A1);
    p.A2 = node->number_or("A2", p.A2);
    p.gamma = node->number_or("gamma", p.gamma);
    if (auto b = node->get("B")) {
      const auto v = b->numbers();
      if (v.size() != 3) b->fail("expected 3 components");
      p.B = {v[0], v[1], v[2]};
    }
    if (auto psi = node->get("psi0")) p.psi0 = psi->cvector();
  }
  if (scheme_node) {
    if (auto t = scheme_node->get("tspan")) p.tspan = range_from_triple(*t);
    if (auto m = scheme_node->get("method")) p.method = method_from(*m);
    p.ode.atol = scheme_node->number_or("atol", p.ode.atol);
    p.ode.rtol = scheme_node->number_or("rtol", p.ode.rtol);
  }
  const std::string where = node ? node->path() : (scheme_node ? scheme_node->path() : std::string("nv"));
  at_path(where, [&] { p.validate(); });
  return p;
}

SchemeConfig build_scheme(const Cfg& node) {
  if (!node.is_table()) throw ValidationError(fmt::format("{}: missing required table", node.path()));
  node.allow_only({"preset", "nv", "tspan", "method", "atol", "rtol", "probe", "hamiltonian", "controls", "decays",
                   "kraus", "measurement", "prior"});
  const std::string preset = lower(node.str_or("preset", ""));
  std::optional<PriorSpec> prior = build_prior(node.get("prior"));

  if (preset == "nv") {
    for (auto k : {"probe", "hamiltonian", "controls", "decays", "kraus"}) {
      if (node.has(k)) node.at(k).fail("not allowed with preset = \"nv\" (use scheme.nv)");
    }
    const nv::NVParams p = nv_params(node.get("nv"), node);
    Scheme s = nv::nv_scheme(p);
    if (node.has("measurement")) s = s.with_measurement(build_measurement(node.get("measurement"), s.dim()));
    if (prior) s = Scheme(s.probe(), s.param(), s.measurement(), prior);
    return {std::move(s), "nv"};
  }
  if (!preset.empty()) node.at("preset").fail(fmt::format("unknown preset '{}' (nv)", preset));
  if (node.has("nv")) node.at("nv").fail("requires preset = \"nv\"");

  const ProbeState probe = build_probe(node.at("probe"));
  if (auto k = node.get("kraus")) {
    for (auto key : {"hamiltonian", "controls", "decays", "tspan"}) {
      if (node.has(key)) node.at(key).fail("not allowed together with scheme.kraus");
    }
    KrausSpec spec = build_kraus(*k);
    Measurement m = build_measurement(node.get("measurement"), probe.dim());
    Scheme s = at_path(node.path(), [&] { return make_general_scheme(probe, std::move(spec), m, prior); });
    return {std::move(s), "kraus"};
  }
  const std::vector<double> tspan = range_from_triple(node.at("tspan"));
  HamiltonianSpec ham = build_hamiltonian(node.at("hamiltonian"));
  ControlSpec ctrl = build_controls(node.get("controls"), tspan);
  std::vector<DecayChannel> decays = build_decays(node.get("decays"));
  const DynMethod method = node.has("method") ? method_from(node.at("method")) : DynMethod::Ode;
  OdeOptions ode;
  ode.atol = node.number_or("atol", ode.atol);
  ode.rtol = node.number_or("rtol", ode.rtol);
  LindbladSpec spec = at_path(node.path(), [&] {
    return LindbladSpec(std::move(ham), tspan, std::move(ctrl), std::move(decays), method, ode);
  });
  Measurement m = build_measurement(node.get("measurement"), probe.dim());
  Scheme s = at_path(node.path(), [&] { return make_general_scheme(probe, std::move(spec), m, prior); });
  return {std::move(s), "lindblad"};
}

EvaluateTask evaluate_task(const std::optional<Cfg>& node) {
  EvaluateTask t;
  if (!node) return t;
  node->allow_only({"quantities", "ld_type", "sld_eps", "weight", "final_only", "sdp_tol", "sdp_max_iter"});
  if (auto q = node->get("quantities")) {
    t.quantities.clear();
    for (std::size_t i = 0; i < q->size(); ++i) {
      const std::string name = lower((*q)[i].str());
      static const std::vector<std::string> known{"qfim", "cfim", "hcrb", "nhb", "vtb", "qvtb"};
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        (*q)[i].fail(fmt::format("unknown quantity '{}' (qfim, cfim, hcrb, nhb, vtb, qvtb)", name));
      }
      t.quantities.push_back(name);
    }
    if (t.quantities.empty()) q->fail("list at least one quantity");
  }
  if (auto ld = node->get("ld_type")) {
    const std::string v = lower(ld->str());
    if (v == "sld") {
      t.ld_type = LdType::SLD;
    } else if (v == "rld") {
      t.ld_type = LdType::RLD;
    } else if (v == "lld") {
      t.ld_type = LdType::LLD;
    } else {
      ld->fail(fmt::format("unknown logarithmic derivative '{}' (SLD, RLD or LLD)", v));
    }
  }
  t.sld.eps = node->number_or("sld_eps", t.sld.eps);
  at_path(node->path() + ".sld_eps", [&] { t.sld.validate(); });
  if (auto w = node->get("weight")) t.weight = w->rmatrix();
  t.final_only = node->boolean_or("final_only", false);
  t.sdp.tol = node->number_or("sdp_tol", t.sdp.tol);
  if (auto it = node->get("sdp_max_iter")) t.sdp.max_iter = static_cast<int>(it->count());
  return t;
}

OptimizeTask optimize_task(const std::optional<Cfg>& node, std::uint64_t seed) {
  OptimizeTask t;
  t.algorithm.seed = seed;
  if (!node) {
    t.scenario = opt::Scenario::control();
    t.objective = opt::default_objective(t.scenario);
    return t;
  }
  node->allow_only({"scenario", "comp", "measurement_type", "algorithm", "objective", "weight", "savefile",
                    "ctrl_bound", "ctrl", "psi", "lc_outcomes", "max_episode", "population", "inertia",
                    "cognitive", "social", "mutation", "crossover", "learning_rate", "finite_difference",
                    "stall_window", "stall_tol", "sld_eps"});
  const std::string scenario = lower(node->str_or("scenario", "control"));
  opt::MeasurementType mtype = opt::MeasurementType::Projection;
  if (auto m = node->get("measurement_type")) mtype = at_path(m->path(), [&] { return opt::measurement_type_from_name(m->str()); });
  if (scenario == "control") {
    t.scenario = opt::Scenario::control();
  } else if (scenario == "state") {
    t.scenario = opt::Scenario::state();
  } else if (scenario == "measurement") {
    t.scenario = opt::Scenario::measurement(mtype);
  } else if (scenario == "comp" || scenario == "comprehensive") {
    const Cfg c = node->at("comp");
    const opt::CompType ct = at_path(c.path(), [&] { return opt::comp_type_from_name(c.str()); });
    t.scenario = opt::Scenario::comprehensive(ct, mtype);
  } else {
    node->at("scenario").fail(fmt::format("unknown scenario '{}' (control, state, measurement, comp)", scenario));
  }
  if (auto b = node->get("ctrl_bound")) t.scenario.ctrl_bound = build_bounds(*b);
  if (auto c = node->get("ctrl")) {
    std::vector<std::vector<double>> amps;
    for (std::size_t k = 0; k < c->size(); ++k) amps.push_back((*c)[k].numbers());
    t.scenario.ctrl = std::move(amps);
  }
  if (auto p = node->get("psi")) t.scenario.psi = p->cvector();
  t.scenario.lc_outcomes = node->count_or("lc_outcomes", 0);

  opt::Algorithm& a = t.algorithm;
  if (auto k = node->get("algorithm")) a.kind = at_path(k->path(), [&] { return opt::algorithm_from_name(k->str()); });
  a.max_episode = node->count_or("max_episode", a.max_episode);
  a.population = node->count_or("population", a.population);
  a.inertia = node->number_or("inertia", a.inertia);
  a.cognitive = node->number_or("cognitive", a.cognitive);
  a.social = node->number_or("social", a.social);
  a.mutation = node->number_or("mutation", a.mutation);
  a.crossover = node->number_or("crossover", a.crossover);
  a.learning_rate = node->number_or("learning_rate", a.learning_rate);
  a.finite_difference = node->boolean_or("finite_difference", a.finite_difference);
  a.stall_window = node->count_or("stall_window", a.stall_window);
  a.stall_tol = node->number_or("stall_tol", a.stall_tol);
  at_path(node->path(), [&] { a.validate(); });

  t.objective = opt::default_objective(t.scenario);
  if (auto o = node->get("objective")) t.objective.kind = at_path(o->path(), [&] { return objective_kind_from_name(o->str()); });
  if (auto w = node->get("weight")) t.objective.weight = w->rmatrix();
  t.objective.sld.eps = node->number_or("sld_eps", t.objective.sld.eps);
  t.savefile = node->boolean_or("savefile", false);
  return t;
}

ErrorTask error_task(const std::optional<Cfg>& node) {
  ErrorTask t;
  if (!node) return t;
  node->allow_only({"mode", "input_error_scaling", "output_error_scaling", "objective", "sld_eps"});
  const std::string mode = lower(node->str_or("mode", "evaluation"));
  if (mode == "evaluation") {
    t.mode = error::Mode::Evaluation;
  } else if (mode == "control") {
    t.mode = error::Mode::Control;
  } else {
    node->at("mode").fail(fmt::format("unknown mode '{}' (evaluation or control)", mode));
  }
  t.input_error_scaling = node->number_or("input_error_scaling", t.input_error_scaling);
  t.output_error_scaling = node->number_or("output_error_scaling", t.output_error_scaling);
  if (auto o = node->get("objective")) {
    t.objective = at_path(o->path(), [&] { return objective_kind_from_name(o->str()); });
  }
  t.sld_eps = node->number_or("sld_eps", t.sld_eps);
  return t;
}

AdaptTask adapt_task(const std::optional<Cfg>& node, const std::filesystem::path& base_dir) {
  AdaptTask t;
  if (!node) throw ValidationError("adapt: missing required table (give true_value or outcomes)");
  node->allow_only({"method", "max_episode", "true_value", "outcomes", "offsets"});
  if (auto m = node->get("method")) t.method = at_path(m->path(), [&] { return adaptive::method_from_name(m->str()); });
  t.max_episode = node->count_or("max_episode", t.max_episode);
  if (node->has("true_value") == node->has("outcomes")) node->fail("give exactly one of true_value or outcomes");
  if (auto v = node->get("true_value")) t.true_value = v->number();
  if (auto o = node->get("outcomes")) {
    std::filesystem::path p = o->str();
    t.outcomes = p.is_absolute() ? p : base_dir / p;
  }
  if (auto u = node->get("offsets")) {
    const auto v = range_from_triple(*u);
    t.offsets = Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return t;
}

}  // namespace qestim::cli
