// Copyright 2026 The lindgauss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <set>

#include "lindgauss/harness.hpp"

namespace lindgauss::harness {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + ": expected a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<Complex> out;
  for (size_t k = 0; k < j.size(); ++k) out.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::vector<double>> point_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<std::vector<double>> out;
  for (size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array()) throw ConfigError(at + ": expected an array of numbers");
    std::vector<double> row;
    for (const auto& v : j[k]) row.push_back(get_number(v, at));
    out.push_back(std::move(row));
  }
  return out;
}

// Overlays entries of j onto m; names outside the defaults are rejected.
void overlay_map(std::map<std::string, double>& m, const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!m.count(key)) throw ConfigError(where + ": unknown name '" + key + "'");
    m[key] = get_number(value, where + "." + key);
  }
}

json model_to_json(const ModelSpec& m) {
  return {{"num_modes", m.num_modes}, {"hbar", m.hbar}, {"chart", m.chart}, {"H", m.H}, {"lindblads", m.lindblads}};
}

void overlay_model(ModelSpec& m, const json& j) {
  check_keys(j, {"num_modes", "hbar", "chart", "H", "lindblads"}, "model");
  if (j.contains("num_modes")) m.num_modes = get_int(j["num_modes"], "model.num_modes");
  if (j.contains("hbar")) m.hbar = get_number(j["hbar"], "model.hbar");
  if (j.contains("chart")) m.chart = get_string(j["chart"], "model.chart");
  if (j.contains("H")) m.H = get_string(j["H"], "model.H");
  if (j.contains("lindblads")) {
    if (!j["lindblads"].is_array()) throw ConfigError("model.lindblads: expected an array of strings");
    m.lindblads.clear();
    for (const auto& l : j["lindblads"]) m.lindblads.push_back(get_string(l, "model.lindblads"));
  }
}

json grid_to_json(const GridSpec& g) {
  return {{"qmin", g.qmin}, {"qmax", g.qmax}, {"nq", g.nq}, {"pmin", g.pmin}, {"pmax", g.pmax}, {"np", g.np}};
}

void overlay_grid(GridSpec& g, const json& j, const std::string& where) {
  check_keys(j, {"qmin", "qmax", "nq", "pmin", "pmax", "np"}, where);
  if (j.contains("qmin")) g.qmin = get_number(j["qmin"], where + ".qmin");
  if (j.contains("qmax")) g.qmax = get_number(j["qmax"], where + ".qmax");
  if (j.contains("nq")) g.nq = get_int(j["nq"], where + ".nq");
  if (j.contains("pmin")) g.pmin = get_number(j["pmin"], where + ".pmin");
  if (j.contains("pmax")) g.pmax = get_number(j["pmax"], where + ".pmax");
  if (j.contains("np")) g.np = get_int(j["np"], where + ".np");
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json ode_to_json(const OdeSpec& o) { return {{"rtol", o.rtol}, {"atol", o.atol}}; }

void overlay_ode(OdeSpec& o, const json& j) {
  check_keys(j, {"rtol", "atol"}, "ode");
  if (j.contains("rtol")) o.rtol = get_number(j["rtol"], "ode.rtol");
  if (j.contains("atol")) o.atol = get_number(j["atol"], "ode.atol");
  if (!(o.rtol > 0.0) || !(o.atol > 0.0)) throw ConfigError("ode: tolerances must be positive");
}

void validate_model(const ModelSpec& m) {
  try {
    m.build();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

}  // namespace

LindbladModel ModelSpec::build() const {
  Chart chart;
  if (this->chart == "RealQP") {
    chart = Chart::RealQP;
  } else if (this->chart == "ComplexAAbar") {
    chart = Chart::ComplexAAbar;
  } else {
    throw ConfigError("model.chart must be RealQP or ComplexAAbar, got '" + this->chart + "'");
  }
  if (num_modes <= 0) throw ConfigError("model.num_modes must be positive");
  if (!(hbar > 0.0)) throw ConfigError("model.hbar must be positive");
  LindbladModel model{num_modes, hbar, parse_symbol(H, chart, num_modes), {}};
  for (const auto& l : lindblads) model.lindblads.push_back(parse_symbol(l, chart, num_modes));
  model.validate();
  return model;
}

std::vector<double> TimeSpec::samples() const {
  std::vector<double> t = time_grid(t0, t_end, intervals);
  for (double f : frames) {
    if (f < t0 || f > t_end) throw ConfigError("time.frames: frame " + std::to_string(f) + " outside [t0, t_end]");
    t.push_back(f);
  }
  std::sort(t.begin(), t.end());
  // Frames that coincide with grid points up to rounding are merged.
  std::vector<double> out;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end - t0));
  for (double v : t) {
    if (out.empty() || v - out.back() > eps) out.push_back(v);
  }
  return out;
}

OdeOptions OdeSpec::options() const {
  OdeOptions o;
  o.rtol = rtol;
  o.atol = atol;
  return o;
}

double ExperimentConfig::parameter(const std::string& name) const {
  auto it = parameters.find(name);
  if (it == parameters.end()) throw ConfigError(experiment + ": missing parameter '" + name + "'");
  return it->second;
}

double ExperimentConfig::tolerance(const std::string& name) const {
  auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError(experiment + ": missing tolerance '" + name + "'");
  return it->second;
}

double PortraitConfig::tolerance(const std::string& name) const {
  auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError(portrait + ": missing tolerance '" + name + "'");
  return it->second;
}

json to_json(const ExperimentConfig& c) {
  json initial = {{"kind", c.initial.kind}, {"width", complex_to_json(c.initial.width)}};
  initial["amplitudes"] = json::array();
  for (Complex a : c.initial.amplitudes) initial["amplitudes"].push_back(complex_to_json(a));
  initial["centres"] = c.initial.centres;
  initial["coefficients"] = json::array();
  for (Complex a : c.initial.coefficients) initial["coefficients"].push_back(complex_to_json(a));
  return {{"experiment", c.experiment},
          {"figure", c.figure},
          {"output_dir", c.output_dir},
          {"seed", c.seed},
          {"solvers", c.solvers},
          {"model", model_to_json(c.model)},
          {"initial", initial},
          {"time", {{"t0", c.time.t0}, {"t_end", c.time.t_end}, {"intervals", c.time.intervals}, {"frames", c.time.frames}}},
          {"grid", grid_to_json(c.grid)},
          {"truncation", c.truncation},
          {"trajectories", c.trajectories},
          {"ode", ode_to_json(c.ode)},
          {"parameters", c.parameters},
          {"tolerances", c.tolerances}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  check_keys(j, {"experiment", "figure", "output_dir", "seed", "solvers", "model", "initial", "time", "grid",
                 "truncation", "trajectories", "ode", "parameters", "tolerances"},
             "config");
  if (!j.contains("experiment")) throw ConfigError("config: missing key 'experiment'");
  const std::string name = get_string(j["experiment"], "experiment");
  ExperimentConfig c;
  try {
    c = find_experiment(name).defaults();
  } catch (const HarnessError& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("figure")) c.figure = get_string(j["figure"], "figure");
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "output_dir");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      throw ConfigError("seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("solvers")) {
    const std::vector<std::string> allowed = c.solvers;
    if (!j["solvers"].is_array()) throw ConfigError("solvers: expected an array");
    c.solvers.clear();
    for (const auto& s : j["solvers"]) {
      std::string v = get_string(s, "solvers");
      if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
        throw ConfigError("solvers: '" + v + "' is not available for " + name);
      c.solvers.push_back(v);
    }
  }
  if (j.contains("model")) overlay_model(c.model, j["model"]);
  if (j.contains("initial")) {
    const json& ji = j["initial"];
    check_keys(ji, {"kind", "amplitudes", "centres", "coefficients", "width"}, "initial");
    if (ji.contains("kind")) c.initial.kind = get_string(ji["kind"], "initial.kind");
    if (ji.contains("amplitudes")) c.initial.amplitudes = complex_list(ji["amplitudes"], "initial.amplitudes");
    if (ji.contains("centres")) c.initial.centres = point_list(ji["centres"], "initial.centres");
    if (ji.contains("coefficients")) c.initial.coefficients = complex_list(ji["coefficients"], "initial.coefficients");
    if (ji.contains("width")) c.initial.width = complex_from_json(ji["width"], "initial.width");
  }
  if (j.contains("time")) {
    const json& jt = j["time"];
    check_keys(jt, {"t0", "t_end", "intervals", "frames"}, "time");
    if (jt.contains("t0")) c.time.t0 = get_number(jt["t0"], "time.t0");
    if (jt.contains("t_end")) c.time.t_end = get_number(jt["t_end"], "time.t_end");
    if (jt.contains("intervals")) c.time.intervals = get_int(jt["intervals"], "time.intervals");
    if (jt.contains("frames")) {
      if (!jt["frames"].is_array()) throw ConfigError("time.frames: expected an array");
      c.time.frames.clear();
      for (const auto& f : jt["frames"]) c.time.frames.push_back(get_number(f, "time.frames"));
    }
  }
  if (j.contains("grid")) overlay_grid(c.grid, j["grid"], "grid");
  if (j.contains("truncation")) c.truncation = get_as<std::vector<int>>(j["truncation"], "truncation");
  if (j.contains("trajectories")) c.trajectories = get_int(j["trajectories"], "trajectories");
  if (j.contains("ode")) overlay_ode(c.ode, j["ode"]);
  if (j.contains("parameters")) overlay_map(c.parameters, j["parameters"], "parameters");
  if (j.contains("tolerances")) overlay_map(c.tolerances, j["tolerances"], "tolerances");

  if (!(c.time.t_end > c.time.t0) || c.time.intervals <= 0)
    throw ConfigError("time: need t_end > t0 and intervals > 0");
  c.time.samples();
  if (c.initial.kind != "coherent" && c.initial.kind != "cat")
    throw ConfigError("initial.kind must be coherent or cat");
  if (c.initial.kind == "coherent" && static_cast<int>(c.initial.amplitudes.size()) != c.model.num_modes)
    throw ConfigError("initial.amplitudes: need one amplitude per mode");
  if (c.initial.kind == "cat") {
    if (c.model.num_modes != 1) throw ConfigError("initial: cat states are single-mode");
    if (c.initial.centres.empty() || c.initial.centres.size() != c.initial.coefficients.size())
      throw ConfigError("initial: need matching centres and coefficients");
    for (const auto& p : c.initial.centres)
      if (p.size() != 2) throw ConfigError("initial.centres: each centre is [q, p]");
    if (!(c.initial.width.imag() > 0.0)) throw ConfigError("initial.width: imaginary part must be positive");
  }
  for (int n : c.truncation)
    if (n < 1) throw ConfigError("truncation: levels must be positive");
  if (c.trajectories < 0) throw ConfigError("trajectories: must be non-negative");
  validate_model(c.model);
  return c;
}

json to_json(const PortraitConfig& c) {
  return {{"portrait", c.portrait},
          {"figure", c.figure},
          {"output_dir", c.output_dir},
          {"model", model_to_json(c.model)},
          {"field", grid_to_json(c.field)},
          {"starts", c.starts},
          {"t_end", c.t_end},
          {"intervals", c.intervals},
          {"ode", ode_to_json(c.ode)},
          {"parameters", c.parameters},
          {"tolerances", c.tolerances}};
}

PortraitConfig portrait_config_from_json(const json& j) {
  check_keys(j, {"portrait", "figure", "output_dir", "model", "field", "starts", "t_end", "intervals", "ode",
                 "parameters", "tolerances"},
             "portrait config");
  if (!j.contains("portrait")) throw ConfigError("portrait config: missing key 'portrait'");
  PortraitConfig c;
  try {
    c = find_portrait(get_string(j["portrait"], "portrait")).defaults();
  } catch (const HarnessError& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("figure")) c.figure = get_string(j["figure"], "figure");
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "output_dir");
  if (j.contains("model")) overlay_model(c.model, j["model"]);
  if (j.contains("field")) overlay_grid(c.field, j["field"], "field");
  if (j.contains("starts")) c.starts = point_list(j["starts"], "starts");
  if (j.contains("t_end")) c.t_end = get_number(j["t_end"], "t_end");
  if (j.contains("intervals")) c.intervals = get_int(j["intervals"], "intervals");
  if (j.contains("ode")) overlay_ode(c.ode, j["ode"]);
  if (j.contains("parameters")) overlay_map(c.parameters, j["parameters"], "parameters");
  if (j.contains("tolerances")) overlay_map(c.tolerances, j["tolerances"], "tolerances");
  if (c.model.num_modes != 1) throw ConfigError("portraits are single-mode");
  if (!(c.t_end > 0.0) || c.intervals <= 0) throw ConfigError("need t_end > 0 and intervals > 0");
  for (const auto& s : c.starts)
    if (s.size() != 2) throw ConfigError("starts: each start is [q, p]");
  validate_model(c.model);
  return c;
}

Check make_check(const std::string& name, double value, double tolerance, const std::string& relation,
                 const std::string& detail) {
  Check c{name, value, tolerance, relation, false, detail};
  if (relation == "<=") {
    c.pass = value <= tolerance;
  } else if (relation == ">=") {
    c.pass = value >= tolerance;
  } else {
    throw HarnessError("make_check: unknown relation " + relation);
  }
  if (std::isnan(value)) c.pass = false;
  return c;
}

bool RunReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* RunReport::find(const std::string& check_name) const {
  for (const auto& c : checks)
    if (c.name == check_name) return &c;
  return nullptr;
}

json RunReport::to_json() const {
  json j = {{"name", name}, {"figure", figure}, {"pass", pass()}, {"config", config}};
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", std::isfinite(c.value) ? json(c.value) : json(std::to_string(c.value))},
                           {"tolerance", c.tolerance},
                           {"relation", c.relation},
                           {"pass", c.pass},
                           {"detail", c.detail}});
  }
  j["runs"] = json::array();
  for (const auto& r : runs) {
    json events = json::array();
    for (const auto& e : r.events) events.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}});
    j["runs"].push_back({{"solver", r.solver}, {"seconds", r.seconds}, {"events", events}, {"files", r.files}});
  }
  j["diagnostics"] = json::object();
  for (const auto& [k, v] : diagnostics) j["diagnostics"][k] = std::isfinite(v) ? json(v) : json(std::to_string(v));
  return j;
}

}  // namespace lindgauss::harness
