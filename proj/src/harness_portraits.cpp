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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "lindgauss/harness.hpp"

namespace lindgauss::harness {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::vector<double>> ring_of_starts(double radius, int count, double offset) {
  std::vector<std::vector<double>> out;
  for (int k = 0; k < count; ++k) {
    const double phi = offset + 2.0 * std::numbers::pi * k / count;
    out.push_back({radius * std::cos(phi), radius * std::sin(phi)});
  }
  return out;
}

PortraitConfig nonlinear_flow_defaults() {
  PortraitConfig c;
  c.portrait = "nonlinear_flow";
  c.figure = "Fig. 1";
  c.model.chart = "RealQP";
  c.model.H = "0";
  c.model.lindblads = {"sqrt(0.1)*(q^2 + i*p^2)"};
  c.field = {-2.0, 2.0, 21, -2.0, 2.0, 21};
  // Offset keeps every start off the invariant axes.
  c.starts = ring_of_starts(1.5, 12, std::numbers::pi / 12.0);
  c.t_end = 20.0;
  c.intervals = 200;
  c.ode = {1e-11, 1e-13};
  c.parameters = {{"escape_radius", 4.0}};
  c.tolerances = {{"ratio_drift", 1e-8}, {"axes_drift", 1e-15}};
  return c;
}

PortraitConfig limit_cycle_portrait_defaults() {
  PortraitConfig c;
  c.portrait = "limit_cycle";
  c.figure = "Fig. 2";
  c.model.chart = "ComplexAAbar";
  c.model.H = "a*abar - 0.5";
  c.model.lindblads = {"sqrt(0.1)*a", "sqrt(0.01)*a^2", "sqrt(0.15)*abar"};
  c.field = {-5.0, 5.0, 21, -5.0, 5.0, 21};
  c.starts = ring_of_starts(0.5, 4, 0.3);
  for (const auto& s : ring_of_starts(5.0, 4, 0.1)) c.starts.push_back(s);
  c.t_end = 400.0;
  c.intervals = 800;
  c.ode = {1e-10, 1e-12};
  c.parameters = {{"ring_abs_a_sq", 2.5}, {"escape_radius", 1e6}};
  c.tolerances = {{"ring", 1e-4}};
  return c;
}

PortraitConfig harmonic_defaults() {
  PortraitConfig c;
  c.portrait = "harmonic";
  c.figure = "none (circular flow)";
  c.model.chart = "RealQP";
  c.model.H = "(q^2 + p^2)/2";
  c.field = {-3.0, 3.0, 13, -3.0, 3.0, 13};
  c.starts = {{1.0, 0.0}, {2.0, 0.0}, {0.0, 2.5}};
  c.t_end = 4.0 * std::numbers::pi;
  c.intervals = 100;
  c.ode = {1e-11, 1e-13};
  c.parameters = {{"escape_radius", 1e6}};
  c.tolerances = {{"radius_drift", 1e-8}};
  return c;
}

}  // namespace

const std::vector<PortraitInfo>& portraits() {
  static const std::vector<PortraitInfo> registry = {
      {"nonlinear_flow", "Fig. 1", "Lindblad drift of L = sqrt(0.1)(q^2 + i p^2): straight rays through the origin.",
       nonlinear_flow_defaults},
      {"limit_cycle", "Fig. 2", "Loss, two-photon loss and gain: attracting ring at |a|^2 = 2.5.",
       limit_cycle_portrait_defaults},
      {"harmonic", "none (circular flow)", "Harmonic oscillator without dissipation.", harmonic_defaults},
  };
  return registry;
}

const PortraitInfo& find_portrait(const std::string& name) {
  for (const auto& p : portraits())
    if (p.name == name) return p;
  throw HarnessError("unknown portrait '" + name + "'");
}

RunReport run_portrait(const PortraitConfig& c, const fs::path& root) {
  const auto start = std::chrono::steady_clock::now();
  fs::path dir(c.output_dir);
  if (dir.is_relative()) dir = root / dir;
  dir = dir / "portraits" / c.portrait;
  fs::create_directories(dir);

  const LindbladModel model = c.model.build().in_chart(Chart::RealQP);
  const CompiledModel compiled(model);
  RunReport report;
  report.name = c.portrait;
  report.figure = c.figure;
  report.config = to_json(c);
  SolverRun run{"portrait", 0.0, {}, {"field.csv", "trajectories.csv"}};

  double axes_drift = 0.0;
  {
    std::ofstream out(dir / "field.csv", std::ios::binary);
    out << "q,p,dq,dp\n";
    for (int i = 0; i < c.field.nq; ++i) {
      for (int j = 0; j < c.field.np; ++j) {
        const Eigen::Vector2d X(c.field.q(i), c.field.p(j));
        const Eigen::VectorXd d = drift_X(compiled, X);
        out << num(X(0)) << "," << num(X(1)) << "," << num(d(0)) << "," << num(d(1)) << "\n";
        if (X(0) == 0.0) axes_drift = std::max(axes_drift, std::abs(d(0)));
        if (X(1) == 0.0) axes_drift = std::max(axes_drift, std::abs(d(1)));
      }
    }
  }

  const std::vector<double> times = time_grid(0.0, c.t_end, c.intervals);
  const double escape_radius = c.parameters.count("escape_radius") ? c.parameters.at("escape_radius") : 1e6;
  double ratio_drift = 0.0, radius_drift = 0.0, ring = 0.0;
  int escapes = 0;
  std::ofstream out(dir / "trajectories.csv", std::ios::binary);
  out << "id,t,q,p\n";
  for (size_t id = 0; id < c.starts.size(); ++id) {
    DormandPrince ode([&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = drift_X(compiled, y); },
                      c.ode.options());
    const Eigen::Vector2d x0(c.starts[id][0], c.starts[id][1]);
    ode.reset(times.front(), x0);
    bool escaped = false;
    for (double t : times) {
      // Some flows blow up in finite time; a trajectory stops once it leaves the escape radius.
      while (ode.t() < t && !escaped) {
        ode.step(t);
        escaped = ode.y().norm() > escape_radius;
      }
      if (escaped) break;
      const Eigen::VectorXd& y = ode.y();
      out << id << "," << num(t) << "," << num(y(0)) << "," << num(y(1)) << "\n";
      if (x0(0) != 0.0 && y(0) != 0.0)
        ratio_drift = std::max(ratio_drift, std::abs(y(1) / y(0) - x0(1) / x0(0)) / (1.0 + std::abs(x0(1) / x0(0))));
      radius_drift = std::max(radius_drift, std::abs(y.norm() - x0.norm()) / x0.norm());
    }
    if (escaped) {
      ++escapes;
      continue;
    }
    ring = std::max(ring, std::abs(ode.y().squaredNorm() / (2.0 * model.hbar) -
                                   (c.parameters.count("ring_abs_a_sq") ? c.parameters.at("ring_abs_a_sq") : 0.0)));
  }
  out.close();

  if (c.tolerances.count("ratio_drift"))
    report.checks.push_back(make_check("ratio_drift", ratio_drift, c.tolerance("ratio_drift"), "<=",
                                       "relative change of p/q along each trajectory"));
  if (c.tolerances.count("axes_drift"))
    report.checks.push_back(make_check("axes_drift", axes_drift, c.tolerance("axes_drift"), "<=",
                                       "drift normal to the axes on grid nodes"));
  if (c.tolerances.count("radius_drift"))
    report.checks.push_back(make_check("radius_drift", radius_drift, c.tolerance("radius_drift")));
  if (c.tolerances.count("ring"))
    report.checks.push_back(make_check("ring", ring, c.tolerance("ring"), "<=", "| |a|^2 - ring | at t_end"));

  report.diagnostics["escaped_trajectories"] = escapes;
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.runs.push_back(run);
  std::ofstream rep(dir / "report.json", std::ios::binary);
  rep << report.to_json().dump(2) << "\n";
  return report;
}

}  // namespace lindgauss::harness
