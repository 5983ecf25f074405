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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "lindgauss/harness.hpp"
#include "lindgauss/linalg.hpp"
#include "lindgauss/quantum.hpp"

namespace lindgauss::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_solver(const ExperimentConfig& c, const std::string& s) {
  return std::find(c.solvers.begin(), c.solvers.end(), s) != c.solvers.end();
}

// Observable curves sampled on a common time grid.
class Curves {
 public:
  explicit Curves(std::vector<double> times) : times_(std::move(times)) {}

  void set(const std::string& name, size_t k, double value, std::optional<double> se = std::nullopt) {
    if (!values_.count(name)) {
      names_.push_back(name);
      values_[name].assign(times_.size(), kNaN);
      errors_[name].assign(times_.size(), std::nullopt);
    }
    values_[name].at(k) = value;
    errors_[name].at(k) = se;
  }

  const std::vector<double>& operator[](const std::string& name) const { return values_.at(name); }
  const std::vector<std::optional<double>>& errors(const std::string& name) const { return errors_.at(name); }
  const std::vector<double>& times() const { return times_; }

  std::vector<ObservableRow> rows() const {
    std::vector<ObservableRow> out;
    for (size_t k = 0; k < times_.size(); ++k)
      for (const auto& n : names_) out.push_back({times_[k], n, values_.at(n)[k], errors_.at(n)[k]});
    return out;
  }

 private:
  std::vector<double> times_;
  std::vector<std::string> names_;
  std::map<std::string, std::vector<double>> values_;
  std::map<std::string, std::vector<std::optional<double>>> errors_;
};

fs::path experiment_dir(const ExperimentConfig& c, const fs::path& root) {
  fs::path out(c.output_dir);
  if (out.is_relative()) out = root / out;
  return out / c.experiment;
}

std::string frame_stem(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "wigner_t%g", t);
  return buf;
}

size_t index_of_time(const std::vector<double>& times, double t) {
  size_t best = 0;
  for (size_t k = 1; k < times.size(); ++k)
    if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
  return best;
}

// Single-mode observables shared by the Gaussian and density-matrix solvers.
void gaussian_observables(Curves& c, size_t k, const GaussianWigner& g) {
  const Eigen::MatrixXd S = 0.5 * g.hbar * g.G.inverse();
  const double q = g.X(0), p = g.X(1);
  c.set("q", k, q);
  c.set("p", k, p);
  c.set("var_q", k, S(0, 0));
  c.set("var_p", k, S(1, 1));
  c.set("cov_qp", k, S(0, 1));
  c.set("n", k, (S(0, 0) + S(1, 1) + q * q + p * p) / (2.0 * g.hbar) - 0.5);
  c.set("alpha", k, (S(0, 0) + S(1, 1)) / g.hbar);
  c.set("abs_a_sq", k, (q * q + p * p) / (2.0 * g.hbar));
}

struct SingleModeOps {
  SparseOp q, p, q2, p2, qp;
  explicit SingleModeOps(const FockSpace& space) {
    const SparseOp a = space.lowering(0);
    const SparseOp ad = SparseOp(a.adjoint());
    q = (a + ad) * Complex(1.0 / std::numbers::sqrt2, 0.0);
    p = (ad - a) * Complex(0.0, 1.0 / std::numbers::sqrt2);
    // Second moments from normal-ordered pieces, exact inside the truncation.
    const SparseOp aa = a * a;
    const SparseOp adad = ad * ad;
    const SparseOp ada = ad * a;
    SparseOp id(space.dimension(), space.dimension());
    id.setIdentity();
    q2 = (aa + adad + 2.0 * ada + id) * Complex(0.5, 0.0);
    p2 = (2.0 * ada + id - aa - adad) * Complex(0.5, 0.0);
    qp = (aa - adad) * Complex(0.0, -0.5);
  }
};

void density_observables(Curves& c, size_t k, const Eigen::MatrixXcd& rho, const SingleModeOps& ops) {
  const double q = expectation(rho, ops.q).real();
  const double p = expectation(rho, ops.p).real();
  const double vq = expectation(rho, ops.q2).real() - q * q;
  const double vp = expectation(rho, ops.p2).real() - p * p;
  c.set("q", k, q);
  c.set("p", k, p);
  c.set("var_q", k, vq);
  c.set("var_p", k, vp);
  c.set("cov_qp", k, expectation(rho, ops.qp).real() - q * p);
  c.set("n", k, (vq + vp + q * q + p * p) / 2.0 - 0.5);
  c.set("alpha", k, vq + vp);
  c.set("abs_a_sq", k, (q * q + p * p) / 2.0);
}

GaussianWigner initial_gaussian(const ExperimentConfig& c) {
  if (c.initial.kind != "coherent") throw HarnessError(c.experiment + ": needs a coherent initial state");
  Eigen::VectorXcd a0(c.model.num_modes);
  for (int j = 0; j < c.model.num_modes; ++j) a0[j] = c.initial.amplitudes[j];
  return coherent(c.model.num_modes, a0, c.model.hbar);
}

SuperpositionState initial_superposition(const ExperimentConfig& c) {
  if (c.initial.kind != "cat") throw HarnessError(c.experiment + ": needs a cat initial state");
  std::vector<Eigen::VectorXd> centres;
  for (const auto& p : c.initial.centres) centres.push_back(Eigen::Vector2d(p[0], p[1]));
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Constant(1, 1, c.initial.width);
  return cat_decompose(centres, c.initial.coefficients, A, c.model.hbar);
}

FockSpace fock_space(const ExperimentConfig& c) {
  std::vector<int> levels = c.truncation;
  if (levels.size() == 1 && c.model.num_modes > 1) levels.assign(c.model.num_modes, levels.front());
  if (static_cast<int>(levels.size()) != c.model.num_modes)
    throw HarnessError(c.experiment + ": truncation needs one entry per mode");
  return FockSpace(levels);
}

Eigen::VectorXcd initial_ket(const ExperimentConfig& c, const FockSpace& space) {
  if (c.model.hbar != 1.0) throw HarnessError(c.experiment + ": quantum solvers need hbar = 1");
  if (c.initial.kind == "coherent") {
    Eigen::VectorXcd a0(c.model.num_modes);
    for (int j = 0; j < c.model.num_modes; ++j) a0[j] = c.initial.amplitudes[j];
    return coherent_ket(space, a0);
  }
  // Packets of width A = i are coherent states up to the phase exp(-i p q / 2).
  if (std::abs(c.initial.width - Complex(0.0, 1.0)) > 0.0)
    throw HarnessError(c.experiment + ": quantum cat states need width [0, 1]");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(space.dimension());
  for (size_t j = 0; j < c.initial.centres.size(); ++j) {
    const double q = c.initial.centres[j][0], p = c.initial.centres[j][1];
    Eigen::VectorXcd a0 = Eigen::VectorXcd::Constant(1, Complex(q, p) / std::numbers::sqrt2);
    psi += c.initial.coefficients[j] * std::exp(Complex(0.0, -0.5 * p * q)) * coherent_ket(space, a0);
  }
  return psi / psi.norm();
}

void append_events(std::vector<Event>& to, const std::vector<Event>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

// Least-squares slope of v against t over [t0, t1].
double slope(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1) {
  double st = 0, sv = 0, stt = 0, stv = 0;
  int n = 0;
  for (size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t0 - 1e-12 || t[k] > t1 + 1e-12) continue;
    st += t[k];
    sv += v[k];
    stt += t[k] * t[k];
    stv += t[k] * v[k];
    ++n;
  }
  if (n < 2) throw HarnessError("slope: fewer than two samples in the window");
  return (n * stv - st * sv) / (n * stt - st * st);
}

double min_physicality(const SemiclassicalTrajectory& traj) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) m = std::min(m, s.min_eig_physicality);
  return m;
}

void master_checks(RunReport& report, const MasterRun& run) {
  report.checks.push_back(make_check("master_trace_error", run.max_trace_error, 1e-8));
  report.checks.push_back(make_check("master_hermiticity_error", run.max_hermiticity_error, 1e-10));
  report.checks.push_back(make_check("master_min_eigenvalue", run.min_eigenvalue, -1e-8, ">="));
  report.diagnostics["master_max_leakage"] = run.max_leakage;
}

void write_report(const RunReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "report.json", std::ios::binary);
  if (!out) throw HarnessError("cannot write " + (dir / "report.json").string());
  out << report.to_json().dump(2) << "\n";
}

// Runs the master equation, filling single-mode observables and frame grids.
MasterRun run_master_single_mode(const ExperimentConfig& c, const std::vector<double>& times, Curves& curves,
                                 std::map<double, WignerGrid>* frames) {
  FockSpace space = fock_space(c);
  QuantumModel ops = build_operators(c.model.build(), space);
  SingleModeOps obs(space);
  Eigen::VectorXcd psi = initial_ket(c, space);
  Eigen::MatrixXcd rho0 = psi * psi.adjoint();
  size_t k = 0;
  MasterRun run = integrate_master(rho0, ops, space, times, [&](double t, const Eigen::MatrixXcd& rho) {
    density_observables(curves, k, rho, obs);
    if (frames) {
      for (double f : c.time.frames)
        if (std::abs(f - t) < 1e-9) (*frames)[f] = wigner_of_density(rho, c.grid);
    }
    ++k;
  });
  return run;
}

SemiclassicalTrajectory run_semiclassical(const ExperimentConfig& c, const GaussianWigner& g0,
                                          const std::vector<double>& times) {
  return integrate(c.model.build().in_chart(Chart::RealQP), g0, times, c.ode.options());
}

// ---------------------------------------------------------------------------

ExperimentConfig damped_oscillator_defaults() {
  ExperimentConfig c;
  c.experiment = "damped_oscillator";
  c.figure = "none (exactness cross-check)";
  c.solvers = {"semiclassical", "master"};
  c.model.chart = "ComplexAAbar";
  c.model.H = "a*abar - 0.5";
  c.model.lindblads = {"sqrt(0.1)*a"};
  c.initial.amplitudes = {Complex(2.0, 0.0)};
  c.time = {0.0, 20.0, 200, {}};
  c.truncation = {40};
  c.ode = {1e-11, 1e-13};
  c.tolerances = {{"moment_sup", 1e-6}, {"physicality", -1e-9}};
  return c;
}

RunReport run_damped_oscillator(const ExperimentConfig& c, const fs::path& root) {
  const fs::path dir = experiment_dir(c, root);
  RunReport report;
  const std::vector<double> times = c.time.samples();
  Curves sc(times), qm(times);
  if (has_solver(c, "semiclassical")) {
    auto start = Clock::now();
    SemiclassicalTrajectory traj = run_semiclassical(c, initial_gaussian(c), times);
    for (size_t k = 0; k < times.size(); ++k) {
      GaussianWigner g{c.model.hbar, traj.states[k].X, traj.states[k].G};
      gaussian_observables(sc, k, g);
    }
    write_trajectory_csv(dir / "semiclassical" / "trajectory.csv", traj);
    write_observable_csv(dir / "semiclassical" / "observables.csv", sc.rows());
    report.runs.push_back({"semiclassical", seconds_since(start), traj.events,
                           {"semiclassical/trajectory.csv", "semiclassical/observables.csv"}});
    report.checks.push_back(make_check("physicality", min_physicality(traj), c.tolerance("physicality"), ">="));
  }
  if (has_solver(c, "master")) {
    auto start = Clock::now();
    MasterRun run = run_master_single_mode(c, times, qm, nullptr);
    write_observable_csv(dir / "master" / "observables.csv", qm.rows());
    report.runs.push_back({"master", seconds_since(start), run.events, {"master/observables.csv"}});
    master_checks(report, run);
  }
  if (has_solver(c, "semiclassical") && has_solver(c, "master")) {
    double worst = 0.0;
    for (const char* name : {"q", "p", "var_q", "var_p", "cov_qp"}) {
      for (size_t k = 0; k < times.size(); ++k) worst = std::max(worst, std::abs(sc[name][k] - qm[name][k]));
    }
    report.checks.push_back(make_check("moment_sup", worst, c.tolerance("moment_sup"), "<=",
                                       "max |semiclassical - master| over q, p and the covariance"));
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentConfig limit_cycle_defaults() {
  ExperimentConfig c;
  c.experiment = "limit_cycle";
  c.figure = "Fig. 3 (Wigner frames), Fig. 4 (alpha curve)";
  c.solvers = {"semiclassical", "master"};
  c.model.chart = "ComplexAAbar";
  c.model.H = "a*abar - 0.5";
  c.model.lindblads = {"sqrt(0.1)*a", "sqrt(0.01)*a^2", "sqrt(0.15)*abar"};
  c.initial.amplitudes = {Complex(4.0, 4.0) / std::numbers::sqrt2};
  c.time = {0.0, 300.0, 600, {13.0, 50.0, 150.0}};
  c.truncation = {40};
  c.ode = {1e-10, 1e-12};
  c.parameters = {{"radius_time", 500.0}, {"ring_abs_a_sq", 2.5}, {"early_t_max", 15.0},
                  {"slope_t0", 250.0},     {"slope_t1", 300.0}};
  c.tolerances = {{"radius", 1e-6}, {"alpha_early_rel", 0.1}, {"plateau_ratio", 0.05}, {"physicality", -1e-9}};
  return c;
}

RunReport run_limit_cycle(const ExperimentConfig& c, const fs::path& root) {
  const fs::path dir = experiment_dir(c, root);
  RunReport report;
  const std::vector<double> times = c.time.samples();
  Curves sc(times), qm(times);
  if (has_solver(c, "semiclassical")) {
    auto start = Clock::now();
    SemiclassicalTrajectory traj = run_semiclassical(c, initial_gaussian(c), times);
    SolverRun run{"semiclassical", 0.0, traj.events, {"semiclassical/trajectory.csv", "semiclassical/observables.csv"}};
    for (size_t k = 0; k < times.size(); ++k) {
      GaussianWigner g{c.model.hbar, traj.states[k].X, traj.states[k].G};
      gaussian_observables(sc, k, g);
    }
    for (double f : c.time.frames) {
      const auto& s = traj.states[index_of_time(times, f)];
      write_wigner(dir / "semiclassical" / frame_stem(f), eval_wigner(GaussianWigner{c.model.hbar, s.X, s.G}, c.grid));
      run.files.push_back("semiclassical/" + frame_stem(f) + ".txt");
    }
    write_trajectory_csv(dir / "semiclassical" / "trajectory.csv", traj);
    write_observable_csv(dir / "semiclassical" / "observables.csv", sc.rows());

    // The approach to the ring is checked on a separate long run.
    const double t_r = c.parameter("radius_time");
    SemiclassicalTrajectory longrun = run_semiclassical(c, initial_gaussian(c), {c.time.t0, t_r});
    const Eigen::VectorXd& X = longrun.states.back().X;
    const double r2 = X.squaredNorm() / (2.0 * c.model.hbar);
    report.checks.push_back(make_check("radius", std::abs(r2 - c.parameter("ring_abs_a_sq")), c.tolerance("radius"),
                                       "<=", "| |a|^2 - ring | at radius_time"));
    report.diagnostics["abs_a_sq_at_radius_time"] = r2;
    report.checks.push_back(make_check("physicality", std::min(min_physicality(traj), min_physicality(longrun)),
                                       c.tolerance("physicality"), ">="));
    append_events(run.events, longrun.events);
    run.seconds = seconds_since(start);
    report.runs.push_back(run);
  }
  if (has_solver(c, "master")) {
    auto start = Clock::now();
    std::map<double, WignerGrid> frames;
    MasterRun mrun = run_master_single_mode(c, times, qm, &frames);
    SolverRun run{"master", 0.0, mrun.events, {"master/observables.csv"}};
    write_observable_csv(dir / "master" / "observables.csv", qm.rows());
    for (const auto& [f, grid] : frames) {
      write_wigner(dir / "master" / frame_stem(f), grid);
      run.files.push_back("master/" + frame_stem(f) + ".txt");
    }
    run.seconds = seconds_since(start);
    report.runs.push_back(run);
    master_checks(report, mrun);
  }
  if (has_solver(c, "semiclassical") && has_solver(c, "master")) {
    double worst = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
      if (times[k] > c.parameter("early_t_max") + 1e-12) break;
      worst = std::max(worst, std::abs(sc["alpha"][k] - qm["alpha"][k]) / std::abs(qm["alpha"][k]));
    }
    report.checks.push_back(make_check("alpha_early_rel", worst, c.tolerance("alpha_early_rel"), "<=",
                                       "max relative alpha difference for t <= early_t_max"));
    const double t0 = c.parameter("slope_t0"), t1 = c.parameter("slope_t1");
    const double s_sc = slope(times, sc["alpha"], t0, t1);
    const double s_qm = slope(times, qm["alpha"], t0, t1);
    report.diagnostics["alpha_slope_semiclassical"] = s_sc;
    report.diagnostics["alpha_slope_master"] = s_qm;
    report.checks.push_back(make_check("alpha_slope_semiclassical", s_sc, 0.0, ">=",
                                       "semiclassical alpha keeps growing in the slope window"));
    report.checks.push_back(make_check("plateau_ratio", std::abs(s_qm) / std::abs(s_sc), c.tolerance("plateau_ratio"),
                                       "<=", "|quantum slope| / semiclassical slope"));
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentConfig bose_hubbard_defaults() {
  ExperimentConfig c;
  c.experiment = "bose_hubbard_losses";
  c.figure = "Fig. 5 (N, Sz), Fig. 6 (g1)";
  c.solvers = {"semiclassical", "jumps"};
  c.model.num_modes = 2;
  c.model.chart = "ComplexAAbar";
  // J = 1, U = 1 / N0 = 0.05, gamma = 0.05.
  c.model.H =
      "-(a1bar*a2 + a2bar*a1) + 0.025*(a1^2*a1bar^2 + a2^2*a2bar^2) - 0.05*(a1*a1bar + a2*a2bar) + 0.025";
  c.model.lindblads = {"sqrt(0.05)*a1^2", "sqrt(0.05)*a2^2"};
  // N0 = 20 split evenly, phases pi/2 and 0.
  c.initial.amplitudes = {Complex(0.0, std::sqrt(10.0)), Complex(std::sqrt(10.0), 0.0)};
  c.time = {0.0, 2.0, 20, {}};
  c.truncation = {32, 32};
  c.trajectories = 5000;
  c.seed = 20260417;
  c.ode = {1e-10, 1e-12};
  c.parameters = {{"check_t_max", 2.0}};
  c.tolerances = {{"stderr_multiple", 3.0},
                  {"truncation_floor", 1e-6},
                  {"g1_drop", 0.05},
                  {"monotone", 1e-12},
                  {"physicality", -1e-9}};
  return c;
}

RunReport run_bose_hubbard(const ExperimentConfig& c, const fs::path& root) {
  if (c.model.num_modes != 2) throw HarnessError("bose_hubbard_losses: needs two modes");
  const fs::path dir = experiment_dir(c, root);
  RunReport report;
  const std::vector<double> times = c.time.samples();
  Curves sc(times), qj(times);
  if (has_solver(c, "semiclassical")) {
    auto start = Clock::now();
    SemiclassicalTrajectory traj = run_semiclassical(c, initial_gaussian(c), times);
    for (size_t k = 0; k < times.size(); ++k) {
      GaussianWigner g{c.model.hbar, traj.states[k].X, traj.states[k].G};
      const Eigen::VectorXd& X = g.X;
      const double n1 = (X(0) * X(0) + X(2) * X(2)) / (2.0 * g.hbar);
      const double n2 = (X(1) * X(1) + X(3) * X(3)) / (2.0 * g.hbar);
      Moments m = moments(g);
      sc.set("N", k, n1 + n2);
      sc.set("Sz2", k, n1 - n2);
      sc.set("n1", k, n1);
      sc.set("n2", k, n2);
      sc.set("g1", k, g1(m.correlation, 0, 1));
      sc.set("N_cov", k, m.correlation(0, 0).real() + m.correlation(1, 1).real());
    }
    write_trajectory_csv(dir / "semiclassical" / "trajectory.csv", traj);
    write_observable_csv(dir / "semiclassical" / "observables.csv", sc.rows());
    report.runs.push_back({"semiclassical", seconds_since(start), traj.events,
                           {"semiclassical/trajectory.csv", "semiclassical/observables.csv"}});
    report.checks.push_back(make_check("physicality", min_physicality(traj), c.tolerance("physicality"), ">="));
  }
  if (has_solver(c, "jumps")) {
    auto start = Clock::now();
    FockSpace space = fock_space(c);
    QuantumModel ops = build_operators(c.model.build(), space);
    const SparseOp a1 = space.lowering(0), a2 = space.lowering(1);
    const SparseOp n1 = SparseOp(a1.adjoint()) * a1, n2 = SparseOp(a2.adjoint()) * a2;
    std::vector<JumpObservable> observables = {
        {"N", n1 + n2}, {"Sz2", n1 - n2}, {"n1", n1}, {"n2", n2}, {"c12", SparseOp(a1.adjoint()) * a2}};
    JumpOptions jopts;
    jopts.ode = c.ode.options();
    JumpEnsemble e = quantum_jump(ops, space, initial_ket(c, space), times, c.trajectories, c.seed, observables, jopts);
    for (size_t k = 0; k < times.size(); ++k) {
      for (const char* name : {"N", "Sz2", "n1", "n2"}) {
        const int o = e.index_of(name);
        qj.set(name, k, e.mean[o][k].real(), e.standard_error[o][k]);
      }
      const Complex c12 = e.mean[e.index_of("c12")][k];
      qj.set("c12_re", k, c12.real(), e.standard_error[e.index_of("c12")][k]);
      qj.set("c12_im", k, c12.imag(), e.standard_error[e.index_of("c12")][k]);
      qj.set("g1", k, std::abs(c12) / std::sqrt(qj["n1"][k] * qj["n2"][k]));
    }
    write_observable_csv(dir / "jumps" / "observables.csv", qj.rows());
    report.runs.push_back({"jumps", seconds_since(start), e.events, {"jumps/observables.csv"}});
    report.diagnostics["jumps_total"] = static_cast<double>(e.total_jumps);
    report.diagnostics["jumps_max_leakage"] = e.max_leakage;
  }
  const double t_max = c.parameter("check_t_max");
  auto monotone_violation = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (size_t k = 1; k < v.size(); ++k) worst = std::max(worst, v[k] - v[k - 1]);
    return worst;
  };
  auto g1_drop = [&](const Curves& cv) {
    double last = cv["g1"][0];
    for (size_t k = 0; k < times.size() && times[k] <= t_max + 1e-12; ++k) last = cv["g1"][k];
    return cv["g1"][0] - last;
  };
  if (has_solver(c, "semiclassical")) {
    report.checks.push_back(make_check("N_monotone_semiclassical", monotone_violation(sc["N"]), c.tolerance("monotone")));
    report.checks.push_back(make_check("g1_drop_semiclassical", g1_drop(sc), c.tolerance("g1_drop"), ">=",
                                       "g1 at t = 0 minus g1 at check_t_max"));
  }
  if (has_solver(c, "jumps")) {
    report.checks.push_back(make_check("N_monotone_jumps", monotone_violation(qj["N"]), c.tolerance("monotone")));
    report.checks.push_back(make_check("g1_drop_jumps", g1_drop(qj), c.tolerance("g1_drop"), ">="));
  }
  if (has_solver(c, "semiclassical") && has_solver(c, "jumps")) {
    for (const char* name : {"N", "Sz2"}) {
      double worst = 0.0;
      double worst_abs = 0.0;
      for (size_t k = 0; k < times.size() && times[k] <= t_max + 1e-12; ++k) {
        const double d = std::abs(sc[name][k] - qj[name][k]);
        const double se = qj.errors(name)[k].value_or(0.0);
        worst_abs = std::max(worst_abs, d);
        // Differences below the Fock truncation floor are not stochastic; this
        // matters before the first jump, where the spread is exactly zero.
        const double excess = d - c.tolerance("truncation_floor");
        if (excess > 0.0) worst = std::max(worst, se > 0.0 ? excess / se : std::numeric_limits<double>::infinity());
      }
      report.checks.push_back(make_check(std::string(name) + "_stderr_multiple", worst, c.tolerance("stderr_multiple"),
                                         "<=", "max (|semiclassical - jumps| - truncation_floor) / stderr for t <= check_t_max"));
      report.diagnostics[std::string(name) + "_max_abs_difference"] = worst_abs;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

ExperimentConfig cat_defaults() {
  ExperimentConfig c;
  c.experiment = "cat_anharmonic";
  c.figure = "Fig. 7 (Wigner frames), Fig. 8 (mean curves)";
  c.solvers = {"doubled", "master", "semiclassical"};
  c.model.chart = "RealQP";
  // beta = 0.1, gamma = 0.3.
  c.model.H = "(q^2 + p^2)/2 + 0.025*q^4";
  c.model.lindblads = {"sqrt(0.15)*(q + i*p)"};
  c.initial.kind = "cat";
  c.initial.centres = {{4.0, 3.0}, {4.0, -3.0}};
  c.initial.coefficients = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
  c.initial.width = Complex(0.0, 1.0);
  c.time = {0.0, 2.5, 50, {0.0, 0.5, 1.5, 2.5}};
  c.truncation = {60};
  c.ode = {1e-11, 1e-13};
  c.parameters = {{"rms_t_max", 1.0}, {"check_grid", 0.0}};
  c.tolerances = {{"mean_rms_rel", 0.05}, {"cross_weight_increase", 1e-12}, {"diagonal_Y", 1e-10},
                  {"diagonal_match", 1e-8}, {"grid_sup", 1e-5},            {"physicality", -1e-9}};
  return c;
}

RunReport run_cat(const ExperimentConfig& c, const fs::path& root) {
  const fs::path dir = experiment_dir(c, root);
  RunReport report;
  const std::vector<double> times = c.time.samples();
  const SuperpositionState cat = initial_superposition(c);
  const size_t m = c.initial.centres.size();
  Curves dbl(times), qm(times);
  std::map<double, WignerGrid> dbl_frames, qm_frames;
  SuperpositionSeries series;
  const LindbladModel real_model = c.model.build().in_chart(Chart::RealQP);

  if (has_solver(c, "doubled")) {
    auto start = Clock::now();
    series = propagate_superposition(real_model, cat, times, c.ode.options());
    SolverRun run{"doubled", 0.0, series.events, {"doubled/observables.csv", "doubled/norm.csv"}};
    for (size_t k = 0; k < times.size(); ++k) {
      Eigen::VectorXd mean = series.states[k].mean();
      dbl.set("q", k, mean(0));
      dbl.set("p", k, mean(1));
      dbl.set("raw_norm", k, series.raw_norms[k]);
    }
    write_observable_csv(dir / "doubled" / "observables.csv", dbl.rows());
    {
      std::vector<ObservableRow> rows;
      for (size_t k = 0; k < times.size(); ++k) rows.push_back({times[k], "raw_norm", series.raw_norms[k], {}});
      write_observable_csv(dir / "doubled" / "norm.csv", rows);
    }
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) {
        const std::string name = "component_" + std::to_string(i) + "_" + std::to_string(j) + ".csv";
        write_component_csv(dir / "doubled" / name, series.components[i * m + j]);
        run.files.push_back("doubled/" + name);
      }
    }
    for (double f : c.time.frames) {
      WignerGrid grid = eval_wigner(series.states[index_of_time(times, f)], c.grid);
      write_wigner(dir / "doubled" / frame_stem(f), grid);
      run.files.push_back("doubled/" + frame_stem(f) + ".txt");
      dbl_frames[f] = std::move(grid);
    }
    run.seconds = seconds_since(start);
    report.runs.push_back(run);
    report.diagnostics["raw_norm_initial"] = series.raw_norms.front();
    report.diagnostics["raw_norm_final"] = series.raw_norms.back();

    // Off-diagonal weights |w| exp(-Im alpha / hbar) must not grow.
    double worst = 0.0;
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const auto& samples = series.components[i * m + j].samples;
        auto weight = [&](const ComponentSample& s) {
          return std::abs(s.state.weight) * std::exp(-s.state.alpha.imag() / c.model.hbar);
        };
        const double w0 = weight(samples.front());
        for (size_t k = 1; k < samples.size(); ++k) {
          if (!samples[k].alive) break;
          worst = std::max(worst, (weight(samples[k]) - weight(samples[k - 1])) / w0);
        }
      }
    }
    report.checks.push_back(make_check("cross_weight_increase", worst, c.tolerance("cross_weight_increase"), "<=",
                                       "largest relative step increase of |w| exp(-Im alpha / hbar)"));
    double max_y = 0.0;
    for (size_t j = 0; j < m; ++j)
      for (const auto& s : series.components[j * m + j].samples) max_y = std::max(max_y, s.state.Y.cwiseAbs().maxCoeff());
    report.checks.push_back(make_check("diagonal_Y", max_y, c.tolerance("diagonal_Y")));
  }
  if (has_solver(c, "semiclassical")) {
    auto start = Clock::now();
    SolverRun run{"semiclassical", 0.0, {}, {}};
    double worst = 0.0, phys = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < m; ++j) {
      const ComplexGaussian& d = cat.components[j * m + j];
      GaussianWigner g0{c.model.hbar, d.X, (d.B / Complex(0.0, 2.0)).real()};
      SemiclassicalTrajectory traj = integrate(real_model, g0, times, c.ode.options());
      const std::string name = "trajectory_" + std::to_string(j) + ".csv";
      write_trajectory_csv(dir / "semiclassical" / name, traj);
      run.files.push_back("semiclassical/" + name);
      append_events(run.events, traj.events);
      phys = std::min(phys, min_physicality(traj));
      if (has_solver(c, "doubled")) {
        const auto& samples = series.components[j * m + j].samples;
        for (size_t k = 0; k < times.size(); ++k) {
          const ComplexGaussian& s = samples[k].state;
          worst = std::max(worst, (s.X - traj.states[k].X).cwiseAbs().maxCoeff());
          worst = std::max(worst, (s.B / Complex(0.0, 2.0) - traj.states[k].G.cast<Complex>()).cwiseAbs().maxCoeff());
        }
      }
    }
    run.seconds = seconds_since(start);
    report.runs.push_back(run);
    report.checks.push_back(make_check("physicality", phys, c.tolerance("physicality"), ">="));
    if (has_solver(c, "doubled"))
      report.checks.push_back(make_check("diagonal_match", worst, c.tolerance("diagonal_match"), "<=",
                                         "max |(X, G) doubled diagonal - semiclassical|"));
  }
  if (has_solver(c, "master")) {
    auto start = Clock::now();
    MasterRun mrun = run_master_single_mode(c, times, qm, &qm_frames);
    SolverRun run{"master", 0.0, mrun.events, {"master/observables.csv"}};
    write_observable_csv(dir / "master" / "observables.csv", qm.rows());
    for (const auto& [f, grid] : qm_frames) {
      write_wigner(dir / "master" / frame_stem(f), grid);
      run.files.push_back("master/" + frame_stem(f) + ".txt");
    }
    run.seconds = seconds_since(start);
    report.runs.push_back(run);
    master_checks(report, mrun);
  }
  if (has_solver(c, "doubled") && has_solver(c, "master")) {
    const double t_max = c.parameter("rms_t_max");
    for (const char* name : {"q", "p"}) {
      double se = 0.0, sq = 0.0;
      for (size_t k = 0; k < times.size() && times[k] <= t_max + 1e-12; ++k) {
        se += std::pow(dbl[name][k] - qm[name][k], 2);
        sq += std::pow(qm[name][k], 2);
      }
      report.checks.push_back(make_check(std::string("mean_rms_rel_") + name, std::sqrt(se / sq),
                                         c.tolerance("mean_rms_rel"), "<=",
                                         "RMS(doubled - master) / RMS(master) for t <= rms_t_max"));
    }
    if (c.parameter("check_grid") != 0.0) {
      double worst = 0.0;
      for (const auto& [f, grid] : dbl_frames)
        worst = std::max(worst, (grid.values - qm_frames.at(f).values).cwiseAbs().maxCoeff());
      report.checks.push_back(make_check("grid_sup", worst, c.tolerance("grid_sup"), "<=",
                                         "max |W doubled - W master| over all frames"));
    }
  }
  return report;
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> registry = {
      {"damped_oscillator", "none (exactness cross-check)",
       "Quadratic H and linear L: semiclassical moments against the master equation.", damped_oscillator_defaults,
       run_damped_oscillator},
      {"limit_cycle", "Fig. 3, Fig. 4",
       "Oscillator with linear and two-photon loss and gain: Wigner frames and the alpha covariance curve.",
       limit_cycle_defaults, run_limit_cycle},
      {"bose_hubbard_losses", "Fig. 5, Fig. 6",
       "Two-site Bose-Hubbard dimer with two-body losses: mean-field against quantum jumps.", bose_hubbard_defaults,
       run_bose_hubbard},
      {"cat_anharmonic", "Fig. 7, Fig. 8",
       "Damped anharmonic oscillator from a cat state: doubled-space superposition against the master equation.",
       cat_defaults, run_cat},
  };
  return registry;
}

const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  throw HarnessError("unknown experiment '" + name + "'");
}

RunReport run_experiment(const ExperimentConfig& config, const fs::path& root) {
  const ExperimentInfo& info = find_experiment(config.experiment);
  RunReport report;
  try {
    report = info.run(config, root);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw HarnessError(config.experiment + ": " + e.what());
  }
  report.name = config.experiment;
  report.figure = config.figure;
  report.config = to_json(config);
  write_report(report, experiment_dir(config, root));
  return report;
}

}  // namespace lindgauss::harness
