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

// Acceptance suite. Each criterion prints one PASS/FAIL line with its runtime.
// Usage: lindgauss_acceptance <c01..c12|all> [--root DIR]

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "../oracles.hpp"
#include "lindgauss/doubled.hpp"
#include "lindgauss/harness.hpp"
#include "lindgauss/semiclassical.hpp"
#include "lindgauss/symbols.hpp"

namespace {

using namespace lindgauss;
namespace h = lindgauss::harness;
namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void add(const std::string& name, double value, double tolerance, const std::string& relation) {
    add(h::make_check(name, value, tolerance, relation));
  }
  void add(const h::Check& c) {
    pass = pass && c.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %s %s = %.6g (%s %.6g)", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.value,
                  c.relation.c_str(), c.tolerance);
    lines.emplace_back(buf);
  }
  void fail(const std::string& why) {
    pass = false;
    lines.push_back("  FAIL " + why);
  }
};

fs::path g_root;

h::RunReport run(const json& overrides) {
  h::ExperimentConfig c = h::experiment_config_from_json(overrides);
  return h::run_experiment(c, g_root);
}

// Copies the named checks of a report; a missing check is a failure.
void take(Outcome& o, const h::RunReport& r, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    const h::Check* c = r.find(n);
    if (c == nullptr) {
      o.fail(r.name + ": missing check " + n);
      continue;
    }
    h::Check copy = *c;
    copy.name = r.name + "." + n;
    o.add(copy);
  }
}

void take_prefix(Outcome& o, const h::RunReport& r, const std::string& prefix) {
  for (const auto& c : r.checks) {
    if (c.name.rfind(prefix, 0) != 0) continue;
    h::Check copy = c;
    copy.name = r.name + "." + c.name;
    o.add(copy);
  }
}

// ---------------------------------------------------------------------------

Outcome c01() {
  Outcome o;
  h::RunReport r = run({{"experiment", "damped_oscillator"}, {"output_dir", "c01"}});
  take(o, r, {"moment_sup", "physicality"});
  take_prefix(o, r, "master_");
  return o;
}

Outcome c02() {
  Outcome o;
  h::RunReport r = run({{"experiment", "limit_cycle"}, {"output_dir", "c02"}, {"solvers", {"semiclassical"}}});
  take(o, r, {"radius"});
  return o;
}

Outcome c03() {
  Outcome o;
  h::RunReport r = run({{"experiment", "limit_cycle"}, {"output_dir", "c03"}});
  take(o, r, {"alpha_early_rel", "alpha_slope_semiclassical", "plateau_ratio"});
  take_prefix(o, r, "master_");
  return o;
}

// L = f(q + s i p) for a random complex polynomial f of degree <= 4. The
// expected drift -s/2 grad|f|^2 uses grad|f|^2 = 2 (Re(conj f f'), -s Im(conj f f')).
Outcome c04() {
  Outcome o;
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> degree(1, 4);
  double worst = 0.0;
  int misclassified = 0;
  for (int k = 0; k < 20; ++k) {
    const int s = k % 2 == 0 ? 1 : -1;
    const PolySymbol z = parse_symbol(s > 0 ? "q + i*p" : "q - i*p", Chart::RealQP, 1);
    const int d = degree(rng);
    std::vector<Complex> coef(d + 1);
    for (auto& c : coef) c = Complex(u(rng), u(rng));
    PolySymbol L = PolySymbol::constant(Chart::RealQP, 1, coef[0]);
    PolySymbol power = PolySymbol::constant(Chart::RealQP, 1, 1.0);
    for (int j = 1; j <= d; ++j) {
      power = power * z;
      L = L + coef[j] * power;
    }
    const FlowClass fc = classify_flow(L);
    if (fc.kind != FlowKind::GradientHolomorphic || fc.sign != -s) ++misclassified;

    LindbladModel m;
    m.H = PolySymbol::constant(Chart::RealQP, 1, 0.0);
    m.lindblads = {L};
    const CompiledModel compiled(m);
    for (int n = 0; n < 100; ++n) {
      const double q = 2.0 * u(rng), p = 2.0 * u(rng);
      const Complex w(q, s * p);
      Complex f = 0.0, df = 0.0;
      for (int j = d; j >= 0; --j) {
        df = df * w + f;
        f = f * w + coef[j];
      }
      const Complex prod = std::conj(f) * df;
      const Eigen::Vector2d expected = -static_cast<double>(s) * Eigen::Vector2d(prod.real(), -s * prod.imag());
      const Eigen::VectorXd got = drift_X(compiled, Eigen::Vector2d(q, p));
      worst = std::max(worst, (got - expected).norm() / expected.norm());
    }
  }
  o.add("misclassified", misclassified, 0.0, "<=");
  o.add("max_relative_error", worst, 1e-12, "<=");
  return o;
}

Outcome c05() {
  Outcome o;
  LindbladModel m;
  m.H = PolySymbol::constant(Chart::RealQP, 1, 0.0);
  m.lindblads = {parse_symbol("sqrt(0.1)*(q^2 + i*p^2)", Chart::RealQP, 1)};
  const std::vector<PolySymbol> drift = lindblad_drift_symbolic(m);
  const PolySymbol eq = parse_symbol("-0.2*q^2*p", Chart::RealQP, 1);
  const PolySymbol ep = parse_symbol("-0.2*q*p^2", Chart::RealQP, 1);
  o.add("coefficient_difference_q", max_coefficient_difference(drift.at(0), eq), 1e-15, "<=");
  o.add("coefficient_difference_p", max_coefficient_difference(drift.at(1), ep), 1e-15, "<=");
  return o;
}

Outcome c06() {
  Outcome o;
  const std::vector<json> runs = {
      {{"experiment", "damped_oscillator"}, {"output_dir", "c06"}, {"solvers", {"semiclassical"}}},
      {{"experiment", "limit_cycle"}, {"output_dir", "c06"}, {"solvers", {"semiclassical"}}},
      {{"experiment", "bose_hubbard_losses"}, {"output_dir", "c06"}, {"solvers", {"semiclassical"}}},
      {{"experiment", "cat_anharmonic"}, {"output_dir", "c06"}, {"solvers", {"doubled", "semiclassical"}}},
  };
  for (const auto& j : runs) take(o, run(j), {"physicality"});
  return o;
}

Outcome c07() {
  Outcome o;
  h::RunReport r = run({{"experiment", "cat_anharmonic"}, {"output_dir", "c07"}, {"solvers", {"doubled", "semiclassical"}}});
  take(o, r, {"diagonal_Y", "diagonal_match"});
  return o;
}

Outcome c08() {
  Outcome o;
  h::RunReport r = run({{"experiment", "cat_anharmonic"},
                        {"output_dir", "c08"},
                        {"solvers", {"doubled", "master"}},
                        {"model", {{"H", "(q^2 + p^2)/2"}}},
                        {"grid", {{"qmin", -8.0}, {"qmax", 8.0}, {"nq", 200}, {"pmin", -8.0}, {"pmax", 8.0}, {"np", 200}}},
                        {"parameters", {{"check_grid", 1.0}}}});
  take(o, r, {"grid_sup"});
  take_prefix(o, r, "master_");
  return o;
}

Outcome c09() {
  Outcome o;
  h::RunReport r = run({{"experiment", "cat_anharmonic"}, {"output_dir", "c09"}, {"solvers", {"doubled", "master"}}});
  take(o, r, {"mean_rms_rel_q", "mean_rms_rel_p", "cross_weight_increase"});
  take_prefix(o, r, "master_");
  return o;
}

// Random quadratic H and homogeneous linear L.
Outcome c10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto vec = [&](int dim, double scale) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = scale * u(rng);
    return v;
  };
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 2;
    const int dim = 2 * n;
    LindbladModel m;
    m.num_modes = n;
    m.H = PolySymbol::constant(Chart::RealQP, n, 0.0);
    for (int i = 0; i < dim; ++i) {
      m.H = m.H + PolySymbol::variable(Chart::RealQP, n, i, u(rng));
      for (int j = i; j < dim; ++j)
        m.H = m.H + Complex(u(rng)) * PolySymbol::variable(Chart::RealQP, n, i) * PolySymbol::variable(Chart::RealQP, n, j);
    }
    for (int c = 0; c < 2; ++c) {
      PolySymbol L = PolySymbol::constant(Chart::RealQP, n, 0.0);
      for (int i = 0; i < dim; ++i) L = L + PolySymbol::variable(Chart::RealQP, n, i, Complex(u(rng), u(rng)));
      m.lindblads.push_back(L);
    }
    CompiledDoubled K(build_K(m), m.hbar);
    Eigen::MatrixXd re = vec(dim * dim, 0.5).reshaped(dim, dim);
    re = 0.5 * (re + re.transpose()).eval();
    Eigen::MatrixXd a = 0.4 * Eigen::MatrixXd(vec(dim * dim, 1.0).reshaped(dim, dim));
    Eigen::MatrixXd im = 2.0 * (a * a.transpose() + Eigen::MatrixXd::Identity(dim, dim));
    Eigen::MatrixXcd B = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
    ComplexGaussian comp;
    comp.X = vec(dim, 1.0);
    comp.Y = vec(dim, 1.0);
    comp.B = B;
    ChordRates via = chord_rates_from_component(comp, rhs_component(K, comp));
    ChordRates direct = chord_rhs(m, chord_from_component(comp));
    worst = std::max({worst, (direct.Xdot - via.Xdot).cwiseAbs().maxCoeff(),
                      (direct.Ydot - via.Ydot).cwiseAbs().maxCoeff(), (direct.Mdot - via.Mdot).cwiseAbs().maxCoeff(),
                      (direct.Ndot - via.Ndot).cwiseAbs().maxCoeff()});
  }
  o.add("max_abs_difference", worst, 1e-12, "<=");
  return o;
}

Outcome c11() {
  Outcome o;
  h::RunReport r = run({{"experiment", "bose_hubbard_losses"}, {"output_dir", "c11"}});
  take(o, r,
       {"N_stderr_multiple", "Sz2_stderr_multiple", "g1_drop_semiclassical", "g1_drop_jumps", "N_monotone_semiclassical",
        "N_monotone_jumps", "physicality"});
  return o;
}

Outcome c12() {
  Outcome o;
  std::mt19937_64 rng(1212);
  std::uniform_real_distribution<double> hb(0.3, 1.5);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 2;
    PolySymbol f = oracle::random_poly(rng, Chart::RealQP, n, 4, 5);
    PolySymbol g = oracle::random_poly(rng, Chart::RealQP, n, 4, 5);
    const double hbar = hb(rng);
    worst = std::max(worst, max_coefficient_difference(moyal(f, g, hbar), oracle::brute_moyal(f, g, hbar)));
  }
  o.add("moyal_max_coefficient_difference", worst, 1e-13, "<=");
  // a^dagger a -> |a|^2 - 1/2 and a^dagger a^dagger a a -> |a|^4 - 2|a|^2 + 1/2.
  // The products run in the (q, p) chart, so sqrt(2) rescaling leaves roundoff.
  const PolySymbol n1 = parse_symbol("a*abar - 0.5", Chart::ComplexAAbar, 1);
  const PolySymbol n2 = parse_symbol("a^2*abar^2 - 2*a*abar + 0.5", Chart::ComplexAAbar, 1);
  o.add("weyl_number", max_coefficient_difference(weyl_of_normal_ordered(0, 1, 1, 1.0), n1), 1e-14, "<=");
  o.add("weyl_pair", max_coefficient_difference(weyl_of_normal_ordered(0, 2, 2, 1.0), n2), 1e-14, "<=");
  return o;
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"c01", "exactness oracle, damped oscillator vs master equation", c01},
      {"c02", "limit cycle radius |a|^2 = 2.5", c02},
      {"c03", "covariance alpha vs master equation, growth and plateau", c03},
      {"c04", "gradient-flow identity for holomorphic L", c04},
      {"c05", "nonlinear flow drift, coefficient-wise", c05},
      {"c06", "physicality along acceptance trajectories", c06},
      {"c07", "doubled diagonal components reduce to semiclassical", c07},
      {"c08", "exact superposition Wigner grid vs master equation", c08},
      {"c09", "anharmonic cat means and decoherence", c09},
      {"c10", "chord equivalence", c10},
      {"c11", "Bose-Hubbard losses vs quantum jumps", c11},
      {"c12", "Moyal oracle and Weyl symbols", c12},
  };
  return list;
}

bool run_one(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.fn();
  } catch (const std::exception& e) {
    o.fail(std::string("error: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& l : o.lines) std::printf("%s\n", l.c_str());
  std::printf("%s %s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lindgauss acceptance suite"};
  std::string which = "all";
  std::string root = (fs::temp_directory_path() / "lindgauss_acceptance").string();
  app.add_option("criterion", which, "Criterion id (c01..c12) or 'all'");
  app.add_option("--root", root, "Directory for experiment outputs");
  CLI11_PARSE(app, argc, argv);
  g_root = root;
  fs::create_directories(g_root);

  bool ok = true;
  bool found = false;
  for (const auto& c : criteria()) {
    if (which != "all" && which != c.id) continue;
    found = true;
    ok = run_one(c) && ok;
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
