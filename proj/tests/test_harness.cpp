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

#include "lindgauss/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

using namespace lindgauss;
using namespace lindgauss::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / "lindgauss_tests" / (std::string(info->test_suite_name()) + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

ExperimentConfig small_damped(const std::string& output_dir) {
  return experiment_config_from_json({{"experiment", "damped_oscillator"},
                                      {"output_dir", output_dir},
                                      {"time", {{"t_end", 2.0}, {"intervals", 10}}},
                                      {"truncation", {20}}});
}

}  // namespace

TEST(HarnessConfig, DefaultsRoundTrip) {
  for (const auto& e : experiments()) {
    json j = to_json(e.defaults());
    ExperimentConfig back = experiment_config_from_json(j);
    EXPECT_EQ(to_json(back), j) << e.name;
    EXPECT_EQ(to_json(experiment_config_from_json(json::parse(j.dump()))), j) << e.name;
  }
  for (const auto& p : portraits()) {
    json j = to_json(p.defaults());
    EXPECT_EQ(to_json(portrait_config_from_json(j)), j) << p.name;
  }
}

TEST(HarnessConfig, RoundTripPreservesExactDoubles) {
  json j = {{"experiment", "damped_oscillator"}, {"model", {{"hbar", 1.0}}}, {"ode", {{"rtol", 0.1 + 0.2}}}};
  ExperimentConfig c = experiment_config_from_json(j);
  ExperimentConfig back = experiment_config_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(back.ode.rtol, 0.1 + 0.2);
}

TEST(HarnessConfig, PartialConfigOverlaysDefaults) {
  ExperimentConfig c = experiment_config_from_json({{"experiment", "limit_cycle"}, {"time", {{"t_end", 200.0}}}});
  ExperimentConfig d = find_experiment("limit_cycle").defaults();
  EXPECT_EQ(c.time.t_end, 200.0);
  EXPECT_EQ(c.time.intervals, d.time.intervals);
  EXPECT_EQ(c.model.lindblads, d.model.lindblads);
  EXPECT_EQ(c.tolerances, d.tolerances);
}

TEST(HarnessConfig, UnknownKeysRejected) {
  const std::vector<json> bad = {
      {{"experiment", "damped_oscillator"}, {"colour", 1}},
      {{"experiment", "damped_oscillator"}, {"model", {{"Hamiltonian", "q^2"}}}},
      {{"experiment", "damped_oscillator"}, {"initial", {{"amplitude", {1, 0}}}}},
      {{"experiment", "damped_oscillator"}, {"time", {{"dt", 0.1}}}},
      {{"experiment", "damped_oscillator"}, {"grid", {{"n", 10}}}},
      {{"experiment", "damped_oscillator"}, {"ode", {{"order", 5}}}},
      {{"experiment", "damped_oscillator"}, {"parameters", {{"unknown", 1.0}}}},
      {{"experiment", "damped_oscillator"}, {"tolerances", {{"unknown", 1.0}}}},
  };
  for (const auto& j : bad) EXPECT_THROW(experiment_config_from_json(j), ConfigError) << j.dump();
  EXPECT_THROW(portrait_config_from_json({{"portrait", "harmonic"}, {"speed", 1}}), ConfigError);
}

TEST(HarnessConfig, InvalidValuesRejected) {
  const std::vector<json> bad = {
      {{"figure", "x"}},
      {{"experiment", "no_such_experiment"}},
      {{"experiment", "damped_oscillator"}, {"solvers", {"jumps"}}},
      {{"experiment", "damped_oscillator"}, {"time", {{"intervals", "ten"}}}},
      {{"experiment", "damped_oscillator"}, {"time", {{"t_end", -1.0}}}},
      {{"experiment", "damped_oscillator"}, {"time", {{"frames", {99.0}}}}},
      {{"experiment", "damped_oscillator"}, {"model", {{"H", "q^2 + z"}}}},
      {{"experiment", "damped_oscillator"}, {"model", {{"chart", "Polar"}}}},
      {{"experiment", "damped_oscillator"}, {"initial", {{"amplitudes", json::array()}}}},
      {{"experiment", "damped_oscillator"}, {"seed", -3}},
      {{"experiment", "cat_anharmonic"}, {"initial", {{"width", {0.0, -1.0}}}}},
      {{"experiment", "cat_anharmonic"}, {"initial", {{"coefficients", {1.0}}}}},
  };
  for (const auto& j : bad) EXPECT_THROW(experiment_config_from_json(j), ConfigError) << j.dump();
}

TEST(HarnessConfig, TimeSamplesMergeFrames) {
  TimeSpec t{0.0, 1.0, 4, {0.5, 0.3, 1.0}};
  std::vector<double> s = t.samples();
  const std::vector<double> expected = {0.0, 0.25, 0.3, 0.5, 0.75, 1.0};
  ASSERT_EQ(s.size(), expected.size());
  for (size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(s[k], expected[k], 1e-15);
}

TEST(HarnessRegistry, ExperimentsDeclareFigureAndTolerances) {
  std::vector<std::string> names;
  for (const auto& e : experiments()) {
    names.push_back(e.name);
    ExperimentConfig c = e.defaults();
    EXPECT_EQ(c.experiment, e.name);
    EXPECT_FALSE(c.figure.empty()) << e.name;
    EXPECT_FALSE(c.tolerances.empty()) << e.name;
    EXPECT_FALSE(c.solvers.empty()) << e.name;
  }
  for (const char* required : {"limit_cycle", "bose_hubbard_losses", "cat_anharmonic", "damped_oscillator"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), required), names.end()) << required;
  }
  for (const auto& p : portraits()) {
    EXPECT_FALSE(p.defaults().figure.empty());
    EXPECT_FALSE(p.defaults().tolerances.empty());
  }
  EXPECT_THROW(find_experiment("nope"), HarnessError);
  EXPECT_THROW(find_portrait("nope"), HarnessError);
}

TEST(HarnessChecks, Relations) {
  EXPECT_TRUE(make_check("a", 1.0, 2.0).pass);
  EXPECT_FALSE(make_check("a", 3.0, 2.0).pass);
  EXPECT_TRUE(make_check("a", 3.0, 2.0, ">=").pass);
  EXPECT_FALSE(make_check("a", std::nan(""), 2.0).pass);
  EXPECT_FALSE(make_check("a", std::nan(""), 2.0, ">=").pass);
  EXPECT_THROW(make_check("a", 1.0, 1.0, "=="), HarnessError);
}

TEST(HarnessCsv, ObservableRoundTrip) {
  fs::path dir = scratch_dir();
  const double v = 0.1 + 0.2;
  write_observable_csv(dir / "obs.csv", {{0.0, "x", v, std::nullopt},
                                         {0.0, "y", -1e-300, 0.5},
                                         {1.0 / 3.0, "x", std::exp(1.0), std::nullopt},
                                         {1.0 / 3.0, "y", 2.0, 0.25}});
  std::string text = slurp(dir / "obs.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,obs_name,value,stderr");
  auto series = read_series_csv(dir / "obs.csv");
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series["x"].value[0], v);
  EXPECT_EQ(series["x"].value[1], std::exp(1.0));
  EXPECT_EQ(series["x"].t[1], 1.0 / 3.0);
  EXPECT_EQ(series["y"].value[0], -1e-300);
}

TEST(HarnessCsv, WideFilesAndRowIndex) {
  fs::path dir = scratch_dir();
  write_text(dir / "wide.csv", "t,a,b\n0,1,2\n1,3,4\n");
  write_text(dir / "field.csv", "q,p\n5,6\n7,8\n");
  auto wide = read_series_csv(dir / "wide.csv");
  EXPECT_EQ(wide["b"].value, (std::vector<double>{2, 4}));
  EXPECT_EQ(wide["b"].t, (std::vector<double>{0, 1}));
  auto field = read_series_csv(dir / "field.csv");
  EXPECT_EQ(field["p"].t, (std::vector<double>{0, 1}));
  write_text(dir / "ragged.csv", "t,a\n0,1,2\n");
  EXPECT_THROW(read_series_csv(dir / "ragged.csv"), HarnessError);
}

TEST(HarnessCompare, IdenticalSeriesHaveZeroError) {
  Series a{{0, 1, 2, 3}, {1, -2, 3, 0.5}};
  SeriesMetric m = compare_series(a, a);
  EXPECT_EQ(m.sup, 0.0);
  EXPECT_EQ(m.rms, 0.0);
  EXPECT_EQ(m.points, 4);
}

TEST(HarnessCompare, ResamplesLinearly) {
  Series a{{0.5, 1.5, 2.5}, {1.0, 3.0, 5.0}};
  Series b{{0, 1, 2, 3}, {0.0, 2.0, 4.0, 6.0}};
  SeriesMetric m = compare_series(a, b);
  EXPECT_NEAR(m.sup, 0.0, 1e-15);
  EXPECT_EQ(m.points, 3);
  Series c{{0, 1, 2, 3}, {0.0, 2.0, 4.0, 7.0}};
  EXPECT_NEAR(compare_series(a, c).sup, 0.5, 1e-15);
}

TEST(HarnessCompare, DisjointRangesThrow) {
  Series a{{0, 1}, {0, 0}};
  Series b{{2, 3}, {0, 0}};
  EXPECT_THROW(compare_series(a, b), HarnessError);
}

TEST(HarnessCompare, TolerancesFile) {
  Tolerances t = tolerances_from_json({{"default", 1e-3}, {"series", {{"q", 1e-5}, {"obs.csv:q", 1e-7}}}});
  EXPECT_EQ(t.lookup("obs.csv", "q"), 1e-7);
  EXPECT_EQ(t.lookup("other.csv", "q"), 1e-5);
  EXPECT_EQ(t.lookup("other.csv", "p"), 1e-3);
  EXPECT_THROW(tolerances_from_json({{"defaults", 1.0}}), ConfigError);
  EXPECT_THROW(tolerances_from_json({{"series", {{"q", "small"}}}}), ConfigError);
}

TEST(HarnessCompare, DirectoriesPerObservable) {
  fs::path dir = scratch_dir();
  write_text(dir / "a" / "s" / "obs.csv", "t,obs_name,value,stderr\n0,q,1,\n0,p,2,\n1,q,1.5,\n1,p,2,\n");
  write_text(dir / "b" / "s" / "obs.csv", "t,obs_name,value,stderr\n0,q,1,\n0,p,2,\n1,q,1.25,\n1,p,2,\n");
  write_text(dir / "a" / "only_a.csv", "t,x\n0,1\n");
  Tolerances tol;
  tol.default_abs = 0.1;
  ComparisonReport r = compare_directories(dir / "a", dir / "b", tol);
  ASSERT_EQ(r.metrics.size(), 2u);
  EXPECT_EQ(r.metrics[0].series, "p");
  EXPECT_EQ(r.metrics[0].sup, 0.0);
  EXPECT_EQ(r.metrics[1].series, "q");
  EXPECT_EQ(r.metrics[1].sup, 0.25);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.unmatched, std::vector<std::string>{"only_a.csv"});
  tol.series["q"] = 0.3;
  EXPECT_TRUE(compare_directories(dir / "a", dir / "b", tol).pass());
  EXPECT_TRUE(compare_directories(dir / "a", dir / "a", Tolerances{0.0, {}}).pass());
}

TEST(HarnessRun, DampedOscillatorPassesAndIsBitIdentical) {
  fs::path dir = scratch_dir();
  RunReport r1 = run_experiment(small_damped("first"), dir);
  RunReport r2 = run_experiment(small_damped("second"), dir);
  EXPECT_TRUE(r1.pass());
  ASSERT_NE(r1.find("moment_sup"), nullptr);
  EXPECT_LT(r1.find("moment_sup")->value, 1e-6);
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "first")) {
    if (e.path().extension() != ".csv") continue;
    fs::path other = dir / "second" / fs::relative(e.path(), dir / "first");
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path();
    ++files;
  }
  EXPECT_EQ(files, 3);
  EXPECT_TRUE(fs::exists(dir / "first" / "damped_oscillator" / "report.json"));
  json report = json::parse(slurp(dir / "first" / "damped_oscillator" / "report.json"));
  EXPECT_EQ(report["config"], to_json(small_damped("first")));
  EXPECT_TRUE(report["pass"].get<bool>());

  // Metrics are recomputable from the stored trajectories.
  Tolerances tol;
  tol.default_abs = 1e-6;
  ComparisonReport cmp = compare_directories(dir / "first" / "damped_oscillator" / "semiclassical",
                                             dir / "first" / "damped_oscillator" / "master", tol);
  double sup_q = 0.0;
  for (const auto& m : cmp.metrics)
    if (m.series == "q") sup_q = m.sup;
  EXPECT_LT(sup_q, 1e-6);
}

TEST(HarnessRun, JumpEnsembleIsBitIdentical) {
  fs::path dir = scratch_dir();
  auto config = [](const std::string& out) {
    return experiment_config_from_json({{"experiment", "bose_hubbard_losses"},
                                        {"output_dir", out},
                                        {"trajectories", 6},
                                        {"truncation", {14, 14}},
                                        {"initial", {{"amplitudes", {{0.0, 1.5}, {1.5, 0.0}}}}},
                                        {"time", {{"t_end", 0.3}, {"intervals", 3}}}});
  };
  run_experiment(config("x"), dir);
  run_experiment(config("y"), dir);
  const fs::path rel = fs::path("bose_hubbard_losses") / "jumps" / "observables.csv";
  EXPECT_EQ(slurp(dir / "x" / rel), slurp(dir / "y" / rel));
  ExperimentConfig other = config("z");
  other.seed += 1;
  run_experiment(other, dir);
  EXPECT_NE(slurp(dir / "x" / rel), slurp(dir / "z" / rel));
}

TEST(HarnessRun, CatWritesComponentsAndFrames) {
  fs::path dir = scratch_dir();
  ExperimentConfig c = experiment_config_from_json({{"experiment", "cat_anharmonic"},
                                                    {"solvers", {"doubled", "semiclassical"}},
                                                    {"time", {{"t_end", 0.5}, {"intervals", 5}, {"frames", {0.0, 0.5}}}},
                                                    {"grid", {{"nq", 21}, {"np", 21}}}});
  RunReport r = run_experiment(c, dir);
  EXPECT_TRUE(r.pass());
  const fs::path base = dir / "output" / "cat_anharmonic" / "doubled";
  for (const char* f : {"component_0_0.csv", "component_0_1.csv", "component_1_0.csv", "component_1_1.csv",
                        "observables.csv", "wigner_t0.txt", "wigner_t0.json", "wigner_t0.5.txt"}) {
    EXPECT_TRUE(fs::exists(base / f)) << f;
  }
  WignerGrid g = WignerGrid::from_text(slurp(base / "wigner_t0.txt"));
  EXPECT_EQ(g.values.rows(), 21);
}

TEST(HarnessRun, PortraitChecks) {
  fs::path dir = scratch_dir();
  PortraitConfig c = portrait_config_from_json({{"portrait", "nonlinear_flow"}, {"output_dir", dir.string()}});
  RunReport r = run_portrait(c, "/nonexistent");
  EXPECT_TRUE(r.pass());
  EXPECT_TRUE(fs::exists(dir / "portraits" / "nonlinear_flow" / "field.csv"));
  auto field = read_series_csv(dir / "portraits" / "nonlinear_flow" / "field.csv");
  // (dq, dp) = (-2 gamma q^2 p, -2 gamma q p^2) with gamma = 0.1.
  for (size_t k = 0; k < field["q"].value.size(); ++k) {
    const double q = field["q"].value[k], p = field["p"].value[k];
    EXPECT_NEAR(field["dq"].value[k], -0.2 * q * q * p, 1e-14);
    EXPECT_NEAR(field["dp"].value[k], -0.2 * q * p * p, 1e-14);
  }
}

TEST(HarnessRun, OutputRootFromEnvironment) {
  setenv("LINDGAUSS_OUTPUT_ROOT", "/tmp/lindgauss_root", 1);
  EXPECT_EQ(output_root(), fs::path("/tmp/lindgauss_root"));
  unsetenv("LINDGAUSS_OUTPUT_ROOT");
  EXPECT_EQ(output_root(), fs::current_path());
}

TEST(HarnessRun, SolverFailureCarriesContext) {
  fs::path dir = scratch_dir();
  ExperimentConfig c = small_damped("bad");
  c.model.hbar = 0.5;
  try {
    run_experiment(c, dir);
    FAIL() << "expected an error";
  } catch (const HarnessError& e) {
    EXPECT_NE(std::string(e.what()).find("damped_oscillator"), std::string::npos);
  }
}

TEST(HarnessSelftest, AllPass) {
  for (const auto& c : selftest()) EXPECT_TRUE(c.pass) << c.name << " " << c.value;
}
