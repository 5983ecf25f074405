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

// Config-driven experiments, phase portraits, CSV artifacts and comparisons.

#ifndef LINDGAUSS_HARNESS_HPP
#define LINDGAUSS_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lindgauss/doubled.hpp"
#include "lindgauss/gaussian.hpp"
#include "lindgauss/semiclassical.hpp"

namespace lindgauss::harness {

/// Invalid configuration or tolerance file.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure while running or comparing, with context.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  int num_modes = 1;
  double hbar = 1.0;
  std::string chart = "ComplexAAbar";
  std::string H = "0";
  std::vector<std::string> lindblads;

  /// Parses the symbols in the declared chart.
  LindbladModel build() const;
};

/// Initial state. "coherent" uses amplitudes (one per mode); "cat" uses
/// centres (q, p), coefficients and the single-mode packet width A.
struct InitialSpec {
  std::string kind = "coherent";
  std::vector<Complex> amplitudes;
  std::vector<std::vector<double>> centres;
  std::vector<Complex> coefficients;
  Complex width{0.0, 1.0};
};

struct TimeSpec {
  double t0 = 0.0;
  double t_end = 1.0;
  int intervals = 100;
  std::vector<double> frames;

  /// Evenly spaced grid merged with the frame times.
  std::vector<double> samples() const;
};

struct OdeSpec {
  double rtol = 1e-9;
  double atol = 1e-12;
  OdeOptions options() const;
};

struct ExperimentConfig {
  std::string experiment;
  std::string figure;
  std::string output_dir = "output";
  std::uint64_t seed = 1;
  std::vector<std::string> solvers;
  ModelSpec model;
  InitialSpec initial;
  TimeSpec time;
  GridSpec grid;
  std::vector<int> truncation;
  int trajectories = 0;
  OdeSpec ode;
  std::map<std::string, double> parameters;
  std::map<std::string, double> tolerances;

  double parameter(const std::string& name) const;
  double tolerance(const std::string& name) const;
};

nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a config, starting from the registered defaults of its experiment.
/// Unknown keys at any level are errors.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct PortraitConfig {
  std::string portrait;
  std::string figure;
  std::string output_dir = "output";
  ModelSpec model;
  GridSpec field;
  std::vector<std::vector<double>> starts;
  double t_end = 10.0;
  int intervals = 200;
  OdeSpec ode;
  std::map<std::string, double> parameters;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& name) const;
};

nlohmann::json to_json(const PortraitConfig& config);
PortraitConfig portrait_config_from_json(const nlohmann::json& j);

/// One acceptance check: value compared against tolerance with `relation`
/// ("<=" or ">=").
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool pass = false;
  std::string detail;
};

Check make_check(const std::string& name, double value, double tolerance, const std::string& relation = "<=",
                 const std::string& detail = "");

struct SolverRun {
  std::string solver;
  double seconds = 0.0;
  std::vector<Event> events;
  std::vector<std::string> files;
};

struct RunReport {
  std::string name;
  std::string figure;
  nlohmann::json config;
  std::vector<SolverRun> runs;
  std::vector<Check> checks;
  /// Extra numbers worth recording that are not pass/fail.
  std::map<std::string, double> diagnostics;
  bool pass() const;
  const Check* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

struct ExperimentInfo {
  std::string name;
  std::string figure;
  std::string description;
  std::function<ExperimentConfig()> defaults;
  std::function<RunReport(const ExperimentConfig&, const std::filesystem::path&)> run;
};

struct PortraitInfo {
  std::string name;
  std::string figure;
  std::string description;
  std::function<PortraitConfig()> defaults;
};

const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo& find_experiment(const std::string& name);
const std::vector<PortraitInfo>& portraits();
const PortraitInfo& find_portrait(const std::string& name);

/// Directory that relative output_dir values resolve against: the
/// LINDGAUSS_OUTPUT_ROOT environment variable, else the working directory.
std::filesystem::path output_root();

/// Runs an experiment, writing `<root>/<output_dir>/<experiment>/<solver>/...`
/// and `<root>/<output_dir>/<experiment>/report.json`.
RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& root);

/// Samples the drift field and integrates trajectory fans, writing
/// `<root>/<output_dir>/portraits/<portrait>/...` and a report.
RunReport run_portrait(const PortraitConfig& config, const std::filesystem::path& root);

// CSV artifacts. Numbers are written with 17 significant digits so that
// files round-trip exactly.

struct ObservableRow {
  double t = 0.0;
  std::string name;
  double value = 0.0;
  std::optional<double> standard_error;
};

void write_trajectory_csv(const std::filesystem::path& path, const SemiclassicalTrajectory& trajectory);
void write_component_csv(const std::filesystem::path& path, const ComponentTrajectory& trajectory);
void write_observable_csv(const std::filesystem::path& path, const std::vector<ObservableRow>& rows);
void write_wigner(const std::filesystem::path& stem, const WignerGrid& grid);

/// A sampled curve.
struct Series {
  std::vector<double> t;
  std::vector<double> value;
};

/// Loads every numeric series of a CSV file. Files with an obs_name column are
/// read in long form (one series per name); otherwise each column other than
/// t is a series over t, or over the row index when there is no t column.
std::map<std::string, Series> read_series_csv(const std::filesystem::path& path);

struct Tolerances {
  double default_abs = 1e-6;
  /// Keyed by series name or by "<file>:<series>", the latter taking priority.
  std::map<std::string, double> series;
  double lookup(const std::string& file, const std::string& name) const;
};

Tolerances tolerances_from_json(const nlohmann::json& j);

struct SeriesMetric {
  std::string file;
  std::string series;
  double sup = 0.0;
  double rms = 0.0;
  double tolerance = 0.0;
  int points = 0;
  bool pass = false;
};

/// Errors of b against a on a's sample times inside the common range; b is
/// interpolated linearly when the grids differ. Throws HarnessError when the
/// time ranges are disjoint.
SeriesMetric compare_series(const Series& a, const Series& b);

struct ComparisonReport {
  std::vector<SeriesMetric> metrics;
  std::vector<std::string> unmatched;
  double seconds = 0.0;
  bool pass() const;
  nlohmann::json to_json() const;
};

/// Compares every CSV under dir_a with the file of the same relative path
/// under dir_b.
ComparisonReport compare_directories(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b,
                                     const Tolerances& tolerances);

/// Quick oracle checks of the core conventions.
std::vector<Check> selftest();

}  // namespace lindgauss::harness

#endif  // LINDGAUSS_HARNESS_HPP
