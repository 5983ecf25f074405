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

// Command-line front end: run, portrait, compare, list-experiments, selftest.
// Exit codes: 0 all checks pass, 2 a tolerance check failed, 1 error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "lindgauss/harness.hpp"

namespace {

namespace h = lindgauss::harness;
using nlohmann::json;

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kToleranceFailure = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw h::ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw h::ConfigError(path + ": " + e.what());
  }
}

void print_checks(const std::vector<h::Check>& checks) {
  for (const auto& c : checks) {
    std::printf("%s  %-36s %.6g %s %.6g%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                c.relation.c_str(), c.tolerance, c.detail.empty() ? "" : "  # ", c.detail.c_str());
  }
}

int report_exit(const h::RunReport& report) {
  for (const auto& r : report.runs) {
    std::printf("solver %-14s %8.2f s  %zu event(s)\n", r.solver.c_str(), r.seconds, r.events.size());
  }
  print_checks(report.checks);
  std::printf("%s %s\n", report.pass() ? "PASS" : "FAIL", report.name.c_str());
  return report.pass() ? kPass : kToleranceFailure;
}

int list_experiments(bool as_json) {
  if (as_json) {
    json out = {{"experiments", json::array()}, {"portraits", json::array()}};
    for (const auto& e : h::experiments()) out["experiments"].push_back(h::to_json(e.defaults()));
    for (const auto& p : h::portraits()) out["portraits"].push_back(h::to_json(p.defaults()));
    std::printf("%s\n", out.dump(2).c_str());
    return kPass;
  }
  for (const auto& e : h::experiments()) {
    h::ExperimentConfig c = e.defaults();
    std::printf("%s\n  figure: %s\n  %s\n  solvers:", e.name.c_str(), e.figure.c_str(), e.description.c_str());
    for (const auto& s : c.solvers) std::printf(" %s", s.c_str());
    std::printf("\n  tolerances:");
    for (const auto& [k, v] : c.tolerances) std::printf(" %s=%g", k.c_str(), v);
    std::printf("\n");
  }
  for (const auto& p : h::portraits()) {
    h::PortraitConfig c = p.defaults();
    std::printf("portrait %s\n  figure: %s\n  %s\n  tolerances:", p.name.c_str(), p.figure.c_str(),
                p.description.c_str());
    for (const auto& [k, v] : c.tolerances) std::printf(" %s=%g", k.c_str(), v);
    std::printf("\n");
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical and doubled phase-space propagation of Lindblad dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");

  std::string portrait_path;
  CLI::App* portrait = app.add_subcommand("portrait", "Sample a phase portrait from a JSON config");
  portrait->add_option("config", portrait_path, "Portrait config (JSON)")->required()->check(CLI::ExistingFile);

  std::string dir_a, dir_b, tol_path, report_path;
  CLI::App* compare = app.add_subcommand("compare", "Compare the CSV files of two output directories");
  compare->add_option("dir_a", dir_a, "Reference directory")->required()->check(CLI::ExistingDirectory);
  compare->add_option("dir_b", dir_b, "Directory compared against the reference")
      ->required()
      ->check(CLI::ExistingDirectory);
  compare->add_option("--tol", tol_path, "Tolerance file (JSON)")->check(CLI::ExistingFile);
  compare->add_option("--report", report_path, "Write the comparison report as JSON");

  bool list_json = false;
  CLI::App* list = app.add_subcommand("list-experiments", "List registered experiments and portraits");
  list->add_flag("--json", list_json, "Print the full default configs as JSON");
  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kError;
  }

  try {
    if (*run) {
      h::ExperimentConfig config = h::experiment_config_from_json(read_json(config_path));
      if (seed) config.seed = *seed;
      return report_exit(h::run_experiment(config, h::output_root()));
    }
    if (*portrait) {
      h::PortraitConfig config = h::portrait_config_from_json(read_json(portrait_path));
      return report_exit(h::run_portrait(config, h::output_root()));
    }
    if (*compare) {
      h::Tolerances tol;
      if (!tol_path.empty()) tol = h::tolerances_from_json(read_json(tol_path));
      h::ComparisonReport report = h::compare_directories(dir_a, dir_b, tol);
      for (const auto& m : report.metrics) {
        std::printf("%s  %s:%s sup=%.6g rms=%.6g tol=%.6g\n", m.pass ? "PASS" : "FAIL", m.file.c_str(),
                    m.series.c_str(), m.sup, m.rms, m.tolerance);
      }
      for (const auto& u : report.unmatched) std::printf("SKIP  %s (only in one directory)\n", u.c_str());
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw h::HarnessError("cannot write " + report_path);
        out << report.to_json().dump(2) << "\n";
      }
      std::printf("%s compare (%zu series)\n", report.pass() ? "PASS" : "FAIL", report.metrics.size());
      return report.pass() ? kPass : kToleranceFailure;
    }
    if (*list) return list_experiments(list_json);
    if (*selftest) {
      std::vector<h::Check> checks = h::selftest();
      print_checks(checks);
      bool ok = true;
      for (const auto& c : checks) ok = ok && c.pass;
      std::printf("%s selftest\n", ok ? "PASS" : "FAIL");
      return ok ? kPass : kToleranceFailure;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
