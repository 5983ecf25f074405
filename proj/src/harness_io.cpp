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
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "lindgauss/harness.hpp"

namespace lindgauss::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw HarnessError("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return std::numeric_limits<double>::quiet_NaN();
  return v;
}

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int k = 1; k <= n; ++k) names.push_back("q" + std::to_string(k));
  for (int k = 1; k <= n; ++k) names.push_back("p" + std::to_string(k));
  return names;
}

}  // namespace

fs::path output_root() {
  if (const char* env = std::getenv("LINDGAUSS_OUTPUT_ROOT"); env && *env) return fs::path(env);
  return fs::current_path();
}

void write_trajectory_csv(const fs::path& path, const SemiclassicalTrajectory& trajectory) {
  std::ofstream out = open_out(path);
  if (trajectory.states.empty()) return;
  const int dim = static_cast<int>(trajectory.states.front().X.size());
  const auto names = coordinate_names(dim / 2);
  out << "t";
  for (const auto& n : names) out << "," << n;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) out << ",G_" << names[i] << "_" << names[j];
  out << ",min_eig_physicality\n";
  for (const auto& s : trajectory.states) {
    out << num(s.t);
    for (int i = 0; i < dim; ++i) out << "," << num(s.X(i));
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) out << "," << num(s.G(i, j));
    out << "," << num(s.min_eig_physicality) << "\n";
  }
}

void write_component_csv(const fs::path& path, const ComponentTrajectory& trajectory) {
  std::ofstream out = open_out(path);
  if (trajectory.samples.empty()) return;
  const int dim = static_cast<int>(trajectory.samples.front().state.X.size());
  const auto names = coordinate_names(dim / 2);
  out << "t,alive";
  for (const auto& n : names) out << ",X_" << n;
  for (const auto& n : names) out << ",Y_" << n;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) out << ",B_re_" << names[i] << "_" << names[j] << ",B_im_" << names[i] << "_" << names[j];
  out << ",alpha_re,alpha_im,weight_re,weight_im\n";
  for (const auto& s : trajectory.samples) {
    const ComplexGaussian& c = s.state;
    out << num(s.t) << "," << (s.alive ? 1 : 0);
    for (int i = 0; i < dim; ++i) out << "," << num(c.X(i));
    for (int i = 0; i < dim; ++i) out << "," << num(c.Y(i));
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) out << "," << num(c.B(i, j).real()) << "," << num(c.B(i, j).imag());
    out << "," << num(c.alpha.real()) << "," << num(c.alpha.imag()) << "," << num(c.weight.real()) << ","
        << num(c.weight.imag()) << "\n";
  }
}

void write_observable_csv(const fs::path& path, const std::vector<ObservableRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,obs_name,value,stderr\n";
  for (const auto& r : rows) {
    out << num(r.t) << "," << r.name << "," << num(r.value) << ",";
    if (r.standard_error) out << num(*r.standard_error);
    out << "\n";
  }
}

void write_wigner(const fs::path& stem, const WignerGrid& grid) {
  {
    std::ofstream out = open_out(fs::path(stem.string() + ".txt"));
    out << grid.to_text();
  }
  std::ofstream out = open_out(fs::path(stem.string() + ".json"));
  out << grid.to_json().dump() << "\n";
}

std::map<std::string, Series> read_series_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HarnessError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) return {};
  const std::vector<std::string> header = split(line);
  auto column = [&](const std::string& name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int t_col = column("t");
  const int name_col = column("obs_name");
  const int value_col = column("value");
  std::map<std::string, Series> out;
  long row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (fields.size() != header.size())
      throw HarnessError(path.string() + ": row " + std::to_string(row + 2) + " has " + std::to_string(fields.size()) +
                         " fields, header has " + std::to_string(header.size()));
    const double t = t_col >= 0 ? parse_field(fields[t_col]) : static_cast<double>(row);
    if (name_col >= 0 && value_col >= 0) {
      Series& s = out[fields[name_col]];
      s.t.push_back(t);
      s.value.push_back(parse_field(fields[value_col]));
    } else {
      for (size_t c = 0; c < header.size(); ++c) {
        if (static_cast<int>(c) == t_col) continue;
        Series& s = out[header[c]];
        s.t.push_back(t);
        s.value.push_back(parse_field(fields[c]));
      }
    }
    ++row;
  }
  return out;
}

double Tolerances::lookup(const std::string& file, const std::string& name) const {
  if (auto it = series.find(file + ":" + name); it != series.end()) return it->second;
  if (auto it = series.find(name); it != series.end()) return it->second;
  return default_abs;
}

Tolerances tolerances_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("tolerances: expected an object");
  Tolerances t;
  for (const auto& [key, value] : j.items()) {
    if (key == "default") {
      if (!value.is_number()) throw ConfigError("tolerances.default: expected a number");
      t.default_abs = value.get<double>();
    } else if (key == "series") {
      if (!value.is_object()) throw ConfigError("tolerances.series: expected an object");
      for (const auto& [name, tol] : value.items()) {
        if (!tol.is_number()) throw ConfigError("tolerances.series." + name + ": expected a number");
        t.series[name] = tol.get<double>();
      }
    } else {
      throw ConfigError("tolerances: unknown key '" + key + "'");
    }
  }
  return t;
}

SeriesMetric compare_series(const Series& a, const Series& b) {
  SeriesMetric m;
  if (a.t.empty() || b.t.empty()) throw HarnessError("compare_series: empty series");
  const double lo = std::max(a.t.front(), b.t.front());
  const double hi = std::min(a.t.back(), b.t.back());
  if (lo > hi) throw HarnessError("compare_series: time ranges do not overlap");
  const double eps = 1e-12 * std::max(1.0, std::abs(hi - lo));
  const bool same_grid = a.t == b.t;
  double sum_sq = 0.0;
  size_t cursor = 0;
  for (size_t k = 0; k < a.t.size(); ++k) {
    const double t = a.t[k];
    if (t < lo - eps || t > hi + eps) continue;
    double vb;
    if (same_grid) {
      vb = b.value[k];
    } else {
      while (cursor + 1 < b.t.size() && b.t[cursor + 1] < t) ++cursor;
      if (cursor + 1 >= b.t.size() || std::abs(b.t[cursor] - t) <= eps) {
        vb = b.value[cursor];
      } else {
        const double w = (t - b.t[cursor]) / (b.t[cursor + 1] - b.t[cursor]);
        vb = (1.0 - w) * b.value[cursor] + w * b.value[cursor + 1];
      }
    }
    const double va = a.value[k];
    if (std::isnan(va) && std::isnan(vb)) continue;
    const double e = std::abs(va - vb);
    if (std::isnan(e)) {
      m.sup = std::numeric_limits<double>::infinity();
    } else {
      m.sup = std::max(m.sup, e);
    }
    sum_sq += e * e;
    ++m.points;
  }
  m.rms = m.points > 0 ? std::sqrt(sum_sq / m.points) : 0.0;
  return m;
}

bool ComparisonReport::pass() const {
  return std::all_of(metrics.begin(), metrics.end(), [](const SeriesMetric& m) { return m.pass; });
}

json ComparisonReport::to_json() const {
  json j = {{"pass", pass()}, {"seconds", seconds}, {"unmatched", unmatched}};
  j["metrics"] = json::array();
  for (const auto& m : metrics) {
    j["metrics"].push_back({{"file", m.file},
                            {"series", m.series},
                            {"sup", std::isfinite(m.sup) ? json(m.sup) : json("inf")},
                            {"rms", std::isfinite(m.rms) ? json(m.rms) : json("inf")},
                            {"tolerance", m.tolerance},
                            {"points", m.points},
                            {"pass", m.pass}});
  }
  return j;
}

ComparisonReport compare_directories(const fs::path& dir_a, const fs::path& dir_b, const Tolerances& tolerances) {
  const auto start = std::chrono::steady_clock::now();
  if (!fs::is_directory(dir_a)) throw HarnessError("not a directory: " + dir_a.string());
  if (!fs::is_directory(dir_b)) throw HarnessError("not a directory: " + dir_b.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(fs::relative(entry.path(), dir_a));
  }
  std::sort(files.begin(), files.end());
  ComparisonReport report;
  for (const auto& rel : files) {
    const std::string file = rel.generic_string();
    if (!fs::exists(dir_b / rel)) {
      report.unmatched.push_back(file);
      continue;
    }
    const auto a = read_series_csv(dir_a / rel);
    const auto b = read_series_csv(dir_b / rel);
    for (const auto& [name, sa] : a) {
      auto it = b.find(name);
      if (it == b.end()) {
        report.unmatched.push_back(file + ":" + name);
        continue;
      }
      SeriesMetric m;
      try {
        m = compare_series(sa, it->second);
      } catch (const HarnessError& e) {
        throw HarnessError(file + ":" + name + ": " + e.what());
      }
      m.file = file;
      m.series = name;
      m.tolerance = tolerances.lookup(file, name);
      m.pass = m.sup <= m.tolerance;
      report.metrics.push_back(m);
    }
    for (const auto& [name, sb] : b)
      if (!a.count(name)) report.unmatched.push_back(file + ":" + name);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace lindgauss::harness
