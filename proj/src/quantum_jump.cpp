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
#include <random>
#include <thread>

#include "lindgauss/linalg.hpp"
#include "lindgauss/quantum.hpp"

namespace lindgauss {

namespace {

struct TrajectoryResult {
  // values[o * num_times + k]
  std::vector<Complex> values;
  long jumps = 0;
  double max_leakage = 0.0;
  std::string error;
};

class JumpRunner {
 public:
  JumpRunner(const QuantumModel& ops, const FockSpace& space, const std::vector<double>& times,
             const std::vector<JumpObservable>& observables, const JumpOptions& options)
      : space_(space), times_(times), observables_(observables), options_(options), ls_(ops.lindblads) {
    heff_ = ops.H;
    for (const auto& L : ops.lindblads) heff_ -= Complex(0.0, 0.5) * SparseOp(SparseOp(L.adjoint()) * L);
  }

  TrajectoryResult run(const Eigen::VectorXcd& psi0, std::uint64_t seed) const {
    TrajectoryResult res;
    const size_t nt = times_.size();
    res.values.assign(observables_.size() * nt, Complex(0.0));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const Eigen::Index dim = psi0.size();

    auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
      auto psi = as_complex(y);
      auto out = as_complex(dy);
      out.noalias() = Complex(0.0, -1.0) * (heff_ * psi);
    };
    DormandPrince solver(rhs, options_.ode);
    Eigen::VectorXd y(2 * dim);
    as_complex(y) = psi0 / psi0.norm();
    solver.reset(times_.front(), y);
    double threshold = draw(uniform, rng);

    size_t k = 0;
    while (k < nt) {
      if (solver.t() >= times_[k]) {
        Eigen::VectorXcd psi = as_complex(solver.y());
        psi /= psi.norm();
        for (size_t o = 0; o < observables_.size(); ++o) {
          res.values[o * nt + k] = psi.dot(observables_[o].op * psi);
        }
        res.max_leakage = std::max(res.max_leakage, leakage(psi, space_));
        ++k;
        continue;
      }
      solver.step(times_[k]);
      if (as_complex(solver.y()).squaredNorm() >= threshold) continue;

      // Locate the crossing inside the last step.
      double lo = solver.t_previous();
      double hi = solver.t();
      while (hi - lo > options_.bisection_tol) {
        double mid = 0.5 * (lo + hi);
        if (as_complex(solver.dense(mid)).squaredNorm() < threshold) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      Eigen::VectorXd at = solver.dense(hi);
      Eigen::VectorXcd psi = as_complex(at);
      std::vector<double> rates(ls_.size());
      std::vector<Eigen::VectorXcd> kicked(ls_.size());
      double total = 0.0;
      for (size_t c = 0; c < ls_.size(); ++c) {
        kicked[c] = ls_[c] * psi;
        rates[c] = kicked[c].squaredNorm();
        total += rates[c];
      }
      if (!(total > 0.0)) {
        res.error = "jump with vanishing rates at t = " + format_number(hi);
        return res;
      }
      double pick = draw(uniform, rng) * total;
      size_t channel = 0;
      while (channel + 1 < ls_.size() && pick >= rates[channel]) {
        pick -= rates[channel];
        ++channel;
      }
      as_complex(at) = kicked[channel] / std::sqrt(rates[channel]);
      solver.reset(hi, at);
      threshold = draw(uniform, rng);
      ++res.jumps;
    }
    return res;
  }

 private:
  // Uniform in (0, 1); zero would make a threshold unreachable.
  static double draw(std::uniform_real_distribution<double>& u, std::mt19937_64& rng) {
    double r;
    do {
      r = u(rng);
    } while (r <= 0.0);
    return r;
  }

  const FockSpace& space_;
  const std::vector<double>& times_;
  const std::vector<JumpObservable>& observables_;
  JumpOptions options_;
  std::vector<SparseOp> ls_;
  SparseOp heff_;
};

}  // namespace

int JumpEnsemble::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

JumpEnsemble quantum_jump(const QuantumModel& ops, const FockSpace& space, const Eigen::VectorXcd& psi0,
                          const std::vector<double>& times, int n_traj, std::uint64_t seed,
                          const std::vector<JumpObservable>& observables, JumpOptions options) {
  if (times.empty()) throw QuantumError("quantum_jump: no sample times");
  if (!std::is_sorted(times.begin(), times.end())) throw QuantumError("quantum_jump: times must be sorted");
  if (n_traj < 1) throw QuantumError("quantum_jump: need at least one trajectory");
  if (psi0.size() != space.dimension()) throw QuantumError("quantum_jump: psi0 has the wrong dimension");

  JumpRunner runner(ops, space, times, observables, options);
  std::vector<TrajectoryResult> results(n_traj);
  int workers = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_traj);
  auto work = [&](int w) {
    for (int i = w; i < n_traj; i += workers) {
      try {
        results[i] = runner.run(psi0, seed ^ static_cast<std::uint64_t>(i));
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  JumpEnsemble ens;
  ens.trajectories = n_traj;
  ens.seed = seed;
  ens.times = times;
  const size_t nt = times.size();
  for (const auto& o : observables) ens.names.push_back(o.name);
  ens.mean.assign(observables.size(), std::vector<Complex>(nt, 0.0));
  ens.standard_error.assign(observables.size(), std::vector<double>(nt, 0.0));
  ens.spread.assign(observables.size(), std::vector<double>(nt, 0.0));
  for (int i = 0; i < n_traj; ++i) {
    if (!results[i].error.empty()) {
      throw QuantumError("quantum_jump: trajectory " + std::to_string(i) + " failed: " + results[i].error);
    }
    ens.total_jumps += results[i].jumps;
    ens.max_leakage = std::max(ens.max_leakage, results[i].max_leakage);
  }
  // Fixed summation order keeps the aggregate independent of scheduling.
  for (size_t o = 0; o < observables.size(); ++o) {
    for (size_t k = 0; k < nt; ++k) {
      Complex sum = 0.0;
      for (int i = 0; i < n_traj; ++i) sum += results[i].values[o * nt + k];
      Complex mean = sum / static_cast<double>(n_traj);
      double var = 0.0;
      for (int i = 0; i < n_traj; ++i) var += std::norm(results[i].values[o * nt + k] - mean);
      var = n_traj > 1 ? var / (n_traj - 1) : 0.0;
      ens.mean[o][k] = mean;
      ens.spread[o][k] = std::sqrt(var);
      ens.standard_error[o][k] = std::sqrt(var / n_traj);
    }
  }
  if (ens.max_leakage > kLeakageWarning) {
    ens.events.push_back({times.back(), "leakage",
                          "top Fock level population reached " + format_number(ens.max_leakage)});
  }
  return ens;
}

}  // namespace lindgauss
