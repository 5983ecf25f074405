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

#ifndef LINDGAUSS_QUANTUM_HPP
#define LINDGAUSS_QUANTUM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lindgauss/gaussian.hpp"
#include "lindgauss/ode.hpp"
#include "lindgauss/semiclassical.hpp"
#include "lindgauss/symbols.hpp"

namespace lindgauss {

using SparseOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

class QuantumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor product of truncated Fock spaces, levels 0..n_max per mode.
/// Mode 0 is the slowest-varying index of the product basis.
class FockSpace {
 public:
  FockSpace(int num_modes, int n_max);
  explicit FockSpace(std::vector<int> n_max_per_mode);

  int num_modes() const { return static_cast<int>(n_max_.size()); }
  int n_max(int mode) const { return n_max_.at(mode); }
  int dimension() const { return dimension_; }
  /// Occupation of `mode` in basis state `index`.
  int occupation(int index, int mode) const { return (index / stride_[mode]) % (n_max_[mode] + 1); }
  int index_of(const std::vector<int>& occupations) const;

  const SparseOp& lowering(int mode) const { return lowering_.at(mode); }

 private:
  std::vector<int> n_max_;
  std::vector<int> stride_;
  int dimension_ = 1;
  std::vector<SparseOp> lowering_;
};

/// Normal-ordered form of a Weyl symbol: in the result, the monomial
/// c a^k abar^m stands for c (a^dagger)^m a^k. hbar = 1.
PolySymbol normal_order_of_weyl(const PolySymbol& weyl);

/// Matrix of a normal-ordered expression (ComplexAAbar chart) with exact
/// matrix elements of every monomial restricted to the truncated space.
SparseOp quantize(const PolySymbol& normal_ordered, const FockSpace& space);

/// Operator with the given Weyl symbol (RealQP or ComplexAAbar).
SparseOp quantize_weyl(const PolySymbol& weyl, const FockSpace& space);

struct QuantumModel {
  SparseOp H;
  std::vector<SparseOp> lindblads;
};

/// Operators of a model; only hbar = 1 is supported.
QuantumModel build_operators(const LindbladModel& model, const FockSpace& space);

/// (1/i)[H, rho] + sum_k L rho L^dagger - {L^dagger L, rho} / 2.
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const QuantumModel& ops);

Eigen::VectorXcd fock_ket(const FockSpace& space, const std::vector<int>& occupations);
/// Product of truncated coherent states, renormalized after truncation.
Eigen::VectorXcd coherent_ket(const FockSpace& space, const Eigen::VectorXcd& a0);

/// Largest population of the top Fock level over the modes.
double leakage(const Eigen::MatrixXcd& rho, const FockSpace& space);
double leakage(const Eigen::VectorXcd& psi, const FockSpace& space);

constexpr double kLeakageWarning = 1e-6;

struct MasterRun {
  std::vector<Event> events;
  long steps = 0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_leakage = 0.0;
};

struct MasterOptions {
  OdeOptions ode{1e-10, 1e-12};
  /// Eigenvalue positivity is checked at output times when true.
  bool monitor_positivity = true;
};

/// Integrates the master equation and calls observer(t, rho) at each time.
MasterRun integrate_master(const Eigen::MatrixXcd& rho0, const QuantumModel& ops, const FockSpace& space,
                           const std::vector<double>& times,
                           const std::function<void(double, const Eigen::MatrixXcd&)>& observer,
                           MasterOptions options = {});

/// Single-mode Wigner function of rho (hbar = 1), Laguerre recursion.
WignerGrid wigner_of_density(const Eigen::MatrixXcd& rho, const GridSpec& spec);

Moments moments_of_density(const Eigen::MatrixXcd& rho, const FockSpace& space);
Complex expectation(const Eigen::MatrixXcd& rho, const SparseOp& op);
Complex expectation(const Eigen::VectorXcd& psi, const SparseOp& op);

struct JumpObservable {
  std::string name;
  SparseOp op;
};

struct JumpOptions {
  OdeOptions ode{1e-8, 1e-10};
  double bisection_tol = 1e-10;
  int threads = 0;  // 0 uses the hardware concurrency
};

struct JumpEnsemble {
  int trajectories = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<std::string> names;
  /// mean[o][k] and standard_error[o][k] for observable o at times[k].
  std::vector<std::vector<Complex>> mean;
  std::vector<std::vector<double>> standard_error;
  /// Spread of single-trajectory values, standard_error times sqrt(trajectories).
  std::vector<std::vector<double>> spread;
  long total_jumps = 0;
  double max_leakage = 0.0;
  std::vector<Event> events;

  int index_of(const std::string& name) const;
};

/// Monte Carlo wave-function unravelling. Trajectory i draws from a generator
/// seeded with seed ^ i, so results do not depend on scheduling.
JumpEnsemble quantum_jump(const QuantumModel& ops, const FockSpace& space, const Eigen::VectorXcd& psi0,
                          const std::vector<double>& times, int n_traj, std::uint64_t seed,
                          const std::vector<JumpObservable>& observables, JumpOptions options = {});

}  // namespace lindgauss

#endif  // LINDGAUSS_QUANTUM_HPP
