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

#ifndef LINDGAUSS_SEMICLASSICAL_HPP
#define LINDGAUSS_SEMICLASSICAL_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lindgauss/gaussian.hpp"
#include "lindgauss/ode.hpp"
#include "lindgauss/symbols.hpp"

namespace lindgauss {

/// Weyl symbols of the Hamiltonian and the Lindblad operators.
struct LindbladModel {
  int num_modes = 1;
  double hbar = 1.0;
  PolySymbol H{Chart::RealQP, 1};
  std::vector<PolySymbol> lindblads;

  Chart chart() const { return H.chart(); }
  /// Throws SymbolError unless every symbol shares the chart and mode count.
  void validate() const;
  /// Same model with every symbol rewritten in another chart.
  LindbladModel in_chart(Chart target) const;
};

/// Symbols with their derivatives precomputed, for repeated evaluation.
class CompiledModel {
 public:
  explicit CompiledModel(const LindbladModel& model);

  const LindbladModel& model() const { return model_; }
  int dimension() const { return dim_; }

  struct Jet {
    Complex value;
    Eigen::VectorXcd grad;
    Eigen::MatrixXcd hessian;
  };
  Jet hamiltonian(const Eigen::VectorXcd& x) const;
  Jet lindblad(size_t k, const Eigen::VectorXcd& x) const;
  /// Jet of the conjugate function conj(L_k) in the model's chart.
  Jet lindblad_conj(size_t k, const Eigen::VectorXcd& x) const;
  size_t num_lindblads() const { return lindblads_.size(); }

 private:
  struct CompiledJet {
    CompiledSymbol value;
    std::vector<CompiledSymbol> grad;
    std::vector<CompiledSymbol> hessian;  // row-major
  };
  static CompiledJet compile(const PolySymbol& f);
  Jet evaluate(const CompiledJet& j, const Eigen::VectorXcd& x) const;

  LindbladModel model_;
  int dim_;
  CompiledJet h_;
  std::vector<CompiledJet> lindblads_;
  std::vector<CompiledJet> lindblads_conj_;
};

struct DriftMatrices {
  Eigen::MatrixXd Lambda;
  Eigen::MatrixXd D;
};

/// Xdot = Omega grad H + Omega sum_k Im(L_k grad conj(L_k)) at X.
Eigen::VectorXd drift_X(const CompiledModel& model, const Eigen::VectorXd& X);
Eigen::VectorXd drift_X(const LindbladModel& model, const Eigen::VectorXd& X);

/// The Lindblad part of the drift as exact polynomials (RealQP).
std::vector<PolySymbol> lindblad_drift_symbolic(const LindbladModel& model);
/// Full drift as exact polynomials (RealQP).
std::vector<PolySymbol> drift_symbolic(const LindbladModel& model);

/// Lambda = H'' + sum Im(L conj(L)'') + sum Im(grad L grad conj(L)^T),
/// D = sum Re(grad L grad conj(L)^T).
DriftMatrices drift_matrices(const CompiledModel& model, const Eigen::VectorXd& X);
DriftMatrices drift_matrices(const LindbladModel& model, const Eigen::VectorXd& X);

/// Gdot = Lambda Omega G - G Omega Lambda^T + 2 G Omega D Omega G, symmetrized.
Eigen::MatrixXd rhs_G(const CompiledModel& model, const Eigen::VectorXd& X, const Eigen::MatrixXd& G);
Eigen::MatrixXd rhs_G(const LindbladModel& model, const Eigen::VectorXd& X, const Eigen::MatrixXd& G);

/// Complex-chart centre drift at Xc = (a, conj a); hbar = 1.
Eigen::VectorXcd drift_complex(const CompiledModel& model, const Eigen::VectorXcd& Xc);
Eigen::VectorXcd drift_complex(const LindbladModel& model, const Eigen::VectorXcd& Xc);

/// Complex-chart width equation for Gc = T G T^dagger; hbar = 1.
Eigen::MatrixXcd rhs_G_complex(const CompiledModel& model, const Eigen::VectorXcd& Xc,
                               const Eigen::MatrixXcd& Gc);
Eigen::MatrixXcd rhs_G_complex(const LindbladModel& model, const Eigen::VectorXcd& Xc,
                               const Eigen::MatrixXcd& Gc);

enum class FlowKind { Vanishing, GradientHolomorphic, GeneralGradient, Hamiltonian, General };

const char* flow_kind_name(FlowKind kind);

struct FlowClass {
  FlowKind kind = FlowKind::General;
  /// For GradientHolomorphic: -1 when L is holomorphic in q + ip (drift
  /// -grad|L|^2/2), +1 when holomorphic in q - ip.
  int sign = 0;
  /// Gamma with drift = grad Gamma (gradient kinds), or F with drift =
  /// Omega grad F (Hamiltonian kind).
  std::optional<PolySymbol> potential;
};

/// Classifies the flow generated by a single Lindblad symbol (RealQP).
FlowClass classify_flow(const PolySymbol& L, double tol = 1e-12);

struct SemiclassicalState {
  double t = 0.0;
  Eigen::VectorXd X;
  Eigen::MatrixXd G;
  double min_eig_physicality = 0.0;
};

struct SemiclassicalTrajectory {
  std::vector<SemiclassicalState> states;
  std::vector<Event> events;
  long steps = 0;
};

/// Integrates the centre and width equations, reporting the state at each
/// sample time. G is symmetrized after every accepted step.
SemiclassicalTrajectory integrate(const LindbladModel& model, const GaussianWigner& initial,
                                  const std::vector<double>& times, OdeOptions options = {});

/// Evenly spaced sample times t0, t0 + dt, ..., t_end.
std::vector<double> time_grid(double t0, double t_end, int intervals);

}  // namespace lindgauss

#endif  // LINDGAUSS_SEMICLASSICAL_HPP
