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

#ifndef LINDGAUSS_DOUBLED_HPP
#define LINDGAUSS_DOUBLED_HPP

#include <vector>

#include <Eigen/Dense>

#include "lindgauss/gaussian.hpp"
#include "lindgauss/ode.hpp"
#include "lindgauss/semiclassical.hpp"
#include "lindgauss/symbols.hpp"

namespace lindgauss {

/// The non-Hermitian generator on doubled phase space, K = K0 + hbar K1 + ...
///
/// With f(+-) = f(x +- Omega y / 2):
///   K  = H(-) - H(+) + i sum_k [L_k(-) *2 conj(L_k)(+) - (conj(L_k) * L_k)(-) / 2
///                               - (conj(L_k) * L_k)(+) / 2]
/// where *2 is the star product on the doubled space and * the one on phase space.
struct DoubledSymbol {
  PolySymbol K0{Chart::DoubledXY, 1};
  PolySymbol K1{Chart::DoubledXY, 1};
};

/// Which of the two orderings of the Hamiltonian terms to use.
enum class HamiltonianOrdering {
  MinusFirst,  // H(x - Omega y/2) - H(x + Omega y/2), the library default
  PlusFirst,   // H(x + Omega y/2) - H(x - Omega y/2)
};

DoubledSymbol build_K(const LindbladModel& model,
                      HamiltonianOrdering ordering = HamiltonianOrdering::MinusFirst);

/// Real matrix calG built from B exactly as g_from_A builds G from A.
Eigen::MatrixXd script_G(const Eigen::MatrixXcd& B);
/// Closed-form inverse of script_G(B).
Eigen::MatrixXd script_G_inverse(const Eigen::MatrixXcd& B);

class CompiledDoubled {
 public:
  explicit CompiledDoubled(const DoubledSymbol& K, double hbar);

  int half_dimension() const { return dim_ / 2; }
  double hbar() const { return hbar_; }
  const DoubledSymbol& symbol() const { return symbol_; }

  struct Jet {
    Complex K0;
    Complex K1;
    Eigen::VectorXcd grad;     // d K0 / d(x, y)
    Eigen::MatrixXcd hessian;  // 4n x 4n
  };
  Jet evaluate(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;

 private:
  DoubledSymbol symbol_;
  double hbar_;
  int dim_;
  CompiledSymbol k0_, k1_;
  std::vector<CompiledSymbol> grad_;
  std::vector<CompiledSymbol> hessian_;
};

struct ComponentRates {
  Eigen::VectorXd Xdot;
  Eigen::VectorXd Ydot;
  Eigen::MatrixXcd Bdot;
  Complex alpha_dot;
};

/// Equations of motion of one complex Gaussian component.
ComponentRates rhs_component(const CompiledDoubled& K, const ComplexGaussian& comp);

/// Fourier-side parameters of a component: -B^-1 = N + iM.
struct ChordGaussian {
  Eigen::VectorXd X;
  Eigen::VectorXd Y;
  Eigen::MatrixXd N;
  Eigen::MatrixXd M;
  Complex norm = 1.0;
};

struct ChordRates {
  Eigen::VectorXd Xdot;
  Eigen::VectorXd Ydot;
  Eigen::MatrixXd Mdot;
  Eigen::MatrixXd Ndot;
};

ChordGaussian chord_from_component(const ComplexGaussian& comp);
/// Maps component rates onto chord variables via d(-B^-1)/dt = B^-1 Bdot B^-1.
ChordRates chord_rates_from_component(const ComplexGaussian& comp, const ComponentRates& rates);

/// Diffusion matrix DD with Im K0(x, y) = -y.DD y / 2 for linear Lindblad symbols.
Eigen::MatrixXd chord_diffusion(const LindbladModel& model);

/// Chord-variable equations of motion; every Lindblad symbol must be linear
/// and H at most quadratic.
ChordRates chord_rhs(const LindbladModel& model, const ChordGaussian& chord);

struct ComponentSample {
  double t = 0.0;
  ComplexGaussian state;
  bool alive = true;
};

struct ComponentTrajectory {
  std::vector<ComponentSample> samples;
  std::vector<Event> events;
};

/// A component whose Im B smallest eigenvalue drops below this is retired.
constexpr double kComponentDeathThreshold = 1e-10;

ComponentTrajectory propagate_component(const CompiledDoubled& K, const ComplexGaussian& initial,
                                        const std::vector<double>& times, OdeOptions options = {});

struct SuperpositionSeries {
  std::vector<double> times;
  /// Renormalized states at each time.
  std::vector<SuperpositionState> states;
  /// Summed component integral before renormalization.
  std::vector<double> raw_norms;
  std::vector<ComponentTrajectory> components;
  std::vector<Event> events;
};

SuperpositionSeries propagate_superposition(const LindbladModel& model, const SuperpositionState& state,
                                            const std::vector<double>& times, OdeOptions options = {});

}  // namespace lindgauss

#endif  // LINDGAUSS_DOUBLED_HPP
