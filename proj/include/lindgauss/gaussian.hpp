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

#ifndef LINDGAUSS_GAUSSIAN_HPP
#define LINDGAUSS_GAUSSIAN_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lindgauss/linalg.hpp"

namespace lindgauss {

class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// W(x) = (pi hbar)^-n sqrt(det G) exp(-(x - X).G(x - X) / hbar),
/// with x = (q_1..q_n, p_1..p_n).
struct GaussianWigner {
  double hbar = 1.0;
  Eigen::VectorXd X;
  Eigen::MatrixXd G;

  int num_modes() const { return static_cast<int>(X.size()) / 2; }
  /// Throws StateError on shape, symmetry or definiteness violations.
  void validate() const;
  double value(const Eigen::VectorXd& x) const;
};

/// One term of a superposition's Wigner function, with xi = x - X:
///   psi(x) = weight * c(B) * exp(i/hbar (xi.B xi / 2 + Y.xi + alpha)),
/// where c(B) = prod_k lambda_k(B / 2i)^(1/4) / (pi hbar)^n over the
/// eigenvalues of B / 2i. For B = 2iG and weight (det G)^(1/4) this is the
/// real Gaussian with the same X and G.
struct ComplexGaussian {
  double hbar = 1.0;
  Eigen::VectorXd X;
  Eigen::VectorXd Y;
  Eigen::MatrixXcd B;
  Complex alpha = 0.0;
  Complex weight = 1.0;

  int num_modes() const { return static_cast<int>(X.size()) / 2; }
  void validate() const;
  Complex prefactor() const;
  Complex value(const Eigen::VectorXd& x) const;
  /// Integral of psi over phase space, in closed form.
  Complex integral() const;
  /// Integral of x psi(x), in closed form.
  Eigen::VectorXcd first_moment() const;
};

ComplexGaussian to_complex(const GaussianWigner& g);

struct SuperpositionState {
  std::vector<ComplexGaussian> components;
  /// Factor making the summed Wigner function integrate to one.
  double normalization = 1.0;

  /// Real part of the summed component integrals, before normalization.
  double raw_norm() const;
  /// Sets normalization from raw_norm().
  void normalize();
  double value(const Eigen::VectorXd& x) const;
  /// Normalized first moments (q_1..q_n, p_1..p_n).
  Eigen::VectorXd mean() const;
};

/// Blocks of Sigma = Gc^-1 = [[conj(alpha), conj(beta)], [beta, alpha]].
struct CovarianceBlocks {
  Eigen::MatrixXcd alpha_block;
  Eigen::MatrixXcd beta_block;
};

struct Moments {
  Eigen::VectorXcd mean_a;       // <a_j>
  CovarianceBlocks covariance;
  Eigen::MatrixXcd correlation;  // <a_i^dagger a_j>
};

/// Normalized first-order coherence |<a_i^+ a_j>| / sqrt(<n_i><n_j>).
double g1(const Eigen::MatrixXcd& correlation, int i, int j);

GaussianWigner coherent(int num_modes, const Eigen::VectorXcd& a0, double hbar = 1.0);

/// Real width matrix of a Gaussian wave packet exp(i/hbar (x-q).A(x-q)/2 + ...).
Eigen::MatrixXd g_from_A(const Eigen::MatrixXcd& A);

/// Wigner function of sum_j c_j phi_j, phi_j a normalized wave packet of width A
/// centred at centres[j] = (q, p). Component (i, j) carries conj(c_i) c_j and
/// is the cross Wigner function of ket phi_j and bra phi_i.
SuperpositionState cat_decompose(const std::vector<Eigen::VectorXd>& centres,
                                 const std::vector<Complex>& coeffs, const Eigen::MatrixXcd& A,
                                 double hbar = 1.0);

Moments moments(const GaussianWigner& g);

struct PhysicalityReport {
  double min_eigenvalue = 0.0;
  bool pass = false;
};

constexpr double kPhysicalityTolerance = -1e-9;

PhysicalityReport check_physical(const GaussianWigner& g);

struct GridSpec {
  double qmin = -8.0;
  double qmax = 8.0;
  int nq = 200;
  double pmin = -8.0;
  double pmax = 8.0;
  int np = 200;

  double q(int i) const { return nq == 1 ? qmin : qmin + (qmax - qmin) * i / (nq - 1); }
  double p(int j) const { return np == 1 ? pmin : pmin + (pmax - pmin) * j / (np - 1); }
  double dq() const { return nq > 1 ? (qmax - qmin) / (nq - 1) : 0.0; }
  double dp() const { return np > 1 ? (pmax - pmin) / (np - 1) : 0.0; }
  void validate() const;
};

/// Single-mode Wigner function sampled on the nodes of a uniform grid.
/// values(i, j) is the value at (q(i), p(j)).
struct WignerGrid {
  GridSpec spec;
  Eigen::MatrixXd values;

  /// Sum of node values times the cell area.
  double integral() const;
  /// Largest magnitude on the boundary relative to the largest overall.
  double boundary_ratio() const;
  std::string to_text() const;
  static WignerGrid from_text(const std::string& text);
  nlohmann::json to_json() const;
};

WignerGrid eval_wigner(const GaussianWigner& state, const GridSpec& spec);
WignerGrid eval_wigner(const ComplexGaussian& state, const GridSpec& spec);
WignerGrid eval_wigner(const SuperpositionState& state, const GridSpec& spec);

}  // namespace lindgauss

#endif  // LINDGAUSS_GAUSSIAN_HPP
