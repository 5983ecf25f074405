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

#include "lindgauss/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace lindgauss {

Eigen::MatrixXd omega(int half) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * half, 2 * half);
  w.topRightCorner(half, half).setIdentity();
  w.bottomLeftCorner(half, half) = -Eigen::MatrixXd::Identity(half, half);
  return w;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }
Eigen::MatrixXcd symmetrize(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_eigenvalue_hermitian(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double physicality_margin(const Eigen::MatrixXd& G) {
  const int half = static_cast<int>(G.rows()) / 2;
  Eigen::MatrixXcd m = G.inverse().cast<Complex>();
  m += Complex(0.0, 1.0) * omega(half).cast<Complex>();
  return min_eigenvalue_hermitian(m);
}

Eigen::MatrixXcd t_matrix(int n) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    t(j, j) = s;
    t(j, n + j) = Complex(0.0, s);
    t(n + j, j) = s;
    t(n + j, n + j) = Complex(0.0, -s);
  }
  return t;
}

Complex eigen_power_product(const Eigen::MatrixXcd& m, double p) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  Complex r = 1.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    r *= std::pow(es.eigenvalues()[i], p);
  }
  return r;
}

}  // namespace lindgauss
