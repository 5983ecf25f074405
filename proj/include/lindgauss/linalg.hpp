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

#ifndef LINDGAUSS_LINALG_HPP
#define LINDGAUSS_LINALG_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace lindgauss {

using Complex = std::complex<double>;

/// [[0, I], [-I, 0]] of size 2h x 2h.
Eigen::MatrixXd omega(int half);

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);
Eigen::MatrixXcd symmetrize(const Eigen::MatrixXcd& m);

double min_eigenvalue_symmetric(const Eigen::MatrixXd& m);
double min_eigenvalue_hermitian(const Eigen::MatrixXcd& m);

/// Smallest eigenvalue of the Hermitian matrix G^{-1} + i Omega.
double physicality_margin(const Eigen::MatrixXd& G);

/// Complex-chart transformation T = (1/sqrt 2) [[I, iI], [I, -iI]].
Eigen::MatrixXcd t_matrix(int num_modes);

/// Product of principal branch powers lambda^p over the eigenvalues of m.
/// Continuous in m as long as no eigenvalue crosses the negative real axis.
Complex eigen_power_product(const Eigen::MatrixXcd& m, double p);

/// Row-major upper triangle (including the diagonal) of a square matrix.
template <class Derived>
std::vector<typename Derived::Scalar> upper_triangle(const Eigen::MatrixBase<Derived>& m) {
  std::vector<typename Derived::Scalar> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

/// Views of a real buffer as complex storage, for ODE state packing.
inline Eigen::Map<Eigen::VectorXcd> as_complex(Eigen::VectorXd& v) {
  return {reinterpret_cast<Complex*>(v.data()), v.size() / 2};
}
inline Eigen::Map<const Eigen::VectorXcd> as_complex(const Eigen::VectorXd& v) {
  return {reinterpret_cast<const Complex*>(v.data()), v.size() / 2};
}

}  // namespace lindgauss

#endif  // LINDGAUSS_LINALG_HPP
