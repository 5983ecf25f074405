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

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library routine it is meant to check.

#ifndef LINDGAUSS_TESTS_ORACLES_HPP
#define LINDGAUSS_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lindgauss/symbols.hpp"

namespace oracle {

using lindgauss::Chart;
using lindgauss::Complex;
using lindgauss::Exponents;
using lindgauss::PolySymbol;

/// Random polynomial with `terms` monomials of total degree <= max_degree.
inline PolySymbol random_poly(std::mt19937_64& rng, Chart chart, int n, int max_degree, int terms,
                              bool real_coefficients = false) {
  PolySymbol probe(chart, n);
  const int dim = probe.dimension();
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, dim - 1);
  std::uniform_int_distribution<int> deg(0, max_degree);
  PolySymbol::TermMap t;
  for (int k = 0; k < terms; ++k) {
    Exponents e(dim, 0);
    int d = deg(rng);
    for (int j = 0; j < d; ++j) ++e[var(rng)];
    Complex c(coef(rng), real_coefficients ? 0.0 : coef(rng));
    t[e] += c;
  }
  return PolySymbol(chart, n, t);
}

/// Moyal product by explicit expansion of exp(i hbar P / 2), where P maps a pair
/// (f, g) to sum_j (d_qj f, d_pj g) - (d_pj f, d_qj g). Pairs are expanded as
/// lists, so no multi-index combinatorics are shared with the library.
inline PolySymbol brute_moyal(const PolySymbol& f, const PolySymbol& g, double hbar) {
  struct Pair {
    Complex c;
    PolySymbol f, g;
  };
  const int h = f.half_dimension();
  std::vector<Pair> level{{1.0, f, g}};
  PolySymbol total = f * g;
  Complex factor = 1.0;
  for (int k = 1; !level.empty(); ++k) {
    std::vector<Pair> next;
    for (const auto& p : level) {
      for (int j = 0; j < h; ++j) {
        PolySymbol a = p.f.derivative(j), b = p.g.derivative(j + h);
        if (!a.is_zero() && !b.is_zero()) next.push_back({p.c, a, b});
        PolySymbol c = p.f.derivative(j + h), d = p.g.derivative(j);
        if (!c.is_zero() && !d.is_zero()) next.push_back({-p.c, c, d});
      }
    }
    factor *= Complex(0.0, hbar / 2.0) / static_cast<double>(k);
    for (const auto& p : next) total = total + (factor * p.c) * (p.f * p.g);
    level = std::move(next);
  }
  return total;
}

inline Eigen::MatrixXd omega(int half) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * half, 2 * half);
  for (int j = 0; j < half; ++j) {
    w(j, half + j) = 1.0;
    w(half + j, j) = -1.0;
  }
  return w;
}

/// Central finite-difference gradient of a callable at x.
template <class F>
Eigen::VectorXd numeric_grad(F&& f, const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

/// Simpson-rule integral of f over [a, b] with an even number of panels.
template <class F>
Complex simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  Complex s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace oracle

#endif  // LINDGAUSS_TESTS_ORACLES_HPP
