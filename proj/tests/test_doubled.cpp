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

#include "lindgauss/doubled.hpp"

#include <cmath>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"

using namespace lindgauss;

namespace {

PolySymbol qp(const std::string& text, int n = 1) { return parse_symbol(text, Chart::RealQP, n); }
PolySymbol xy(const std::string& text, int n = 1) { return parse_symbol(text, Chart::DoubledXY, n); }

LindbladModel anharmonic(double beta, double gamma) {
  LindbladModel m;
  m.H = qp("(q^2 + p^2)/2") + Complex(beta / 4) * qp("q^4");
  m.lindblads.push_back(Complex(std::sqrt(gamma / 2)) * qp("q + i*p"));
  return m;
}

LindbladModel random_model(std::mt19937_64& rng, int n, int h_degree, int l_degree) {
  LindbladModel m;
  m.num_modes = n;
  m.H = oracle::random_poly(rng, Chart::RealQP, n, h_degree, 6, true);
  for (int k = 0; k < 2; ++k) m.lindblads.push_back(oracle::random_poly(rng, Chart::RealQP, n, l_degree, 4));
  return m;
}

// Homogeneous linear Lindblad symbols, as the chord equations assume.
LindbladModel random_linear_model(std::mt19937_64& rng, int n) {
  LindbladModel m = random_model(rng, n, 2, 1);
  for (auto& L : m.lindblads) {
    PolySymbol::TermMap t;
    for (const auto& [e, c] : L.terms()) {
      int deg = 0;
      for (int v : e) deg += v;
      if (deg == 1) t[e] = c;
    }
    if (t.empty()) t[Exponents(2 * n, 0)] = 0.0;
    L = PolySymbol(Chart::RealQP, n, t);
  }
  m.lindblads[0] = m.lindblads[0] + qp("q1 + i*p1", n);
  return m;
}

Eigen::VectorXd random_vec(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int dim) {
  Eigen::MatrixXd a = 0.4 * Eigen::MatrixXd(random_vec(rng, dim * dim).reshaped(dim, dim));
  return a * a.transpose() + Eigen::MatrixXd::Identity(dim, dim);
}

Eigen::MatrixXcd random_B(std::mt19937_64& rng, int dim) {
  Eigen::MatrixXd re = random_vec(rng, dim * dim, 0.5).reshaped(dim, dim);
  re = 0.5 * (re + re.transpose()).eval();
  return re.cast<Complex>() + Complex(0.0, 2.0) * random_spd(rng, dim).cast<Complex>();
}

ComplexGaussian component(const Eigen::VectorXd& X, const Eigen::VectorXd& Y, const Eigen::MatrixXcd& B) {
  ComplexGaussian c;
  c.X = X;
  c.Y = Y;
  c.B = B;
  return c;
}

// Largest y-degree parity violation: returns the max coefficient of terms whose
// total y-degree has the wrong parity.
double parity_violation(const PolySymbol& f, int parity) {
  const int half = f.dimension() / 2;
  double worst = 0.0;
  for (const auto& [e, c] : f.terms()) {
    int ydeg = 0;
    for (int i = half; i < f.dimension(); ++i) ydeg += e[i];
    if (ydeg % 2 != parity) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

}  // namespace

TEST(Doubled, AnharmonicSymbol) {
  const double beta = 0.1, gamma = 0.3;
  DoubledSymbol K = build_K(anharmonic(beta, gamma));
  PolySymbol expected = xy("x2*y1 - x1*y2") - Complex(beta / 4) * xy("x1*y2^3 + 4*x1^3*y2") -
                        Complex(gamma / 2) * xy("x1*y1 + x2*y2") - Complex(0.0, gamma / 4) * xy("y1^2 + y2^2");
  EXPECT_LE(max_coefficient_difference(K.K0, expected), 1e-15) << to_string(K.K0);
  EXPECT_LE(max_coefficient_difference(K.K1, xy("1") * Complex(0.0, gamma / 2)), 1e-15) << to_string(K.K1);
}

TEST(Doubled, OrderingSelfTest) {
  // Only one of the two orderings of the Hamiltonian terms reproduces the anharmonic symbol.
  const double beta = 0.1, gamma = 0.3;
  PolySymbol expected = xy("x2*y1 - x1*y2") - Complex(beta / 4) * xy("x1*y2^3 + 4*x1^3*y2") -
                        Complex(gamma / 2) * xy("x1*y1 + x2*y2") - Complex(0.0, gamma / 4) * xy("y1^2 + y2^2");
  PolySymbol minus = build_K(anharmonic(beta, gamma), HamiltonianOrdering::MinusFirst).K0;
  PolySymbol plus = build_K(anharmonic(beta, gamma), HamiltonianOrdering::PlusFirst).K0;
  EXPECT_LE(max_coefficient_difference(minus, expected), 1e-15);
  EXPECT_GT(max_coefficient_difference(plus, expected), 0.5);
}

TEST(Doubled, QuadraticHamiltonianOnly) {
  LindbladModel m;
  m.H = qp("q^2 + 0.4*q*p - p^2 + 3*q");
  DoubledSymbol K = build_K(m);
  EXPECT_TRUE(K.K0.imag_part().is_zero());
  EXPECT_TRUE(K.K1.is_zero());
}

TEST(Doubled, ParityInvariants) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 5; ++k) {
    const int n = 1 + k % 2;
    LindbladModel m = random_model(rng, n, 4, 3);
    DoubledSymbol K = build_K(m);
    EXPECT_LE(parity_violation(K.K0.real_part(), 1), 1e-14);
    EXPECT_LE(parity_violation(K.K0.imag_part(), 0), 1e-14);
    for (int s = 0; s < 50; ++s) {
      Eigen::VectorXd z(4 * n);
      for (int i = 0; i < 4 * n; ++i) z[i] = u(rng);
      EXPECT_LE(K.K0.eval(z).imag(), 1e-12);
    }
  }
}

TEST(Doubled, FirstOrderTermMatchesPoissonBrackets) {
  // The order-hbar term is sum (1/4)({conj L, L}(-) + {conj L, L}(+)); the doubled bracket of
  // L(-) with conj L(+) vanishes.
  std::mt19937_64 rng(43);
  for (int k = 0; k < 5; ++k) {
    const int n = 1 + k % 2;
    LindbladModel m = random_model(rng, n, 3, 3);
    m.H = qp("0", n);
    PolySymbol expected(Chart::DoubledXY, n);
    for (const auto& L : m.lindblads) {
      PolySymbol pb = poisson(L.conj(), L);
      expected = expected + Complex(0.25) * (double_lift(pb, -1) + double_lift(pb, +1));
      EXPECT_TRUE(moyal_term(double_lift(L, -1), double_lift(L.conj(), +1), 1).pruned(1e-14).is_zero());
    }
    EXPECT_LE(max_coefficient_difference(build_K(m).K1, expected), 1e-13);
  }
}

TEST(Doubled, LinearLindbladImaginaryPart) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 5; ++k) {
    const int n = 1 + k % 2;
    LindbladModel m = random_linear_model(rng, n);
    Eigen::MatrixXd DD = chord_diffusion(m);
    PolySymbol expected(Chart::DoubledXY, n);
    for (int i = 0; i < 2 * n; ++i) {
      for (int j = 0; j < 2 * n; ++j) {
        expected = expected + Complex(-0.5 * DD(i, j)) * PolySymbol::variable(Chart::DoubledXY, n, 2 * n + i) *
                                  PolySymbol::variable(Chart::DoubledXY, n, 2 * n + j);
      }
    }
    EXPECT_LE(max_coefficient_difference(build_K(m).K0.imag_part(), expected), 1e-14);
  }
}

TEST(Doubled, ScriptG) {
  std::mt19937_64 rng(53);
  Eigen::MatrixXcd B = random_B(rng, 2);
  EXPECT_TRUE((script_G(B) * script_G_inverse(B) - Eigen::MatrixXd::Identity(4, 4)).isZero(1e-12));
  EXPECT_TRUE((script_G(B) - g_from_A(B)).isZero(1e-14));
}

TEST(Doubled, ZeroChordReducesToSemiclassical) {
  std::mt19937_64 rng(59);
  for (int k = 0; k < 10; ++k) {
    const int n = 1 + k % 2;
    LindbladModel m = random_model(rng, n, 4, 3);
    CompiledDoubled K(build_K(m), 1.0);
    Eigen::VectorXd X = random_vec(rng, 2 * n);
    Eigen::MatrixXd G = random_spd(rng, 2 * n);
    ComplexGaussian c = component(X, Eigen::VectorXd::Zero(2 * n), Complex(0.0, 2.0) * G.cast<Complex>());
    ComponentRates r = rhs_component(K, c);
    Eigen::VectorXd dx = drift_X(m, X);
    Eigen::MatrixXd dg = rhs_G(m, X, G);
    EXPECT_LE(r.Ydot.norm(), 1e-13);
    EXPECT_LE((r.Xdot - dx).norm(), 1e-12 * (1.0 + dx.norm()));
    EXPECT_LE((r.Bdot / Complex(0.0, 2.0) - dg.cast<Complex>()).norm(), 1e-12 * (1.0 + dg.norm()));
  }
}

TEST(Doubled, ChordEquivalence) {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 2;
    LindbladModel m = random_linear_model(rng, n);
    CompiledDoubled K(build_K(m), 1.0);
    ComplexGaussian c = component(random_vec(rng, 2 * n), random_vec(rng, 2 * n), random_B(rng, 2 * n));
    ChordRates via_component = chord_rates_from_component(c, rhs_component(K, c));
    ChordRates direct = chord_rhs(m, chord_from_component(c));
    EXPECT_LE((direct.Xdot - via_component.Xdot).norm(), 1e-12);
    EXPECT_LE((direct.Ydot - via_component.Ydot).norm(), 1e-12);
    EXPECT_LE((direct.Mdot - via_component.Mdot).norm(), 1e-12);
    EXPECT_LE((direct.Ndot - via_component.Ndot).norm(), 1e-12);
  }
}

TEST(Doubled, ChordOfRealGaussian) {
  std::mt19937_64 rng(67);
  Eigen::MatrixXd G = random_spd(rng, 2);
  ComplexGaussian c = component(Eigen::Vector2d(1, 2), Eigen::Vector2d::Zero(), Complex(0.0, 2.0) * G.cast<Complex>());
  ChordGaussian ch = chord_from_component(c);
  EXPECT_TRUE(ch.N.isZero(1e-14));
  EXPECT_TRUE((0.5 * ch.M.inverse() - G).isZero(1e-13));
}

TEST(Doubled, ChordRejectsNonlinearLindblad) {
  LindbladModel m = anharmonic(0.0, 0.2);
  m.lindblads.push_back(qp("q^2"));
  ComplexGaussian c = component(Eigen::Vector2d(1, 2), Eigen::Vector2d::Zero(),
                                Complex(0.0, 2.0) * Eigen::MatrixXcd::Identity(2, 2));
  EXPECT_THROW(chord_rhs(m, chord_from_component(c)), SymbolError);
}

TEST(Doubled, FreeEvolutionClosedForm) {
  // K0 = (Omega x).y: X and Y rotate, B(t) = R B R^T with R = exp(Omega t), alpha is constant.
  LindbladModel m;
  m.H = qp("(q^2 + p^2)/2");
  CompiledDoubled K(build_K(m), 1.0);
  std::mt19937_64 rng(71);
  ComplexGaussian c = component(Eigen::Vector2d(1.0, -0.5), Eigen::Vector2d(0.7, 0.2), random_B(rng, 2));
  c.alpha = Complex(0.3, 0.1);
  c.weight = Complex(0.5, 0.5);
  const double t = 2.3;
  ComponentTrajectory traj = propagate_component(K, c, {0.0, t}, OdeOptions{1e-11, 1e-13});
  const ComplexGaussian& end = traj.samples.back().state;
  Eigen::MatrixXd R = (oracle::omega(1) * t).exp();
  EXPECT_LE((end.X - R * c.X).norm(), 1e-9);
  EXPECT_LE((end.Y - R * c.Y).norm(), 1e-9);
  EXPECT_LE((end.B - R.cast<Complex>() * c.B * R.transpose().cast<Complex>()).norm(), 1e-9);
  EXPECT_LE(std::abs(end.alpha - c.alpha), 1e-9);
  Eigen::Vector2d x(0.4, 0.9);
  EXPECT_LE(std::abs(end.value(x) - c.value(R.transpose() * x)), 1e-9);
}

TEST(Doubled, SingleComponentMatchesSemiclassical) {
  LindbladModel m = anharmonic(0.1, 0.3);
  GaussianWigner g = coherent(1, Eigen::VectorXcd::Constant(1, Complex(2.0, 1.0)));
  auto times = time_grid(0.0, 3.0, 30);
  SemiclassicalTrajectory sc = integrate(m, g, times, OdeOptions{1e-11, 1e-13});
  ComponentTrajectory dc = propagate_component(CompiledDoubled(build_K(m), 1.0), to_complex(g), times,
                                               OdeOptions{1e-11, 1e-13});
  ASSERT_EQ(dc.samples.size(), sc.states.size());
  double worst = 0.0, worst_y = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    const ComplexGaussian& c = dc.samples[k].state;
    worst = std::max(worst, (c.X - sc.states[k].X).norm());
    worst = std::max(worst, (c.B / Complex(0.0, 2.0) - sc.states[k].G.cast<Complex>()).norm());
    worst_y = std::max(worst_y, c.Y.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-8);
  EXPECT_LT(worst_y, 1e-10);
}

TEST(Doubled, CrossTermsDecay) {
  LindbladModel m = anharmonic(0.1, 0.3);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Constant(1, 1, Complex(0.0, 1.0));
  SuperpositionState cat = cat_decompose({Eigen::Vector2d(4, 3), Eigen::Vector2d(4, -3)}, {1.0, 1.0}, A);
  CompiledDoubled K(build_K(m), 1.0);
  auto times = time_grid(0.0, 1.0, 20);
  ComponentTrajectory cross = propagate_component(K, cat.components[1], times);
  for (size_t k = 1; k < cross.samples.size(); ++k) {
    EXPECT_GE(cross.samples[k].state.alpha.imag(), cross.samples[k - 1].state.alpha.imag() - 1e-12);
  }
}

TEST(Doubled, DampedCatMeanAndNorm) {
  // Quadratic H and linear L: the superposition evolves exactly, so the norm is
  // conserved and <a> follows the linear damping law.
  const double gamma = 0.3;
  LindbladModel m = anharmonic(0.0, gamma);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Constant(1, 1, Complex(0.0, 1.0));
  SuperpositionState cat = cat_decompose({Eigen::Vector2d(1.5, 1.0), Eigen::Vector2d(1.0, -1.0)},
                                         {1.0, Complex(0.0, 1.0)}, A);
  Eigen::VectorXd m0 = cat.mean();
  const Complex a0 = Complex(m0[0], m0[1]) / std::sqrt(2.0);
  auto times = time_grid(0.0, 2.0, 8);
  SuperpositionSeries series = propagate_superposition(m, cat, times);
  ASSERT_EQ(series.states.size(), times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    EXPECT_NEAR(series.raw_norms[k], cat.raw_norm(), 1e-8);
    Eigen::VectorXd mean = series.states[k].mean();
    Complex a = Complex(mean[0], mean[1]) / std::sqrt(2.0);
    EXPECT_LT(std::abs(a - a0 * std::exp(Complex(-gamma / 2, -1.0) * times[k])), 1e-8);
  }
}
