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

#include "lindgauss/symbols.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace lindgauss;

namespace {

PolySymbol qp(const std::string& text, int n = 1) { return parse_symbol(text, Chart::RealQP, n); }
PolySymbol aa(const std::string& text, int n = 1) { return parse_symbol(text, Chart::ComplexAAbar, n); }
PolySymbol xy(const std::string& text, int n = 1) { return parse_symbol(text, Chart::DoubledXY, n); }

void expect_same(const PolySymbol& a, const PolySymbol& b, double tol = 1e-14) {
  EXPECT_LE(max_coefficient_difference(a, b), tol) << to_string(a) << "  vs  " << to_string(b);
}

}  // namespace

TEST(Symbols, EvalMonomial) {
  std::vector<double> pt{2.0, 3.0};
  EXPECT_EQ(qp("q*p").eval(std::span<const double>(pt)), Complex(6.0));
}

TEST(Symbols, EvalComplexChart) {
  std::vector<Complex> pt{1.0, 1.0};
  EXPECT_NEAR(std::abs(aa("a*abar - 0.5").eval(std::span<const Complex>(pt)) - 0.5), 0.0, 1e-15);
}

TEST(Symbols, EvalDimensionMismatchThrows) {
  std::vector<double> pt{1.0, 2.0, 3.0};
  EXPECT_THROW(qp("q").eval(std::span<const double>(pt)), SymbolError);
}

TEST(Symbols, EvalBoseHubbardSymbol) {
  // U/2 sum (|a_j|^4 - 2|a_j|^2 + 1/2) - J (conj(a1) a2 + conj(a2) a1) with J = 1, U = 2.
  PolySymbol h = aa("(a1^2*a1bar^2 - 2*a1*a1bar + 0.5) + (a2^2*a2bar^2 - 2*a2*a2bar + 0.5)"
                    " - (a1bar*a2 + a2bar*a1)", 2);
  std::vector<Complex> pt{1.0, 0.0, 1.0, 0.0};
  // Mode 1 contributes 1 - 2 + 1/2 and mode 2 contributes 1/2.
  EXPECT_NEAR(std::abs(h.eval(std::span<const Complex>(pt)) - Complex(0.0)), 0.0, 1e-15);
  PolySymbol h1 = aa("a1^2*a1bar^2 - 2*a1*a1bar + 0.5", 2);
  EXPECT_NEAR(std::abs(h1.eval(std::span<const Complex>(pt)) - Complex(-0.5)), 0.0, 1e-15);
}

TEST(Symbols, Gradient) {
  auto g = grad(qp("q^2"));
  expect_same(g[0], qp("2*q"));
  EXPECT_TRUE(g[1].is_zero());
  auto ga = grad(aa("a*abar"));
  expect_same(ga[0], aa("abar"));
  expect_same(ga[1], aa("a"));
  auto gc = grad(qp("q^2 + i*p^2"));
  expect_same(gc[1], qp("2i*p"));
}

TEST(Symbols, Hessian) {
  auto h = hessian(qp("q*p"));
  expect_same(h[0][1], qp("1"));
  expect_same(h[1][0], qp("1"));
  EXPECT_TRUE(h[0][0].is_zero());
  auto w = hessian(qp("0.7*(q^2 + p^2)/2"));
  expect_same(w[0][0], qp("0.7"));
  expect_same(w[1][1], qp("0.7"));
  EXPECT_TRUE(w[0][1].is_zero());
}

TEST(Symbols, PoissonBracket) {
  expect_same(poisson(qp("q"), qp("p")), qp("1"));
  expect_same(poisson(qp("q^2"), qp("p^2")), qp("4*q*p"));
  PolySymbol f = qp("q^3*p + 2*p^2 - i*q");
  EXPECT_TRUE(poisson(f, f).is_zero());
  EXPECT_THROW(poisson(aa("a"), aa("abar")), SymbolError);
  EXPECT_THROW(poisson(qp("q"), qp("q1", 2)), SymbolError);
}

TEST(Symbols, MoyalExamples) {
  expect_same(moyal(qp("q"), qp("p"), 1.0), qp("q*p + 0.5i"));
  const double hbar = 0.3;
  PolySymbol expected = qp("q^2*p^2") + qp("2i*q*p") * Complex(hbar) + qp("-0.5") * Complex(hbar * hbar);
  expect_same(moyal(qp("q^2"), qp("p^2"), hbar), expected);
  PolySymbol f = qp("q^3 - 2*i*p*q");
  expect_same(moyal(f, qp("2.5"), 0.7), Complex(2.5) * f);
}

TEST(Symbols, MoyalZeroHbarIsProduct) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    PolySymbol f = oracle::random_poly(rng, Chart::RealQP, 2, 4, 6);
    PolySymbol g = oracle::random_poly(rng, Chart::RealQP, 2, 4, 6);
    expect_same(moyal(f, g, 0.0), f * g, 0.0);
  }
}

TEST(Symbols, MoyalMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    int n = 1 + k % 2;
    PolySymbol f = oracle::random_poly(rng, Chart::RealQP, n, 4, 5);
    PolySymbol g = oracle::random_poly(rng, Chart::RealQP, n, 4, 5);
    expect_same(moyal(f, g, 0.8), oracle::brute_moyal(f, g, 0.8), 1e-13);
  }
}

TEST(Symbols, MoyalCommutatorIsPoissonForQuadratics) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    PolySymbol f = oracle::random_poly(rng, Chart::RealQP, 2, 2, 5);
    PolySymbol g = oracle::random_poly(rng, Chart::RealQP, 2, 4, 5);
    const double hbar = 0.6;
    PolySymbol lhs = moyal(f, g, hbar) - moyal(g, f, hbar);
    expect_same(lhs, Complex(0.0, hbar) * poisson(f, g), 1e-13);
  }
}

TEST(Symbols, MoyalTruncation) {
  PolySymbol f = qp("q^2"), g = qp("p^2");
  expect_same(moyal(f, g, 1.0, 0), f * g);
  expect_same(moyal(f, g, 1.0, 1), qp("q^2*p^2 + 2i*q*p"));
  expect_same(moyal_term(f, g, 2), qp("-0.5"));
}

TEST(Symbols, WeylOfNormalOrdered) {
  expect_same(weyl_of_normal_ordered(0, 1, 1, 1.0), aa("a*abar - 0.5"));
  expect_same(weyl_of_normal_ordered(0, 2, 2, 1.0), aa("a^2*abar^2 - 2*a*abar + 0.5"));
  expect_same(weyl_of_normal_ordered(0, 0, 1, 1.0), aa("a"));
  expect_same(weyl_of_normal_ordered(1, 1, 0, 1.0, 2), aa("a2bar", 2));
}

TEST(Symbols, ChartTransform) {
  PolySymbol a = chart_transform(aa("a"), Chart::RealQP);
  const double s = 1.0 / std::sqrt(2.0);
  expect_same(a, Complex(s) * qp("q") + Complex(0.0, s) * qp("p"));
  expect_same(chart_transform(aa("a*abar"), Chart::RealQP), qp("(q^2 + p^2)/2"), 1e-15);
  PolySymbol f = qp("q^2*p");
  expect_same(chart_transform(chart_transform(f, Chart::ComplexAAbar), Chart::RealQP), f, 1e-14);
  EXPECT_THROW(chart_transform(xy("x1"), Chart::RealQP), SymbolError);
}

TEST(Symbols, ChartRoundTripRandom) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    PolySymbol f = oracle::random_poly(rng, Chart::RealQP, 2, 4, 8);
    PolySymbol back = chart_transform(chart_transform(f, Chart::ComplexAAbar), Chart::RealQP);
    EXPECT_LE(max_coefficient_difference(f, back), 1e-14 * f.max_abs_coefficient());
  }
}

TEST(Symbols, DoubleLift) {
  expect_same(double_lift(qp("q"), +1), xy("x1 + 0.5*y2"));
  expect_same(double_lift(qp("3"), -1), xy("3"));
  expect_same(double_lift(qp("3"), +1), xy("3"));
  expect_same(double_lift(qp("q^2 + p^2"), -1), xy("(x1 - 0.5*y2)^2 + (x2 + 0.5*y1)^2"));
}

TEST(Symbols, DoubleLiftAtZeroChordIsIdentity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 5; ++k) {
    PolySymbol f = oracle::random_poly(rng, Chart::RealQP, 2, 3, 6);
    PolySymbol lifted = double_lift(f, k % 2 ? 1 : -1);
    std::vector<double> x(4), z(8, 0.0);
    for (int i = 0; i < 4; ++i) z[i] = x[i] = u(rng);
    EXPECT_NEAR(std::abs(lifted.eval(std::span<const double>(z)) - f.eval(std::span<const double>(x))), 0.0,
                1e-13);
  }
}

TEST(Symbols, AlgebraLaws) {
  std::mt19937_64 rng(21);
  PolySymbol f = oracle::random_poly(rng, Chart::RealQP, 1, 3, 4);
  PolySymbol g = oracle::random_poly(rng, Chart::RealQP, 1, 3, 4);
  PolySymbol h = oracle::random_poly(rng, Chart::RealQP, 1, 3, 4);
  expect_same(f * g, g * f);
  expect_same((f * g) * h, f * (g * h), 1e-14);
  expect_same((f + g) + h, f + (g + h));
}

TEST(Symbols, ConjAndParts) {
  PolySymbol L = aa("2*a^2 + i*abar");
  expect_same(L.conj(), aa("2*abar^2 - i*a"));
  PolySymbol f = qp("(1+2i)*q*p");
  expect_same(f.real_part(), qp("q*p"));
  expect_same(f.imag_part(), qp("2*q*p"));
}

TEST(Symbols, ParserRoundTrip) {
  PolySymbol f = qp("-(1.5-0.25i)*q1^2*p2 + sqrt(2)*p1 - 3", 2);
  EXPECT_EQ(max_coefficient_difference(parse_symbol(to_string(f), Chart::RealQP, 2), f), 0.0);
  PolySymbol g = aa("0.1*a1^2*a1bar a2bar", 2);
  EXPECT_EQ(max_coefficient_difference(parse_symbol(to_string(g), Chart::ComplexAAbar, 2), g), 0.0);
}

TEST(Symbols, ParserErrors) {
  EXPECT_THROW(qp("q2"), SymbolError);
  EXPECT_THROW(qp("q^"), SymbolError);
  EXPECT_THROW(qp("(q + p"), SymbolError);
  EXPECT_THROW(qp("q / p"), SymbolError);
  EXPECT_THROW(aa("q"), SymbolError);
}

TEST(Symbols, PruneThreshold) {
  PolySymbol::TermMap t{{{1, 0}, 1e-20}, {{0, 1}, 1.0}};
  PolySymbol f(Chart::RealQP, 1, t, 1e-15);
  EXPECT_EQ(f.terms().size(), 1u);
  PolySymbol g(Chart::RealQP, 1, t);
  EXPECT_EQ(g.terms().size(), 2u);
  EXPECT_THROW(PolySymbol(Chart::RealQP, 1, PolySymbol::TermMap{{{1, 0, 0}, 1.0}}), SymbolError);
}

TEST(Symbols, SymplecticForm) {
  SymplecticForm w(4);
  const auto& m = w.matrix();
  EXPECT_TRUE((m.transpose() + m).isZero());
  EXPECT_TRUE((m * m + Eigen::MatrixXd::Identity(4, 4)).isZero());
  EXPECT_THROW(SymplecticForm(3), SymbolError);
}

TEST(Symbols, CompiledMatchesTreeEvaluation) {
  std::mt19937_64 rng(4);
  PolySymbol f = oracle::random_poly(rng, Chart::DoubledXY, 1, 5, 12);
  CompiledSymbol c(f);
  Eigen::VectorXd x = Eigen::VectorXd::Random(4);
  EXPECT_NEAR(std::abs(c.eval(x) - f.eval(x)), 0.0, 1e-13);
}
