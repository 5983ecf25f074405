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

#include <cmath>

#include "lindgauss/doubled.hpp"
#include "lindgauss/harness.hpp"
#include "lindgauss/quantum.hpp"

namespace lindgauss::harness {

std::vector<Check> selftest() {
  std::vector<Check> checks;
  const double beta = 0.1, gamma = 0.3;

  // Doubled symbol of the damped anharmonic oscillator in closed form.
  LindbladModel anh;
  anh.H = parse_symbol("(q^2 + p^2)/2", Chart::RealQP, 1) + Complex(beta / 4) * parse_symbol("q^4", Chart::RealQP, 1);
  anh.lindblads = {Complex(std::sqrt(gamma / 2)) * parse_symbol("q + i*p", Chart::RealQP, 1)};
  auto xy = [](const std::string& s) { return parse_symbol(s, Chart::DoubledXY, 1); };
  PolySymbol expected = xy("x2*y1 - x1*y2") - Complex(beta / 4) * xy("x1*y2^3 + 4*x1^3*y2") -
                        Complex(gamma / 2) * xy("x1*y1 + x2*y2") - Complex(0.0, gamma / 4) * xy("y1^2 + y2^2");
  checks.push_back(make_check("doubled_symbol_ordering",
                              max_coefficient_difference(build_K(anh, HamiltonianOrdering::MinusFirst).K0, expected),
                              1e-14));
  checks.push_back(make_check("doubled_symbol_ordering_discriminates",
                              max_coefficient_difference(build_K(anh, HamiltonianOrdering::PlusFirst).K0, expected),
                              0.5, ">="));

  // Canonical commutator and the number operator.
  const double hbar = 0.7;
  const PolySymbol q = parse_symbol("q", Chart::RealQP, 1), p = parse_symbol("p", Chart::RealQP, 1);
  PolySymbol comm = moyal(q, p, hbar) - moyal(p, q, hbar);
  checks.push_back(make_check("moyal_commutator",
                              max_coefficient_difference(comm, PolySymbol::constant(Chart::RealQP, 1, Complex(0, hbar))),
                              1e-15));
  PolySymbol number = parse_symbol("a*abar", Chart::ComplexAAbar, 1) -
                      PolySymbol::constant(Chart::ComplexAAbar, 1, Complex(hbar / 2));
  checks.push_back(make_check("weyl_number_operator",
                              max_coefficient_difference(weyl_of_normal_ordered(0, 1, 1, hbar), number), 1e-15));

  // Real and complex charts give the same drift.
  LindbladModel lc;
  lc.H = parse_symbol("a*abar", Chart::ComplexAAbar, 1);
  lc.lindblads = {parse_symbol("sqrt(0.1)*a", Chart::ComplexAAbar, 1),
                  parse_symbol("sqrt(0.01)*a^2", Chart::ComplexAAbar, 1),
                  parse_symbol("sqrt(0.15)*abar", Chart::ComplexAAbar, 1)};
  const Complex a(0.8, -1.1);
  const Eigen::Vector2d X(std::sqrt(2.0) * a.real(), std::sqrt(2.0) * a.imag());
  Eigen::VectorXd dX = drift_X(lc.in_chart(Chart::RealQP), X);
  Eigen::VectorXcd dc = drift_complex(lc, Eigen::Vector2cd(a, std::conj(a)));
  Complex closed = Complex(0, -1) * a + 0.5 * (0.15 - 0.1) * a - 0.01 * std::norm(a) * a;
  checks.push_back(make_check("complex_drift_closed_form", std::abs(dc(0) - closed), 1e-14));
  checks.push_back(make_check("chart_equivalence", std::abs(Complex(dX(0), dX(1)) / std::sqrt(2.0) - dc(0)), 1e-14));

  // A component with Y = 0 obeys the centre and width equations.
  Eigen::Matrix2d G;
  G << 1.3, 0.2, 0.2, 0.9;
  GaussianWigner g{1.0, Eigen::Vector2d(1.2, -0.4), G};
  ComponentRates r = rhs_component(CompiledDoubled(build_K(anh), 1.0), to_complex(g));
  double red = (r.Xdot - drift_X(anh, g.X)).cwiseAbs().maxCoeff();
  red = std::max(red, (r.Bdot / Complex(0.0, 2.0) - rhs_G(anh, g.X, G).cast<Complex>()).cwiseAbs().maxCoeff());
  red = std::max(red, r.Ydot.cwiseAbs().maxCoeff());
  checks.push_back(make_check("doubled_reduction", red, 1e-12));

  // The Lindblad generator is trace-free.
  FockSpace space(1, 12);
  QuantumModel ops = build_operators(anh, space);
  Eigen::VectorXcd psi = coherent_ket(space, Eigen::VectorXcd::Constant(1, Complex(1.0, 0.5)));
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  checks.push_back(make_check("master_trace_free", std::abs(lindblad_rhs(rho, ops).trace()), 1e-12));
  return checks;
}

}  // namespace lindgauss::harness
