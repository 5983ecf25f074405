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

#ifndef LINDGAUSS_SYMBOLS_HPP
#define LINDGAUSS_SYMBOLS_HPP

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lindgauss {

using Complex = std::complex<double>;

/// Coordinate chart a polynomial symbol is written in.
///
///  RealQP        variables (q_1..q_n, p_1..p_n)
///  ComplexAAbar  variables (a_1..a_n, abar_1..abar_n), a = (q + ip)/sqrt(2),
///                a and abar treated as independent (Wirtinger convention)
///  DoubledXY     variables (x_1..x_2n, y_1..y_2n) of the doubled phase space
enum class Chart { RealQP, ComplexAAbar, DoubledXY };

const char* chart_name(Chart chart);

/// Raised on incompatible charts, dimensions or malformed symbol text.
class SymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Exponents = std::vector<int>;

/// Multivariate polynomial with complex coefficients.
///
/// Terms are keyed by exponent multi-index; zero coefficients are never
/// stored. Values are immutable once built: every operation returns a new
/// symbol.
class PolySymbol {
 public:
  using TermMap = std::map<Exponents, Complex>;

  PolySymbol(Chart chart, int num_modes);
  PolySymbol(Chart chart, int num_modes, TermMap terms, double prune_threshold = 0.0);

  static PolySymbol constant(Chart chart, int num_modes, Complex value);
  static PolySymbol variable(Chart chart, int num_modes, int index, Complex coef = 1.0);
  static PolySymbol monomial(Chart chart, int num_modes, Exponents exponents, Complex coef);

  Chart chart() const { return chart_; }
  int num_modes() const { return num_modes_; }
  /// Number of variables: 2n for RealQP/ComplexAAbar, 4n for DoubledXY.
  int dimension() const { return dimension_; }
  /// Variables per "position" half; the symplectic pairing is (i, i + half).
  int half_dimension() const { return dimension_ / 2; }

  const TermMap& terms() const { return terms_; }
  Complex coefficient(const Exponents& exponents) const;
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  double max_abs_coefficient() const;

  /// Drops every coefficient with magnitude <= eps.
  PolySymbol pruned(double eps) const;

  /// Complex conjugate function. In ComplexAAbar this swaps a_j <-> abar_j.
  PolySymbol conj() const;
  /// Real and imaginary parts as functions of real variables (RealQP/DoubledXY).
  PolySymbol real_part() const;
  PolySymbol imag_part() const;

  PolySymbol derivative(int variable, int order = 1) const;
  /// Mixed partial derivative, orders[i] applies to variable i.
  PolySymbol derivative(std::span<const int> orders) const;

  Complex eval(std::span<const Complex> point) const;
  Complex eval(std::span<const double> point) const;
  Complex eval(const Eigen::VectorXcd& point) const;
  Complex eval(const Eigen::VectorXd& point) const;

  PolySymbol operator-() const;
  friend PolySymbol operator+(const PolySymbol& a, const PolySymbol& b);
  friend PolySymbol operator-(const PolySymbol& a, const PolySymbol& b);
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);
  friend PolySymbol operator*(Complex s, const PolySymbol& a);
  friend PolySymbol operator*(const PolySymbol& a, Complex s) { return s * a; }
  friend PolySymbol operator+(const PolySymbol& a, Complex s);
  friend PolySymbol operator-(const PolySymbol& a, Complex s) { return a + (-s); }

  bool same_space(const PolySymbol& other) const {
    return chart_ == other.chart_ && num_modes_ == other.num_modes_;
  }

 private:
  Chart chart_;
  int num_modes_;
  int dimension_;
  TermMap terms_;
};

/// Flattened copy of a symbol for repeated evaluation in inner loops.
class CompiledSymbol {
 public:
  CompiledSymbol() = default;
  explicit CompiledSymbol(const PolySymbol& f);

  int dimension() const { return dimension_; }
  Complex eval(const Complex* point) const;
  Complex eval(const double* point) const;
  Complex eval(const Eigen::VectorXcd& point) const { return eval(point.data()); }
  Complex eval(const Eigen::VectorXd& point) const { return eval(point.data()); }

 private:
  template <class Scalar>
  Complex eval_impl(const Scalar* point) const;

  int dimension_ = 0;
  int max_exponent_ = 0;
  std::vector<Complex> coefficients_;
  // Per term: (variable, exponent) pairs for nonzero exponents only.
  std::vector<int> offsets_;
  std::vector<std::pair<int, int>> factors_;
};

/// Largest coefficient difference, over the union of monomials.
double max_coefficient_difference(const PolySymbol& a, const PolySymbol& b);

/// The 2d x 2d matrix [[0, I], [-I, 0]].
class SymplecticForm {
 public:
  explicit SymplecticForm(int dimension);
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

std::vector<PolySymbol> grad(const PolySymbol& f);
std::vector<std::vector<PolySymbol>> hessian(const PolySymbol& f);

/// grad f . Omega grad g. Requires RealQP or DoubledXY.
PolySymbol poisson(const PolySymbol& f, const PolySymbol& g);

/// Coefficient of hbar^order in the Moyal product f * g.
PolySymbol moyal_term(const PolySymbol& f, const PolySymbol& g, int order);

/// Moyal product f * g = f exp((i hbar / 2) <-grad . Omega ->grad) g.
/// The series terminates for polynomials; max_order truncates it earlier.
PolySymbol moyal(const PolySymbol& f, const PolySymbol& g, double hbar,
                 std::optional<int> max_order = std::nullopt);

/// Weyl symbol of (a^dagger_mode)^m (a_mode)^k in the ComplexAAbar chart,
/// computed by Moyal products of the elementary symbols in the RealQP chart.
PolySymbol weyl_of_normal_ordered(int mode, int m, int k, double hbar, int num_modes = 1);

/// Exact polynomial substitution: every variable i of f is replaced by images[i].
PolySymbol substitute(const PolySymbol& f, const std::vector<PolySymbol>& images);

/// RealQP <-> ComplexAAbar via a = (q + ip)/sqrt(2).
PolySymbol chart_transform(const PolySymbol& f, Chart target);

/// f(x + sign * Omega y / 2) as a DoubledXY symbol; sign is +1 or -1.
PolySymbol double_lift(const PolySymbol& f, int sign);

/// Textual notation, e.g. "0.5*q1^2 + 0.5*p1^2" or "(1+2i)*a1^2*a1bar".
/// Single-mode symbols also accept q, p, a, abar; DoubledXY uses x1.., y1...
PolySymbol parse_symbol(const std::string& text, Chart chart, int num_modes);
std::string to_string(const PolySymbol& f);

}  // namespace lindgauss

#endif  // LINDGAUSS_SYMBOLS_HPP
