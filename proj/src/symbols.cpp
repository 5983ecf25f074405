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

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lindgauss {

namespace {

int chart_dimension(Chart chart, int num_modes) {
  return chart == Chart::DoubledXY ? 4 * num_modes : 2 * num_modes;
}

void require_same_space(const PolySymbol& a, const PolySymbol& b, const char* op) {
  if (!a.same_space(b)) {
    throw SymbolError(std::string(op) + ": symbols live in different charts (" +
                      chart_name(a.chart()) + "/" + std::to_string(a.num_modes()) + " vs " +
                      chart_name(b.chart()) + "/" + std::to_string(b.num_modes()) + ")");
  }
}

void accumulate(PolySymbol::TermMap& terms, const Exponents& e, Complex c) {
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms.erase(it);
  }
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Calls fn(orders) for every multi-index of the given length and total order.
template <class Fn>
void for_each_multi_index(int length, int total, std::vector<int>& buf, int pos, Fn&& fn) {
  if (pos == length - 1) {
    buf[pos] = total;
    fn(buf);
    return;
  }
  for (int k = 0; k <= total; ++k) {
    buf[pos] = k;
    for_each_multi_index(length, total - k, buf, pos + 1, fn);
  }
}

template <class Scalar>
Complex eval_impl(const PolySymbol& f, std::span<const Scalar> point) {
  if (static_cast<int>(point.size()) != f.dimension()) {
    throw SymbolError("eval: point has length " + std::to_string(point.size()) +
                      ", chart needs " + std::to_string(f.dimension()));
  }
  const int deg = std::max(f.degree(), 0);
  const int dim = f.dimension();
  // powers[v * (deg + 1) + k] = point[v]^k
  std::vector<Complex> powers(static_cast<size_t>(dim) * (deg + 1));
  for (int v = 0; v < dim; ++v) {
    Complex acc = 1.0;
    for (int k = 0; k <= deg; ++k) {
      powers[v * (deg + 1) + k] = acc;
      acc *= Complex(point[v]);
    }
  }
  Complex sum = 0.0;
  for (const auto& [e, c] : f.terms()) {
    Complex term = c;
    for (int v = 0; v < dim; ++v) {
      if (e[v] != 0) term *= powers[v * (deg + 1) + e[v]];
    }
    sum += term;
  }
  return sum;
}

}  // namespace

const char* chart_name(Chart chart) {
  switch (chart) {
    case Chart::RealQP: return "RealQP";
    case Chart::ComplexAAbar: return "ComplexAAbar";
    case Chart::DoubledXY: return "DoubledXY";
  }
  return "?";
}

PolySymbol::PolySymbol(Chart chart, int num_modes)
    : chart_(chart), num_modes_(num_modes), dimension_(chart_dimension(chart, num_modes)) {
  if (num_modes <= 0) throw SymbolError("PolySymbol: number of modes must be positive");
}

PolySymbol::PolySymbol(Chart chart, int num_modes, TermMap terms, double prune_threshold)
    : PolySymbol(chart, num_modes) {
  for (auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != dimension_) {
      throw SymbolError("PolySymbol: exponent length " + std::to_string(e.size()) +
                        " does not match chart dimension " + std::to_string(dimension_));
    }
    if (std::any_of(e.begin(), e.end(), [](int k) { return k < 0; })) {
      throw SymbolError("PolySymbol: negative exponent");
    }
    if (std::abs(c) > prune_threshold) terms_.emplace(e, c);
  }
}

PolySymbol PolySymbol::constant(Chart chart, int num_modes, Complex value) {
  PolySymbol s(chart, num_modes);
  if (value != Complex(0.0)) s.terms_.emplace(Exponents(s.dimension_, 0), value);
  return s;
}

PolySymbol PolySymbol::variable(Chart chart, int num_modes, int index, Complex coef) {
  PolySymbol s(chart, num_modes);
  if (index < 0 || index >= s.dimension_) throw SymbolError("variable: index out of range");
  Exponents e(s.dimension_, 0);
  e[index] = 1;
  if (coef != Complex(0.0)) s.terms_.emplace(std::move(e), coef);
  return s;
}

PolySymbol PolySymbol::monomial(Chart chart, int num_modes, Exponents exponents, Complex coef) {
  TermMap t;
  t.emplace(std::move(exponents), coef);
  return PolySymbol(chart, num_modes, std::move(t));
}

Complex PolySymbol::coefficient(const Exponents& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

int PolySymbol::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

double PolySymbol::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

PolySymbol PolySymbol::pruned(double eps) const {
  PolySymbol r(chart_, num_modes_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > eps) r.terms_.emplace(e, c);
  }
  return r;
}

PolySymbol PolySymbol::conj() const {
  PolySymbol r(chart_, num_modes_);
  for (const auto& [e, c] : terms_) {
    if (chart_ == Chart::ComplexAAbar) {
      Exponents swapped(e.size());
      for (int j = 0; j < num_modes_; ++j) {
        swapped[j] = e[j + num_modes_];
        swapped[j + num_modes_] = e[j];
      }
      accumulate(r.terms_, swapped, std::conj(c));
    } else {
      accumulate(r.terms_, e, std::conj(c));
    }
  }
  return r;
}

PolySymbol PolySymbol::real_part() const {
  if (chart_ == Chart::ComplexAAbar) return 0.5 * (*this + conj());
  PolySymbol r(chart_, num_modes_);
  for (const auto& [e, c] : terms_) accumulate(r.terms_, e, c.real());
  return r;
}

PolySymbol PolySymbol::imag_part() const {
  if (chart_ == Chart::ComplexAAbar) return Complex(0.0, -0.5) * (*this - conj());
  PolySymbol r(chart_, num_modes_);
  for (const auto& [e, c] : terms_) accumulate(r.terms_, e, c.imag());
  return r;
}

PolySymbol PolySymbol::derivative(int variable, int order) const {
  std::vector<int> orders(dimension_, 0);
  if (variable < 0 || variable >= dimension_) throw SymbolError("derivative: variable out of range");
  orders[variable] = order;
  return derivative(orders);
}

PolySymbol PolySymbol::derivative(std::span<const int> orders) const {
  if (static_cast<int>(orders.size()) != dimension_) {
    throw SymbolError("derivative: order multi-index has wrong length");
  }
  PolySymbol r(chart_, num_modes_);
  for (const auto& [e, c] : terms_) {
    Complex coef = c;
    Exponents ne = e;
    bool vanishes = false;
    for (int v = 0; v < dimension_ && !vanishes; ++v) {
      if (orders[v] == 0) continue;
      if (e[v] < orders[v]) {
        vanishes = true;
        break;
      }
      for (int k = 0; k < orders[v]; ++k) coef *= static_cast<double>(e[v] - k);
      ne[v] -= orders[v];
    }
    if (!vanishes) accumulate(r.terms_, ne, coef);
  }
  return r;
}

Complex PolySymbol::eval(std::span<const Complex> point) const { return eval_impl(*this, point); }
Complex PolySymbol::eval(std::span<const double> point) const { return eval_impl(*this, point); }
Complex PolySymbol::eval(const Eigen::VectorXcd& point) const {
  return eval(std::span<const Complex>(point.data(), static_cast<size_t>(point.size())));
}
Complex PolySymbol::eval(const Eigen::VectorXd& point) const {
  return eval(std::span<const double>(point.data(), static_cast<size_t>(point.size())));
}

PolySymbol PolySymbol::operator-() const { return Complex(-1.0) * *this; }

PolySymbol operator+(const PolySymbol& a, const PolySymbol& b) {
  require_same_space(a, b, "add");
  PolySymbol r = a;
  for (const auto& [e, c] : b.terms_) accumulate(r.terms_, e, c);
  return r;
}

PolySymbol operator-(const PolySymbol& a, const PolySymbol& b) {
  require_same_space(a, b, "subtract");
  PolySymbol r = a;
  for (const auto& [e, c] : b.terms_) accumulate(r.terms_, e, -c);
  return r;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  require_same_space(a, b, "multiply");
  PolySymbol r(a.chart_, a.num_modes_);
  Exponents e(a.dimension_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int v = 0; v < a.dimension_; ++v) e[v] = ea[v] + eb[v];
      accumulate(r.terms_, e, ca * cb);
    }
  }
  return r;
}

PolySymbol operator*(Complex s, const PolySymbol& a) {
  PolySymbol r(a.chart_, a.num_modes_);
  if (s == Complex(0.0)) return r;
  for (const auto& [e, c] : a.terms_) accumulate(r.terms_, e, s * c);
  return r;
}

PolySymbol operator+(const PolySymbol& a, Complex s) {
  return a + PolySymbol::constant(a.chart(), a.num_modes(), s);
}

double max_coefficient_difference(const PolySymbol& a, const PolySymbol& b) {
  return (a - b).max_abs_coefficient();
}

SymplecticForm::SymplecticForm(int dimension) {
  if (dimension <= 0 || dimension % 2 != 0) {
    throw SymbolError("SymplecticForm: dimension must be even and positive");
  }
  const int h = dimension / 2;
  matrix_ = Eigen::MatrixXd::Zero(dimension, dimension);
  matrix_.topRightCorner(h, h) = Eigen::MatrixXd::Identity(h, h);
  matrix_.bottomLeftCorner(h, h) = -Eigen::MatrixXd::Identity(h, h);
}

std::vector<PolySymbol> grad(const PolySymbol& f) {
  std::vector<PolySymbol> g;
  g.reserve(f.dimension());
  for (int v = 0; v < f.dimension(); ++v) g.push_back(f.derivative(v));
  return g;
}

std::vector<std::vector<PolySymbol>> hessian(const PolySymbol& f) {
  const int d = f.dimension();
  std::vector<std::vector<PolySymbol>> h(d);
  for (int i = 0; i < d; ++i) {
    PolySymbol di = f.derivative(i);
    h[i].reserve(d);
    for (int j = 0; j < d; ++j) {
      if (j < i) {
        h[i].push_back(h[j][i]);
      } else {
        h[i].push_back(di.derivative(j));
      }
    }
  }
  return h;
}

PolySymbol poisson(const PolySymbol& f, const PolySymbol& g) {
  require_same_space(f, g, "poisson");
  if (f.chart() == Chart::ComplexAAbar) {
    throw SymbolError("poisson: defined for RealQP and DoubledXY charts only");
  }
  const int h = f.half_dimension();
  PolySymbol r(f.chart(), f.num_modes());
  for (int j = 0; j < h; ++j) {
    r = r + f.derivative(j) * g.derivative(j + h) - f.derivative(j + h) * g.derivative(j);
  }
  return r;
}

PolySymbol moyal_term(const PolySymbol& f, const PolySymbol& g, int order) {
  require_same_space(f, g, "moyal");
  if (f.chart() == Chart::ComplexAAbar) {
    throw SymbolError("moyal: defined for RealQP and DoubledXY charts only");
  }
  if (order < 0) throw SymbolError("moyal: negative order");
  if (order == 0) return f * g;
  PolySymbol result(f.chart(), f.num_modes());
  if (f.is_zero() || g.is_zero() || order > std::min(f.degree(), g.degree())) return result;

  // (i/2)^k sum_{|alpha|+|beta|=k} (-1)^|beta| / (alpha! beta!)
  //   (d_q^alpha d_p^beta f)(d_p^alpha d_q^beta g)
  const int h = f.half_dimension();
  const int dim = f.dimension();
  const Complex prefactor = std::pow(Complex(0.0, 0.5), order);
  std::vector<int> idx(dim);
  std::vector<int> df(dim), dg(dim);
  for_each_multi_index(dim, order, idx, 0, [&](const std::vector<int>& ab) {
    int beta_total = 0;
    double weight = 1.0;
    for (int j = 0; j < h; ++j) {
      const int alpha = ab[j];
      const int beta = ab[j + h];
      beta_total += beta;
      weight /= factorial(alpha) * factorial(beta);
      df[j] = alpha;
      df[j + h] = beta;
      dg[j] = beta;
      dg[j + h] = alpha;
    }
    PolySymbol fd = f.derivative(df);
    if (fd.is_zero()) return;
    PolySymbol gd = g.derivative(dg);
    if (gd.is_zero()) return;
    const double sign = (beta_total % 2 == 0) ? 1.0 : -1.0;
    result = result + (prefactor * (sign * weight)) * (fd * gd);
  });
  return result;
}

PolySymbol moyal(const PolySymbol& f, const PolySymbol& g, double hbar,
                 std::optional<int> max_order) {
  require_same_space(f, g, "moyal");
  const int natural = std::max(0, std::min(f.degree(), g.degree()));
  const int top = max_order ? std::min(*max_order, natural) : natural;
  PolySymbol result = moyal_term(f, g, 0);
  double hk = 1.0;
  for (int k = 1; k <= top; ++k) {
    hk *= hbar;
    if (hk == 0.0) break;
    result = result + Complex(hk) * moyal_term(f, g, k);
  }
  return result;
}

PolySymbol weyl_of_normal_ordered(int mode, int m, int k, double hbar, int num_modes) {
  if (m < 0 || k < 0) throw SymbolError("weyl_of_normal_ordered: negative power");
  if (mode < 0 || mode >= num_modes) throw SymbolError("weyl_of_normal_ordered: bad mode");
  const double s = 1.0 / std::sqrt(2.0);
  const int n = num_modes;
  PolySymbol q = PolySymbol::variable(Chart::RealQP, n, mode);
  PolySymbol p = PolySymbol::variable(Chart::RealQP, n, mode + n);
  PolySymbol a = Complex(s) * q + Complex(0.0, s) * p;
  PolySymbol abar = Complex(s) * q - Complex(0.0, s) * p;
  PolySymbol acc = PolySymbol::constant(Chart::RealQP, n, 1.0);
  for (int i = 0; i < m; ++i) acc = moyal(acc, abar, hbar);
  for (int i = 0; i < k; ++i) acc = moyal(acc, a, hbar);
  return chart_transform(acc, Chart::ComplexAAbar);
}

PolySymbol substitute(const PolySymbol& f, const std::vector<PolySymbol>& images) {
  if (static_cast<int>(images.size()) != f.dimension()) {
    throw SymbolError("substitute: need one image per variable");
  }
  if (images.empty()) throw SymbolError("substitute: no images");
  const PolySymbol& proto = images.front();
  for (const auto& im : images) require_same_space(proto, im, "substitute");
  // powers[v][k] = images[v]^k, computed lazily
  std::vector<std::vector<PolySymbol>> powers(images.size());
  auto power = [&](int v, int k) -> const PolySymbol& {
    auto& pv = powers[v];
    if (pv.empty()) pv.push_back(PolySymbol::constant(proto.chart(), proto.num_modes(), 1.0));
    while (static_cast<int>(pv.size()) <= k) pv.push_back(pv.back() * images[v]);
    return pv[k];
  };
  PolySymbol result(proto.chart(), proto.num_modes());
  for (const auto& [e, c] : f.terms()) {
    PolySymbol term = PolySymbol::constant(proto.chart(), proto.num_modes(), c);
    for (int v = 0; v < f.dimension(); ++v) {
      if (e[v] != 0) term = term * power(v, e[v]);
    }
    result = result + term;
  }
  return result;
}

PolySymbol chart_transform(const PolySymbol& f, Chart target) {
  if (f.chart() == target) return f;
  const int n = f.num_modes();
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<PolySymbol> images;
  images.reserve(2 * n);
  if (f.chart() == Chart::RealQP && target == Chart::ComplexAAbar) {
    // q = (a + abar)/sqrt2, p = -i (a - abar)/sqrt2
    for (int j = 0; j < n; ++j) {
      images.push_back(PolySymbol::variable(target, n, j, s) +
                       PolySymbol::variable(target, n, j + n, s));
    }
    for (int j = 0; j < n; ++j) {
      images.push_back(PolySymbol::variable(target, n, j, Complex(0.0, -s)) +
                       PolySymbol::variable(target, n, j + n, Complex(0.0, s)));
    }
  } else if (f.chart() == Chart::ComplexAAbar && target == Chart::RealQP) {
    // a = (q + ip)/sqrt2, abar = (q - ip)/sqrt2
    for (int j = 0; j < n; ++j) {
      images.push_back(PolySymbol::variable(target, n, j, s) +
                       PolySymbol::variable(target, n, j + n, Complex(0.0, s)));
    }
    for (int j = 0; j < n; ++j) {
      images.push_back(PolySymbol::variable(target, n, j, s) +
                       PolySymbol::variable(target, n, j + n, Complex(0.0, -s)));
    }
  } else {
    throw SymbolError(std::string("chart_transform: unsupported chart pair ") +
                      chart_name(f.chart()) + " -> " + chart_name(target));
  }
  PolySymbol r = substitute(f, images);
  // Cancellation in the sqrt(2) arithmetic leaves round-off sized terms.
  return r.pruned(1e-15 * std::max(1.0, r.max_abs_coefficient()));
}

PolySymbol double_lift(const PolySymbol& f, int sign) {
  if (f.chart() != Chart::RealQP) throw SymbolError("double_lift: input must be RealQP");
  if (sign != 1 && sign != -1) throw SymbolError("double_lift: sign must be +1 or -1");
  const int n = f.num_modes();
  const int d = 2 * n;
  // Omega y = (y_p, -y_q): q_j -> q_j + s/2 y_{p_j}, p_j -> p_j - s/2 y_{q_j}
  std::vector<PolySymbol> images;
  images.reserve(d);
  const double half = 0.5 * sign;
  for (int j = 0; j < n; ++j) {
    images.push_back(PolySymbol::variable(Chart::DoubledXY, n, j) +
                     PolySymbol::variable(Chart::DoubledXY, n, d + n + j, half));
  }
  for (int j = 0; j < n; ++j) {
    images.push_back(PolySymbol::variable(Chart::DoubledXY, n, n + j) +
                     PolySymbol::variable(Chart::DoubledXY, n, d + j, -half));
  }
  return substitute(f, images);
}

CompiledSymbol::CompiledSymbol(const PolySymbol& f) : dimension_(f.dimension()) {
  offsets_.push_back(0);
  for (const auto& [e, c] : f.terms()) {
    coefficients_.push_back(c);
    for (int v = 0; v < dimension_; ++v) {
      if (e[v] == 0) continue;
      factors_.emplace_back(v, e[v]);
      max_exponent_ = std::max(max_exponent_, e[v]);
    }
    offsets_.push_back(static_cast<int>(factors_.size()));
  }
}

template <class Scalar>
Complex CompiledSymbol::eval_impl(const Scalar* point) const {
  const int stride = max_exponent_ + 1;
  // Small fixed buffer covers the models in this library without allocating.
  Complex local[256];
  std::vector<Complex> heap;
  Complex* powers = local;
  const size_t needed = static_cast<size_t>(dimension_) * stride;
  if (needed > std::size(local)) {
    heap.resize(needed);
    powers = heap.data();
  }
  for (int v = 0; v < dimension_; ++v) {
    Complex acc = 1.0;
    for (int k = 0; k < stride; ++k) {
      powers[v * stride + k] = acc;
      acc *= Complex(point[v]);
    }
  }
  Complex sum = 0.0;
  for (size_t t = 0; t < coefficients_.size(); ++t) {
    Complex term = coefficients_[t];
    for (int f = offsets_[t]; f < offsets_[t + 1]; ++f) {
      term *= powers[factors_[f].first * stride + factors_[f].second];
    }
    sum += term;
  }
  return sum;
}

Complex CompiledSymbol::eval(const Complex* point) const { return eval_impl(point); }
Complex CompiledSymbol::eval(const double* point) const { return eval_impl(point); }

}  // namespace lindgauss
