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

#include "lindgauss/gaussian.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace lindgauss {

namespace {

void require_square(const Eigen::MatrixXd& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw StateError(std::string(what) + ": expected " + std::to_string(n) + "x" +
                     std::to_string(n) + " matrix");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class F>
WignerGrid sample(const GridSpec& spec, F&& f) {
  spec.validate();
  WignerGrid grid;
  grid.spec = spec;
  grid.values.resize(spec.nq, spec.np);
  Eigen::VectorXd x(2);
  for (int i = 0; i < spec.nq; ++i) {
    for (int j = 0; j < spec.np; ++j) {
      x << spec.q(i), spec.p(j);
      grid.values(i, j) = f(x);
    }
  }
  return grid;
}

void require_single_mode(int n) {
  if (n != 1) throw StateError("eval_wigner: grids are defined for single-mode states only");
}

}  // namespace

void GaussianWigner::validate() const {
  if (hbar <= 0.0) throw StateError("GaussianWigner: hbar must be positive");
  if (X.size() == 0 || X.size() % 2 != 0) throw StateError("GaussianWigner: X must have even length");
  require_square(G, X.size(), "GaussianWigner.G");
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, G.cwiseAbs().maxCoeff())) {
    throw StateError("GaussianWigner: G is not symmetric");
  }
  if (min_eigenvalue_symmetric(G) <= 0.0) throw StateError("GaussianWigner: G is not positive definite");
}

double GaussianWigner::value(const Eigen::VectorXd& x) const {
  const int n = num_modes();
  Eigen::VectorXd d = x - X;
  double norm = std::sqrt(G.determinant()) / std::pow(std::numbers::pi * hbar, n);
  return norm * std::exp(-d.dot(G * d) / hbar);
}

void ComplexGaussian::validate() const {
  if (hbar <= 0.0) throw StateError("ComplexGaussian: hbar must be positive");
  if (X.size() == 0 || X.size() % 2 != 0 || Y.size() != X.size()) {
    throw StateError("ComplexGaussian: X and Y must have equal even length");
  }
  if (B.rows() != X.size() || B.cols() != X.size()) throw StateError("ComplexGaussian: B has wrong shape");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff())) {
    throw StateError("ComplexGaussian: B is not symmetric");
  }
  if (min_eigenvalue_symmetric(B.imag()) <= 0.0) {
    throw StateError("ComplexGaussian: Im B is not positive definite");
  }
}

Complex ComplexGaussian::prefactor() const {
  const int n = num_modes();
  Eigen::MatrixXcd half = B / Complex(0.0, 2.0);
  return eigen_power_product(half, 0.25) / std::pow(std::numbers::pi * hbar, n);
}

Complex ComplexGaussian::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXcd xi = (x - X).cast<Complex>();
  // xi and Y are real, so the conjugation in dot() is harmless.
  Complex phase = 0.5 * xi.dot(B * xi) + Y.cast<Complex>().dot(xi) + alpha;
  return weight * prefactor() * std::exp(Complex(0.0, 1.0) * phase / hbar);
}

Complex ComplexGaussian::integral() const {
  const int n = num_modes();
  Eigen::MatrixXcd M = Complex(0.0, -1.0) * B / hbar;
  Eigen::VectorXcd J = Complex(0.0, 1.0) * Y.cast<Complex>() / hbar;
  Eigen::VectorXcd MiJ = M.partialPivLu().solve(J);
  Complex gauss = std::pow(2.0 * std::numbers::pi, n) * eigen_power_product(M, -0.5) *
                  std::exp(0.5 * J.cwiseProduct(MiJ).sum());
  return weight * prefactor() * std::exp(Complex(0.0, 1.0) * alpha / hbar) * gauss;
}

Eigen::VectorXcd ComplexGaussian::first_moment() const {
  Eigen::MatrixXcd M = Complex(0.0, -1.0) * B / hbar;
  Eigen::VectorXcd J = Complex(0.0, 1.0) * Y.cast<Complex>() / hbar;
  Eigen::VectorXcd centre = X.cast<Complex>() + M.partialPivLu().solve(J);
  return integral() * centre;
}

ComplexGaussian to_complex(const GaussianWigner& g) {
  ComplexGaussian c;
  c.hbar = g.hbar;
  c.X = g.X;
  c.Y = Eigen::VectorXd::Zero(g.X.size());
  c.B = Complex(0.0, 2.0) * g.G.cast<Complex>();
  c.alpha = 0.0;
  c.weight = std::pow(g.G.determinant(), 0.25);
  return c;
}

double SuperpositionState::raw_norm() const {
  Complex total = 0.0;
  for (const auto& c : components) total += c.integral();
  return total.real();
}

void SuperpositionState::normalize() {
  double raw = raw_norm();
  if (!(raw > 0.0)) throw StateError("SuperpositionState: non-positive norm");
  normalization = 1.0 / raw;
}

double SuperpositionState::value(const Eigen::VectorXd& x) const {
  double total = 0.0;
  for (const auto& c : components) total += c.value(x).real();
  return normalization * total;
}

Eigen::VectorXd SuperpositionState::mean() const {
  if (components.empty()) throw StateError("SuperpositionState: no components");
  Eigen::VectorXcd m = Eigen::VectorXcd::Zero(components.front().X.size());
  for (const auto& c : components) m += c.first_moment();
  return normalization * m.real();
}

double g1(const Eigen::MatrixXcd& correlation, int i, int j) {
  double den = std::sqrt(correlation(i, i).real() * correlation(j, j).real());
  return den > 0.0 ? std::abs(correlation(i, j)) / den : 0.0;
}

GaussianWigner coherent(int num_modes, const Eigen::VectorXcd& a0, double hbar) {
  if (a0.size() != num_modes) throw StateError("coherent: need one amplitude per mode");
  GaussianWigner g;
  g.hbar = hbar;
  g.X.resize(2 * num_modes);
  const double s = std::sqrt(2.0 * hbar);
  for (int j = 0; j < num_modes; ++j) {
    g.X[j] = s * a0[j].real();
    g.X[num_modes + j] = s * a0[j].imag();
  }
  g.G = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes);
  return g;
}

Eigen::MatrixXd g_from_A(const Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw StateError("g_from_A: A must be square");
  Eigen::MatrixXd re = A.real();
  Eigen::MatrixXd im = A.imag();
  if (min_eigenvalue_symmetric(im) <= 0.0) throw StateError("g_from_A: Im A is not positive definite");
  Eigen::MatrixXd im_inv = im.inverse();
  Eigen::MatrixXd G(2 * n, 2 * n);
  G.topLeftCorner(n, n) = im + re * im_inv * re;
  G.topRightCorner(n, n) = -re * im_inv;
  G.bottomLeftCorner(n, n) = -im_inv * re;
  G.bottomRightCorner(n, n) = im_inv;
  return symmetrize(G);
}

SuperpositionState cat_decompose(const std::vector<Eigen::VectorXd>& centres,
                                 const std::vector<Complex>& coeffs, const Eigen::MatrixXcd& A,
                                 double hbar) {
  if (centres.empty()) throw StateError("cat_decompose: need at least one centre");
  if (coeffs.size() != centres.size()) throw StateError("cat_decompose: one coefficient per centre");
  const Eigen::Index n = A.rows();
  for (const auto& c : centres) {
    if (c.size() != 2 * n) throw StateError("cat_decompose: centre length must be 2n");
  }
  Eigen::MatrixXd G = g_from_A(A);
  const double width_weight = std::pow(G.determinant(), 0.25);
  SuperpositionState state;
  for (size_t i = 0; i < centres.size(); ++i) {
    for (size_t j = 0; j < centres.size(); ++j) {
      const Eigen::VectorXd& ci = centres[i];
      const Eigen::VectorXd& cj = centres[j];
      ComplexGaussian c;
      c.hbar = hbar;
      c.X = 0.5 * (ci + cj);
      c.Y.resize(2 * n);
      c.Y.head(n) = cj.tail(n) - ci.tail(n);
      c.Y.tail(n) = ci.head(n) - cj.head(n);
      c.alpha = 0.5 * (ci.tail(n) + cj.tail(n)).dot(ci.head(n) - cj.head(n));
      c.B = Complex(0.0, 2.0) * G.cast<Complex>();
      c.weight = std::conj(coeffs[i]) * coeffs[j] * width_weight;
      state.components.push_back(std::move(c));
    }
  }
  state.normalize();
  return state;
}

Moments moments(const GaussianWigner& g) {
  const int n = g.num_modes();
  Eigen::MatrixXcd T = t_matrix(n);
  Eigen::MatrixXcd sigma = T * g.G.inverse().cast<Complex>() * T.adjoint();
  Moments m;
  m.covariance.alpha_block = sigma.bottomRightCorner(n, n);
  m.covariance.beta_block = sigma.bottomLeftCorner(n, n);
  m.mean_a.resize(n);
  const double s = 1.0 / std::sqrt(2.0 * g.hbar);
  for (int j = 0; j < n; ++j) m.mean_a[j] = s * Complex(g.X[j], g.X[n + j]);
  m.correlation.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m.correlation(i, j) = 0.5 * (m.covariance.alpha_block(i, j) +
                                   2.0 * std::conj(m.mean_a[i]) * m.mean_a[j] -
                                   (i == j ? 1.0 : 0.0));
    }
  }
  return m;
}

PhysicalityReport check_physical(const GaussianWigner& g) {
  PhysicalityReport r;
  r.min_eigenvalue = physicality_margin(g.G);
  r.pass = r.min_eigenvalue >= kPhysicalityTolerance;
  return r;
}

void GridSpec::validate() const {
  if (nq < 2 || np < 2) throw StateError("grid needs at least two samples per axis");
  if (!(qmax > qmin) || !(pmax > pmin)) throw StateError("grid axis ranges are degenerate");
}

double WignerGrid::integral() const { return values.sum() * spec.dq() * spec.dp(); }

double WignerGrid::boundary_ratio() const {
  double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  double edge = std::max({values.row(0).cwiseAbs().maxCoeff(),
                          values.row(values.rows() - 1).cwiseAbs().maxCoeff(),
                          values.col(0).cwiseAbs().maxCoeff(),
                          values.col(values.cols() - 1).cwiseAbs().maxCoeff()});
  return edge / peak;
}

std::string WignerGrid::to_text() const {
  std::ostringstream out;
  out << "# " << fmt(spec.qmin) << ' ' << fmt(spec.qmax) << ' ' << spec.nq << '\n';
  out << "# " << fmt(spec.pmin) << ' ' << fmt(spec.pmax) << ' ' << spec.np << '\n';
  for (int i = 0; i < spec.nq; ++i) {
    for (int j = 0; j < spec.np; ++j) {
      if (j) out << ' ';
      out << fmt(values(i, j));
    }
    out << '\n';
  }
  return out.str();
}

WignerGrid WignerGrid::from_text(const std::string& text) {
  std::istringstream in(text);
  WignerGrid g;
  char hash;
  if (!(in >> hash >> g.spec.qmin >> g.spec.qmax >> g.spec.nq) || hash != '#' ||
      !(in >> hash >> g.spec.pmin >> g.spec.pmax >> g.spec.np) || hash != '#') {
    throw StateError("WignerGrid: malformed header");
  }
  g.spec.validate();
  g.values.resize(g.spec.nq, g.spec.np);
  for (int i = 0; i < g.spec.nq; ++i) {
    for (int j = 0; j < g.spec.np; ++j) {
      if (!(in >> g.values(i, j))) throw StateError("WignerGrid: truncated values");
    }
  }
  return g;
}

nlohmann::json WignerGrid::to_json() const {
  nlohmann::json j;
  j["q"] = {{"min", spec.qmin}, {"max", spec.qmax}, {"n", spec.nq}};
  j["p"] = {{"min", spec.pmin}, {"max", spec.pmax}, {"n", spec.np}};
  j["layout"] = "row-major, row index q, column index p";
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(values.size()));
  for (int i = 0; i < spec.nq; ++i) {
    for (int j2 = 0; j2 < spec.np; ++j2) flat.push_back(values(i, j2));
  }
  j["values"] = flat;
  return j;
}

WignerGrid eval_wigner(const GaussianWigner& state, const GridSpec& spec) {
  require_single_mode(state.num_modes());
  return sample(spec, [&](const Eigen::VectorXd& x) { return state.value(x); });
}

WignerGrid eval_wigner(const ComplexGaussian& state, const GridSpec& spec) {
  require_single_mode(state.num_modes());
  return sample(spec, [&](const Eigen::VectorXd& x) { return state.value(x).real(); });
}

WignerGrid eval_wigner(const SuperpositionState& state, const GridSpec& spec) {
  if (state.components.empty()) throw StateError("eval_wigner: empty superposition");
  require_single_mode(state.components.front().num_modes());
  return sample(spec, [&](const Eigen::VectorXd& x) { return state.value(x); });
}

}  // namespace lindgauss
