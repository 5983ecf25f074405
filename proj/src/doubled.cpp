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
#include <sstream>

namespace lindgauss {

namespace {

struct ComponentDied {
  double t;
  double min_eigenvalue;
};

// State layout: X (2n), Y (2n), then complex storage for B (column-major) and alpha.
struct ComponentLayout {
  int d;  // 2n
  Eigen::Index size() const { return 2 * d + 2 * (d * d + 1); }

  Eigen::VectorXd pack(const ComplexGaussian& c) const {
    Eigen::VectorXd y(size());
    y.head(d) = c.X;
    y.segment(d, d) = c.Y;
    Eigen::Map<Eigen::VectorXcd> z(reinterpret_cast<Complex*>(y.data() + 2 * d), d * d + 1);
    z.head(d * d) = Eigen::Map<const Eigen::VectorXcd>(c.B.data(), d * d);
    z[d * d] = c.alpha;
    return y;
  }

  void unpack(const Eigen::VectorXd& y, ComplexGaussian& c) const {
    c.X = y.head(d);
    c.Y = y.segment(d, d);
    Eigen::Map<const Eigen::VectorXcd> z(reinterpret_cast<const Complex*>(y.data() + 2 * d), d * d + 1);
    c.B = Eigen::Map<const Eigen::MatrixXcd>(z.data(), d, d);
    c.alpha = z[d * d];
  }
};

}  // namespace

DoubledSymbol build_K(const LindbladModel& model, HamiltonianOrdering ordering) {
  model.validate();
  if (model.chart() != Chart::RealQP) throw SymbolError("build_K: model must be in the RealQP chart");
  const int n = model.num_modes;
  DoubledSymbol K{PolySymbol(Chart::DoubledXY, n), PolySymbol(Chart::DoubledXY, n)};
  PolySymbol h_minus = double_lift(model.H, -1);
  PolySymbol h_plus = double_lift(model.H, +1);
  K.K0 = ordering == HamiltonianOrdering::MinusFirst ? h_minus - h_plus : h_plus - h_minus;
  const Complex i(0.0, 1.0);
  for (const auto& L : model.lindblads) {
    PolySymbol Lc = L.conj();
    PolySymbol l_minus = double_lift(L, -1);
    PolySymbol lc_plus = double_lift(Lc, +1);
    for (int order = 0; order <= 1; ++order) {
      PolySymbol cross = moyal_term(l_minus, lc_plus, order);
      PolySymbol number = moyal_term(Lc, L, order);
      PolySymbol term = cross - 0.5 * double_lift(number, -1) - 0.5 * double_lift(number, +1);
      if (order == 0) {
        K.K0 = K.K0 + i * term;
      } else {
        K.K1 = K.K1 + i * term;
      }
    }
  }
  return K;
}

Eigen::MatrixXd script_G(const Eigen::MatrixXcd& B) {
  const Eigen::Index d = B.rows();
  Eigen::MatrixXd R = B.real();
  Eigen::MatrixXd M = B.imag();
  Eigen::MatrixXd Mi = M.inverse();
  Eigen::MatrixXd G(2 * d, 2 * d);
  G.topLeftCorner(d, d) = M + R * Mi * R;
  G.topRightCorner(d, d) = -R * Mi;
  G.bottomLeftCorner(d, d) = -Mi * R;
  G.bottomRightCorner(d, d) = Mi;
  return symmetrize(G);
}

Eigen::MatrixXd script_G_inverse(const Eigen::MatrixXcd& B) {
  const Eigen::Index d = B.rows();
  Eigen::MatrixXd R = B.real();
  Eigen::MatrixXd M = B.imag();
  Eigen::MatrixXd Mi = M.inverse();
  Eigen::MatrixXd Gi(2 * d, 2 * d);
  Gi.topLeftCorner(d, d) = Mi;
  Gi.topRightCorner(d, d) = Mi * R;
  Gi.bottomLeftCorner(d, d) = R * Mi;
  Gi.bottomRightCorner(d, d) = M + R * Mi * R;
  return symmetrize(Gi);
}

CompiledDoubled::CompiledDoubled(const DoubledSymbol& K, double hbar)
    : symbol_(K), hbar_(hbar), dim_(K.K0.dimension()), k0_(K.K0), k1_(K.K1) {
  for (const auto& g : grad(K.K0)) grad_.emplace_back(g);
  for (const auto& row : hessian(K.K0)) {
    for (const auto& h : row) hessian_.emplace_back(h);
  }
}

CompiledDoubled::Jet CompiledDoubled::evaluate(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
  Eigen::VectorXd z(dim_);
  z << X, Y;
  Jet j;
  j.K0 = k0_.eval(z);
  j.K1 = k1_.eval(z);
  j.grad.resize(dim_);
  for (int i = 0; i < dim_; ++i) j.grad[i] = grad_[i].eval(z);
  j.hessian.resize(dim_, dim_);
  for (int r = 0; r < dim_; ++r) {
    for (int c = r; c < dim_; ++c) {
      j.hessian(r, c) = hessian_[r * dim_ + c].eval(z);
      j.hessian(c, r) = j.hessian(r, c);
    }
  }
  return j;
}

ComponentRates rhs_component(const CompiledDoubled& K, const ComplexGaussian& comp) {
  const int d = K.half_dimension();
  if (comp.X.size() != d) throw StateError("rhs_component: component dimension does not match K");
  const double hbar = K.hbar();
  const Complex i(0.0, 1.0);
  auto jet = K.evaluate(comp.X, comp.Y);

  Eigen::VectorXd zdot = omega(d) * jet.grad.real() + script_G_inverse(comp.B) * jet.grad.imag();
  const Eigen::MatrixXcd& H = jet.hessian;
  Eigen::MatrixXcd Kxx = H.topLeftCorner(d, d);
  Eigen::MatrixXcd Kxy = H.topRightCorner(d, d);
  Eigen::MatrixXcd Kyx = H.bottomLeftCorner(d, d);
  Eigen::MatrixXcd Kyy = H.bottomRightCorner(d, d);
  const Eigen::MatrixXcd& B = comp.B;

  ComponentRates r;
  r.Xdot = zdot.head(d);
  r.Ydot = zdot.tail(d);
  r.Bdot = symmetrize(Eigen::MatrixXcd(-B * Kyy * B - B * Kyx - Kxy * B - Kxx));
  Eigen::MatrixXcd Binv = B.inverse();
  r.alpha_dot = i * hbar / 4.0 * (r.Bdot * Binv).trace() + comp.Y.dot(r.Xdot) - jet.K0 -
                hbar * jet.K1 + i * hbar / 2.0 * (Kxy + Kyy * B).trace();
  return r;
}

ChordGaussian chord_from_component(const ComplexGaussian& comp) {
  Eigen::MatrixXcd minv = -comp.B.inverse();
  ChordGaussian c;
  c.X = comp.X;
  c.Y = comp.Y;
  c.N = symmetrize(Eigen::MatrixXd(minv.real()));
  c.M = symmetrize(Eigen::MatrixXd(minv.imag()));
  c.norm = comp.integral();
  return c;
}

ChordRates chord_rates_from_component(const ComplexGaussian& comp, const ComponentRates& rates) {
  Eigen::MatrixXcd Binv = comp.B.inverse();
  Eigen::MatrixXcd d = Binv * rates.Bdot * Binv;
  ChordRates c;
  c.Xdot = rates.Xdot;
  c.Ydot = rates.Ydot;
  c.Ndot = d.real();
  c.Mdot = d.imag();
  return c;
}

Eigen::MatrixXd chord_diffusion(const LindbladModel& model) {
  const int d = model.H.dimension();
  Eigen::MatrixXcd W = omega(d / 2).cast<Complex>();
  Eigen::MatrixXd DD = Eigen::MatrixXd::Zero(d, d);
  for (const auto& L : model.lindblads) {
    if (L.degree() > 1) throw SymbolError("chord_diffusion: Lindblad symbols must be linear");
    Eigen::VectorXcd l(d);
    for (int k = 0; k < d; ++k) {
      Exponents e(d, 0);
      e[k] = 1;
      l[k] = L.coefficient(e);
    }
    DD += (W.transpose() * l.conjugate() * l.transpose() * W).real();
  }
  return symmetrize(DD);
}

ChordRates chord_rhs(const LindbladModel& model, const ChordGaussian& chord) {
  if (model.chart() != Chart::RealQP) throw SymbolError("chord_rhs: model must be in the RealQP chart");
  if (model.H.degree() > 2) throw SymbolError("chord_rhs: H must be at most quadratic");
  Eigen::MatrixXd DD = chord_diffusion(model);
  CompiledDoubled K(build_K(model), model.hbar);
  const int d = K.half_dimension();
  auto jet = K.evaluate(chord.X, chord.Y);
  Eigen::VectorXd g = jet.grad.real();
  Eigen::MatrixXd H = jet.hessian.real();
  Eigen::MatrixXd Kxx = H.topLeftCorner(d, d);
  Eigen::MatrixXd Kxy = H.topRightCorner(d, d);
  Eigen::MatrixXd Kyx = H.bottomLeftCorner(d, d);
  Eigen::MatrixXd Kyy = H.bottomRightCorner(d, d);
  const Eigen::MatrixXd& N = chord.N;
  const Eigen::MatrixXd& M = chord.M;
  Eigen::VectorXd MiDY = M.ldlt().solve(DD * chord.Y);

  ChordRates r;
  r.Xdot = g.tail(d) + N * MiDY;
  r.Ydot = -g.head(d) - MiDY;
  r.Mdot = DD + Kyx * M + M * Kxy - M * Kxx * N - N * Kxx * M;
  r.Ndot = -Kyy + Kyx * N + N * Kxy + M * Kxx * M - N * Kxx * N;
  return r;
}

ComponentTrajectory propagate_component(const CompiledDoubled& K, const ComplexGaussian& initial,
                                        const std::vector<double>& times, OdeOptions options) {
  initial.validate();
  const int d = K.half_dimension();
  if (initial.X.size() != d) throw StateError("propagate_component: dimension mismatch");
  ComponentLayout layout{d};
  ComplexGaussian work = initial;

  auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    layout.unpack(y, work);
    ComponentRates r = rhs_component(K, work);
    dy.head(d) = r.Xdot;
    dy.segment(d, d) = r.Ydot;
    Eigen::Map<Eigen::VectorXcd> z(reinterpret_cast<Complex*>(dy.data() + 2 * d), d * d + 1);
    z.head(d * d) = Eigen::Map<const Eigen::VectorXcd>(r.Bdot.data(), d * d);
    z[d * d] = r.alpha_dot;
  };
  DormandPrince solver(rhs, options);
  solver.set_projector([&](double t, Eigen::VectorXd& y) {
    ComplexGaussian probe = initial;
    layout.unpack(y, probe);
    double m = min_eigenvalue_symmetric(probe.B.imag());
    if (!(m >= kComponentDeathThreshold)) throw ComponentDied{t, m};
    return false;
  });

  ComponentTrajectory traj;
  ComplexGaussian last = initial;
  size_t k = 0;
  try {
    integrate_samples(solver, layout.pack(initial), times, [&](double t, const Eigen::VectorXd& y) {
      ComponentSample s;
      s.t = t;
      s.state = initial;
      layout.unpack(y, s.state);
      last = s.state;
      traj.samples.push_back(std::move(s));
      ++k;
    });
  } catch (const ComponentDied& died) {
    std::ostringstream msg;
    msg << "min eigenvalue of Im B fell to " << died.min_eigenvalue << "; component frozen with weight 0";
    traj.events.push_back({died.t, "component_death", msg.str()});
    for (; k < times.size(); ++k) {
      ComponentSample s;
      s.t = times[k];
      s.state = last;
      s.state.weight = 0.0;
      s.alive = false;
      traj.samples.push_back(std::move(s));
    }
  }
  return traj;
}

SuperpositionSeries propagate_superposition(const LindbladModel& model, const SuperpositionState& state,
                                            const std::vector<double>& times, OdeOptions options) {
  if (state.components.empty()) throw StateError("propagate_superposition: empty state");
  CompiledDoubled K(build_K(model), model.hbar);
  SuperpositionSeries series;
  series.times = times;
  for (size_t c = 0; c < state.components.size(); ++c) {
    ComponentTrajectory traj = propagate_component(K, state.components[c], times, options);
    for (auto e : traj.events) {
      e.detail = "component " + std::to_string(c) + ": " + e.detail;
      series.events.push_back(e);
    }
    series.components.push_back(std::move(traj));
  }
  for (size_t k = 0; k < times.size(); ++k) {
    SuperpositionState s;
    for (const auto& traj : series.components) s.components.push_back(traj.samples[k].state);
    double raw = s.raw_norm();
    series.raw_norms.push_back(raw);
    if (raw > 0.0) {
      s.normalize();
    } else {
      series.events.push_back({times[k], "normalization", "non-positive norm; left unnormalized"});
    }
    series.states.push_back(std::move(s));
  }
  return series;
}

}  // namespace lindgauss
