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

#include "lindgauss/semiclassical.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lindgauss {

namespace {

void require_chart(const LindbladModel& model, Chart chart, const char* op) {
  if (model.chart() != chart) {
    throw SymbolError(std::string(op) + ": model must be in the " + chart_name(chart) +
                      " chart, got " + chart_name(model.chart()));
  }
}

bool negligible(const PolySymbol& f, double tol, double scale) {
  return f.max_abs_coefficient() <= tol * std::max(1.0, scale);
}

// Omega applied to a vector of symbols: (v_p, -v_q).
std::vector<PolySymbol> omega_times(const std::vector<PolySymbol>& v) {
  const size_t h = v.size() / 2;
  std::vector<PolySymbol> out;
  out.reserve(v.size());
  for (size_t j = 0; j < h; ++j) out.push_back(v[h + j]);
  for (size_t j = 0; j < h; ++j) out.push_back(-v[j]);
  return out;
}

// Gamma with grad Gamma = v if v is a gradient field, using x.grad(Gamma_k) = k Gamma_k
// for the degree-k homogeneous parts.
std::optional<PolySymbol> potential_of(const std::vector<PolySymbol>& v, double tol) {
  const int d = static_cast<int>(v.size());
  double scale = 0.0;
  for (const auto& c : v) scale = std::max(scale, c.max_abs_coefficient());
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (!negligible(v[i].derivative(j) - v[j].derivative(i), tol, scale)) return std::nullopt;
    }
  }
  const PolySymbol& proto = v.front();
  PolySymbol radial(proto.chart(), proto.num_modes());
  for (int i = 0; i < d; ++i) radial = radial + PolySymbol::variable(proto.chart(), proto.num_modes(), i) * v[i];
  PolySymbol::TermMap terms;
  for (const auto& [e, c] : radial.terms()) {
    int degree = 0;
    for (int k : e) degree += k;
    if (degree > 0) terms.emplace(e, c / static_cast<double>(degree));
  }
  PolySymbol gamma(proto.chart(), proto.num_modes(), std::move(terms));
  auto g = grad(gamma);
  for (int i = 0; i < d; ++i) {
    if (!negligible(g[i] - v[i], tol, scale)) return std::nullopt;
  }
  return gamma;
}

}  // namespace

void LindbladModel::validate() const {
  if (num_modes <= 0) throw SymbolError("LindbladModel: number of modes must be positive");
  if (hbar <= 0.0) throw SymbolError("LindbladModel: hbar must be positive");
  if (H.chart() == Chart::DoubledXY) throw SymbolError("LindbladModel: H must be a phase-space symbol");
  if (H.num_modes() != num_modes) throw SymbolError("LindbladModel: H has the wrong number of modes");
  for (const auto& L : lindblads) {
    if (!L.same_space(H)) throw SymbolError("LindbladModel: Lindblad symbol chart differs from H");
  }
}

LindbladModel LindbladModel::in_chart(Chart target) const {
  LindbladModel m = *this;
  m.H = chart_transform(H, target);
  for (auto& L : m.lindblads) L = chart_transform(L, target);
  return m;
}

CompiledModel::CompiledJet CompiledModel::compile(const PolySymbol& f) {
  CompiledJet j;
  j.value = CompiledSymbol(f);
  auto g = grad(f);
  for (const auto& gi : g) j.grad.emplace_back(gi);
  auto h = hessian(f);
  for (const auto& row : h) {
    for (const auto& hij : row) j.hessian.emplace_back(hij);
  }
  return j;
}

CompiledModel::CompiledModel(const LindbladModel& model) : model_(model), dim_(model.H.dimension()) {
  model_.validate();
  h_ = compile(model_.H);
  for (const auto& L : model_.lindblads) {
    lindblads_.push_back(compile(L));
    lindblads_conj_.push_back(compile(L.conj()));
  }
}

CompiledModel::Jet CompiledModel::evaluate(const CompiledJet& j, const Eigen::VectorXcd& x) const {
  if (x.size() != dim_) throw SymbolError("CompiledModel: point has the wrong dimension");
  Jet out;
  out.value = j.value.eval(x);
  out.grad.resize(dim_);
  for (int i = 0; i < dim_; ++i) out.grad[i] = j.grad[i].eval(x);
  out.hessian.resize(dim_, dim_);
  for (int r = 0; r < dim_; ++r) {
    for (int c = r; c < dim_; ++c) {
      out.hessian(r, c) = j.hessian[r * dim_ + c].eval(x);
      out.hessian(c, r) = out.hessian(r, c);
    }
  }
  return out;
}

CompiledModel::Jet CompiledModel::hamiltonian(const Eigen::VectorXcd& x) const { return evaluate(h_, x); }
CompiledModel::Jet CompiledModel::lindblad(size_t k, const Eigen::VectorXcd& x) const {
  return evaluate(lindblads_.at(k), x);
}
CompiledModel::Jet CompiledModel::lindblad_conj(size_t k, const Eigen::VectorXcd& x) const {
  return evaluate(lindblads_conj_.at(k), x);
}

Eigen::VectorXd drift_X(const CompiledModel& model, const Eigen::VectorXd& X) {
  require_chart(model.model(), Chart::RealQP, "drift_X");
  const int d = model.dimension();
  Eigen::VectorXcd x = X.cast<Complex>();
  Eigen::VectorXd v = model.hamiltonian(x).grad.real();
  for (size_t k = 0; k < model.num_lindblads(); ++k) {
    Complex L = model.lindblad(k, x).value;
    Eigen::VectorXcd grad_conj = model.lindblad_conj(k, x).grad;
    v += (L * grad_conj).imag();
  }
  return omega(d / 2) * v;
}

Eigen::VectorXd drift_X(const LindbladModel& model, const Eigen::VectorXd& X) {
  return drift_X(CompiledModel(model), X);
}

std::vector<PolySymbol> lindblad_drift_symbolic(const LindbladModel& model) {
  require_chart(model, Chart::RealQP, "lindblad_drift_symbolic");
  const int d = model.H.dimension();
  std::vector<PolySymbol> v(d, PolySymbol(Chart::RealQP, model.num_modes));
  for (const auto& L : model.lindblads) {
    auto g = grad(L.conj());
    for (int i = 0; i < d; ++i) v[i] = v[i] + (L * g[i]).imag_part();
  }
  return omega_times(v);
}

std::vector<PolySymbol> drift_symbolic(const LindbladModel& model) {
  auto v = lindblad_drift_symbolic(model);
  auto h = omega_times(grad(model.H.real_part()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] + h[i];
  return v;
}

DriftMatrices drift_matrices(const CompiledModel& model, const Eigen::VectorXd& X) {
  require_chart(model.model(), Chart::RealQP, "drift_matrices");
  const int d = model.dimension();
  Eigen::VectorXcd x = X.cast<Complex>();
  DriftMatrices m;
  m.Lambda = model.hamiltonian(x).hessian.real();
  m.D = Eigen::MatrixXd::Zero(d, d);
  for (size_t k = 0; k < model.num_lindblads(); ++k) {
    auto L = model.lindblad(k, x);
    auto Lc = model.lindblad_conj(k, x);
    Eigen::MatrixXcd outer = L.grad * Lc.grad.transpose();
    m.Lambda += (L.value * Lc.hessian).imag() + outer.imag();
    m.D += outer.real();
  }
  return m;
}

DriftMatrices drift_matrices(const LindbladModel& model, const Eigen::VectorXd& X) {
  return drift_matrices(CompiledModel(model), X);
}

Eigen::MatrixXd rhs_G(const CompiledModel& model, const Eigen::VectorXd& X, const Eigen::MatrixXd& G) {
  DriftMatrices m = drift_matrices(model, X);
  Eigen::MatrixXd W = omega(model.dimension() / 2);
  Eigen::MatrixXd GW = G * W;
  Eigen::MatrixXd r = m.Lambda * W * G - GW * m.Lambda.transpose() + 2.0 * GW * m.D * W * G;
  return symmetrize(r);
}

Eigen::MatrixXd rhs_G(const LindbladModel& model, const Eigen::VectorXd& X, const Eigen::MatrixXd& G) {
  return rhs_G(CompiledModel(model), X, G);
}

Eigen::VectorXcd drift_complex(const CompiledModel& model, const Eigen::VectorXcd& Xc) {
  require_chart(model.model(), Chart::ComplexAAbar, "drift_complex");
  const int d = model.dimension();
  Eigen::MatrixXcd W = omega(d / 2).cast<Complex>();
  Eigen::VectorXcd v = Complex(0.0, -1.0) * (W * model.hamiltonian(Xc).grad);
  for (size_t k = 0; k < model.num_lindblads(); ++k) {
    auto L = model.lindblad(k, Xc);
    auto Lc = model.lindblad_conj(k, Xc);
    v += 0.5 * (W * (Lc.value * L.grad - L.value * Lc.grad));
  }
  return v;
}

Eigen::VectorXcd drift_complex(const LindbladModel& model, const Eigen::VectorXcd& Xc) {
  return drift_complex(CompiledModel(model), Xc);
}

Eigen::MatrixXcd rhs_G_complex(const CompiledModel& model, const Eigen::VectorXcd& Xc,
                               const Eigen::MatrixXcd& Gc) {
  require_chart(model.model(), Chart::ComplexAAbar, "rhs_G_complex");
  const int d = model.dimension();
  const int n = d / 2;
  Eigen::MatrixXcd W = omega(n).cast<Complex>();
  Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(d, d);
  swap.topRightCorner(n, n).setIdentity();
  swap.bottomLeftCorner(n, n).setIdentity();

  Eigen::MatrixXcd K = Complex(0.0, 1.0) * model.hamiltonian(Xc).hessian;
  Eigen::MatrixXcd Gamma = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd Xi = Eigen::MatrixXcd::Zero(d, d);
  for (size_t k = 0; k < model.num_lindblads(); ++k) {
    auto L = model.lindblad(k, Xc);
    auto Lc = model.lindblad_conj(k, Xc);
    K += 0.5 * (L.value * Lc.hessian - Lc.value * L.hessian);
    Eigen::MatrixXcd a = L.grad * Lc.grad.transpose();
    Eigen::MatrixXcd b = Lc.grad * L.grad.transpose();
    Gamma += 0.5 * (a - b);
    Xi += a + b;
  }
  Xi = Xi * swap;
  Eigen::MatrixXcd r = Gc * W * (K - Gamma) - (K.conjugate() + Gamma.conjugate()) * W * Gc +
                       Gc * W * Xi * W * Gc;
  return r;
}

Eigen::MatrixXcd rhs_G_complex(const LindbladModel& model, const Eigen::VectorXcd& Xc,
                               const Eigen::MatrixXcd& Gc) {
  return rhs_G_complex(CompiledModel(model), Xc, Gc);
}

const char* flow_kind_name(FlowKind kind) {
  switch (kind) {
    case FlowKind::Vanishing: return "Vanishing";
    case FlowKind::GradientHolomorphic: return "GradientHolomorphic";
    case FlowKind::GeneralGradient: return "GeneralGradient";
    case FlowKind::Hamiltonian: return "Hamiltonian";
    case FlowKind::General: return "General";
  }
  return "?";
}

FlowClass classify_flow(const PolySymbol& L, double tol) {
  if (L.chart() != Chart::RealQP) throw SymbolError("classify_flow: L must be in the RealQP chart");
  LindbladModel single;
  single.num_modes = L.num_modes();
  single.H = PolySymbol(Chart::RealQP, L.num_modes());
  single.lindblads = {L};
  auto v = lindblad_drift_symbolic(single);
  double scale = L.max_abs_coefficient();
  scale *= scale;

  FlowClass out;
  bool all_zero = true;
  for (const auto& c : v) all_zero = all_zero && negligible(c, tol, scale);
  if (all_zero) {
    out.kind = FlowKind::Vanishing;
    return out;
  }

  auto g_re = grad(L.real_part());
  auto w_im = omega_times(grad(L.imag_part()));
  for (int sign : {-1, 1}) {
    bool match = true;
    for (size_t i = 0; i < g_re.size() && match; ++i) {
      // sign -1: grad Re L = +Omega grad Im L (holomorphic in q + ip)
      match = negligible(g_re[i] + Complex(sign) * w_im[i], tol, L.max_abs_coefficient());
    }
    if (match) {
      out.kind = FlowKind::GradientHolomorphic;
      out.sign = sign;
      out.potential = (0.5 * sign) * (L * L.conj()).real_part();
      return out;
    }
  }

  if (auto gamma = potential_of(v, tol)) {
    out.kind = FlowKind::GeneralGradient;
    out.potential = std::move(*gamma);
    return out;
  }

  // Omega^-1 = -Omega, so v = Omega grad F means grad F = -Omega v.
  std::vector<PolySymbol> w = omega_times(v);
  for (auto& c : w) c = -c;
  if (auto f = potential_of(w, tol)) {
    out.kind = FlowKind::Hamiltonian;
    out.potential = std::move(*f);
    return out;
  }
  return out;
}

SemiclassicalTrajectory integrate(const LindbladModel& model, const GaussianWigner& initial,
                                  const std::vector<double>& times, OdeOptions options) {
  require_chart(model, Chart::RealQP, "integrate");
  initial.validate();
  CompiledModel compiled(model);
  const int d = compiled.dimension();
  if (initial.X.size() != d) throw StateError("integrate: initial state has the wrong dimension");

  SemiclassicalTrajectory traj;
  auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    Eigen::VectorXd X = y.head(d);
    Eigen::Map<const Eigen::MatrixXd> G(y.data() + d, d, d);
    dy.head(d) = drift_X(compiled, X);
    Eigen::Map<Eigen::MatrixXd>(dy.data() + d, d, d) = rhs_G(compiled, X, symmetrize(Eigen::MatrixXd(G)));
  };
  DormandPrince solver(rhs, options);
  solver.set_projector([&](double t, Eigen::VectorXd& y) {
    Eigen::Map<Eigen::MatrixXd> G(y.data() + d, d, d);
    Eigen::MatrixXd S = symmetrize(Eigen::MatrixXd(G));
    bool changed = (S.array() != G.array()).any();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.eigenvalues().minCoeff() <= 1e-12) {
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-12);
      S = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
      S = symmetrize(S);
      std::ostringstream msg;
      msg << "G lost positive definiteness (min eigenvalue " << es.eigenvalues().minCoeff()
          << "); eigenvalues clamped at 1e-12";
      traj.events.push_back({t, "clamp", msg.str()});
      changed = true;
    }
    if (changed) G = S;
    return changed;
  });

  Eigen::VectorXd y0(d + d * d);
  y0.head(d) = initial.X;
  Eigen::Map<Eigen::MatrixXd>(y0.data() + d, d, d) = initial.G;
  integrate_samples(solver, y0, times, [&](double t, const Eigen::VectorXd& y) {
    SemiclassicalState s;
    s.t = t;
    s.X = y.head(d);
    s.G = Eigen::Map<const Eigen::MatrixXd>(y.data() + d, d, d);
    s.min_eig_physicality = physicality_margin(s.G);
    if (s.min_eig_physicality < kPhysicalityTolerance) {
      traj.events.push_back({t, "physicality",
                             "min eig(G^-1 + i Omega) = " + format_number(s.min_eig_physicality)});
    }
    traj.states.push_back(std::move(s));
  });
  traj.steps = solver.accepted_steps();
  return traj;
}

std::vector<double> time_grid(double t0, double t_end, int intervals) {
  if (intervals < 1 || !(t_end >= t0)) throw OdeError("time_grid: need t_end >= t0 and intervals >= 1");
  std::vector<double> t(static_cast<size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) t[k] = t0 + (t_end - t0) * k / intervals;
  return t;
}

}  // namespace lindgauss
