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

#include "lindgauss/quantum.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace lindgauss {

namespace {

int total_degree(const Exponents& e) {
  int d = 0;
  for (int k : e) d += k;
  return d;
}

// <n'| (a^dagger)^m a^k |n> for n' = n - k + m.
double ladder_element(int n, int m, int k) {
  if (n < k) return 0.0;
  double r = 1.0;
  for (int j = n - k + 1; j <= n; ++j) r *= j;
  for (int j = n - k + 1; j <= n - k + m; ++j) r *= j;
  return std::sqrt(r);
}

}  // namespace

FockSpace::FockSpace(int num_modes, int n_max) : FockSpace(std::vector<int>(num_modes, n_max)) {}

FockSpace::FockSpace(std::vector<int> n_max_per_mode) : n_max_(std::move(n_max_per_mode)) {
  if (n_max_.empty()) throw QuantumError("FockSpace: need at least one mode");
  for (int m : n_max_) {
    if (m < 1) throw QuantumError("FockSpace: n_max must be at least 1");
  }
  const int modes = num_modes();
  stride_.assign(modes, 1);
  for (int j = modes - 1; j >= 0; --j) {
    stride_[j] = dimension_;
    dimension_ *= n_max_[j] + 1;
  }
  for (int j = 0; j < modes; ++j) {
    std::vector<Eigen::Triplet<Complex>> t;
    for (int idx = 0; idx < dimension_; ++idx) {
      int occ = occupation(idx, j);
      if (occ > 0) t.emplace_back(idx - stride_[j], idx, std::sqrt(static_cast<double>(occ)));
    }
    SparseOp a(dimension_, dimension_);
    a.setFromTriplets(t.begin(), t.end());
    lowering_.push_back(std::move(a));
  }
}

int FockSpace::index_of(const std::vector<int>& occupations) const {
  if (static_cast<int>(occupations.size()) != num_modes()) throw QuantumError("index_of: wrong mode count");
  int idx = 0;
  for (int j = 0; j < num_modes(); ++j) {
    if (occupations[j] < 0 || occupations[j] > n_max_[j]) throw QuantumError("index_of: occupation out of range");
    idx += occupations[j] * stride_[j];
  }
  return idx;
}

PolySymbol normal_order_of_weyl(const PolySymbol& weyl) {
  PolySymbol rest = weyl.chart() == Chart::ComplexAAbar ? weyl : chart_transform(weyl, Chart::ComplexAAbar);
  const int n = rest.num_modes();
  const double eps = 1e-13 * std::max(1.0, rest.max_abs_coefficient());
  std::map<std::tuple<int, int, int>, PolySymbol> cache;
  PolySymbol::TermMap out;
  rest = rest.pruned(eps);
  while (!rest.is_zero()) {
    // Highest total degree first; lower-order corrections are generated below it.
    auto lead = rest.terms().begin();
    for (auto it = rest.terms().begin(); it != rest.terms().end(); ++it) {
      if (total_degree(it->first) > total_degree(lead->first)) lead = it;
    }
    const Exponents e = lead->first;
    const Complex c = lead->second;
    PolySymbol product = PolySymbol::constant(Chart::ComplexAAbar, n, 1.0);
    for (int j = 0; j < n; ++j) {
      const int k = e[j];
      const int m = e[n + j];
      if (k == 0 && m == 0) continue;
      auto key = std::make_tuple(j, m, k);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, weyl_of_normal_ordered(j, m, k, 1.0, n)).first;
      product = product * it->second;
    }
    out[e] += c;
    rest = (rest - c * product).pruned(eps);
    // The leading monomial of product is exactly e, so it is gone now.
    PolySymbol::TermMap cleaned = rest.terms();
    cleaned.erase(e);
    rest = PolySymbol(Chart::ComplexAAbar, n, std::move(cleaned));
  }
  return PolySymbol(Chart::ComplexAAbar, n, std::move(out), eps);
}

SparseOp quantize(const PolySymbol& normal_ordered, const FockSpace& space) {
  if (normal_ordered.chart() != Chart::ComplexAAbar) throw QuantumError("quantize: expression must be in the ComplexAAbar chart");
  const int n = space.num_modes();
  if (normal_ordered.num_modes() != n) throw QuantumError("quantize: mode count mismatch");
  std::vector<Eigen::Triplet<Complex>> t;
  std::vector<int> occ(n);
  for (const auto& [e, c] : normal_ordered.terms()) {
    for (int idx = 0; idx < space.dimension(); ++idx) {
      double amp = 1.0;
      bool inside = true;
      for (int j = 0; j < n && inside; ++j) {
        int o = space.occupation(idx, j);
        int k = e[j];
        int m = e[n + j];
        int target = o - k + m;
        if (o < k || target > space.n_max(j)) {
          inside = false;
          break;
        }
        amp *= ladder_element(o, m, k);
        occ[j] = target;
      }
      if (inside && amp != 0.0) t.emplace_back(space.index_of(occ), idx, c * amp);
    }
  }
  SparseOp op(space.dimension(), space.dimension());
  op.setFromTriplets(t.begin(), t.end());
  op.prune(Complex(0.0));
  return op;
}

SparseOp quantize_weyl(const PolySymbol& weyl, const FockSpace& space) {
  return quantize(normal_order_of_weyl(weyl), space);
}

QuantumModel build_operators(const LindbladModel& model, const FockSpace& space) {
  model.validate();
  if (model.hbar != 1.0) throw QuantumError("build_operators: only hbar = 1 is supported");
  if (model.num_modes != space.num_modes()) throw QuantumError("build_operators: mode count mismatch");
  QuantumModel ops;
  ops.H = quantize_weyl(model.H, space);
  for (const auto& L : model.lindblads) ops.lindblads.push_back(quantize_weyl(L, space));
  return ops;
}

namespace {

struct MasterSystem {
  SparseOp heff;      // H - (i/2) sum L^dagger L
  SparseOp heff_adj;  // its adjoint
  std::vector<SparseOp> ls;
  std::vector<SparseOp> ls_adj;

  explicit MasterSystem(const QuantumModel& ops) : ls(ops.lindblads) {
    heff = ops.H;
    for (const auto& L : ops.lindblads) {
      SparseOp ldl = SparseOp(L.adjoint()) * L;
      heff -= Complex(0.0, 0.5) * ldl;
      ls_adj.push_back(SparseOp(L.adjoint()));
    }
    heff_adj = SparseOp(heff.adjoint());
  }

  template <class In, class Out>
  void apply(const In& rho, Out& out) const {
    const Complex minus_i(0.0, -1.0);
    out.noalias() = minus_i * (heff * rho);
    out.noalias() -= minus_i * (rho * heff_adj);
    for (size_t k = 0; k < ls.size(); ++k) {
      Eigen::MatrixXcd lr = ls[k] * rho;
      out.noalias() += lr * ls_adj[k];
    }
  }
};

}  // namespace

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const QuantumModel& ops) {
  MasterSystem sys(ops);
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  sys.apply(rho, out);
  return out;
}

Eigen::VectorXcd fock_ket(const FockSpace& space, const std::vector<int>& occupations) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dimension());
  v[space.index_of(occupations)] = 1.0;
  return v;
}

Eigen::VectorXcd coherent_ket(const FockSpace& space, const Eigen::VectorXcd& a0) {
  if (a0.size() != space.num_modes()) throw QuantumError("coherent_ket: one amplitude per mode");
  std::vector<std::vector<Complex>> amps(space.num_modes());
  for (int j = 0; j < space.num_modes(); ++j) {
    amps[j].resize(space.n_max(j) + 1);
    amps[j][0] = std::exp(-0.5 * std::norm(a0[j]));
    for (int k = 1; k <= space.n_max(j); ++k) amps[j][k] = amps[j][k - 1] * a0[j] / std::sqrt(double(k));
  }
  Eigen::VectorXcd v(space.dimension());
  for (int idx = 0; idx < space.dimension(); ++idx) {
    Complex c = 1.0;
    for (int j = 0; j < space.num_modes(); ++j) c *= amps[j][space.occupation(idx, j)];
    v[idx] = c;
  }
  return v / v.norm();
}

double leakage(const Eigen::MatrixXcd& rho, const FockSpace& space) {
  double worst = 0.0;
  for (int j = 0; j < space.num_modes(); ++j) {
    double pop = 0.0;
    for (int idx = 0; idx < space.dimension(); ++idx) {
      if (space.occupation(idx, j) == space.n_max(j)) pop += rho(idx, idx).real();
    }
    worst = std::max(worst, pop);
  }
  return worst;
}

double leakage(const Eigen::VectorXcd& psi, const FockSpace& space) {
  double worst = 0.0;
  const double norm2 = psi.squaredNorm();
  for (int j = 0; j < space.num_modes(); ++j) {
    double pop = 0.0;
    for (int idx = 0; idx < space.dimension(); ++idx) {
      if (space.occupation(idx, j) == space.n_max(j)) pop += std::norm(psi[idx]);
    }
    worst = std::max(worst, pop / norm2);
  }
  return worst;
}

MasterRun integrate_master(const Eigen::MatrixXcd& rho0, const QuantumModel& ops, const FockSpace& space,
                           const std::vector<double>& times,
                           const std::function<void(double, const Eigen::MatrixXcd&)>& observer,
                           MasterOptions options) {
  const int N = space.dimension();
  if (rho0.rows() != N || rho0.cols() != N) throw QuantumError("integrate_master: rho0 has the wrong shape");
  MasterSystem sys(ops);
  MasterRun run;
  run.min_eigenvalue = std::numeric_limits<double>::infinity();

  const double initial_leak = leakage(rho0, space);
  if (initial_leak > 1e-10) {
    run.events.push_back({times.empty() ? 0.0 : times.front(), "leakage",
                          "initial top-level population " + format_number(initial_leak) + " exceeds 1e-10"});
  }

  auto rhs = [&](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const Complex*>(y.data()), N, N);
    Eigen::Map<Eigen::MatrixXcd> out(reinterpret_cast<Complex*>(dy.data()), N, N);
    sys.apply(rho, out);
  };
  DormandPrince solver(rhs, options.ode);
  solver.set_projector([&](double t, Eigen::VectorXd& y) {
    Eigen::Map<Eigen::MatrixXcd> rho(reinterpret_cast<Complex*>(y.data()), N, N);
    Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    rho = h;
    Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > 1e-10) {
      rho /= tr.real();
      run.events.push_back({t, "trace", "trace drifted to " + format_number(tr.real()) + "; renormalized"});
    }
    return true;
  });

  Eigen::VectorXd y0(2 * static_cast<Eigen::Index>(N) * N);
  Eigen::Map<Eigen::MatrixXcd>(reinterpret_cast<Complex*>(y0.data()), N, N) = rho0;
  bool leak_reported = initial_leak > 1e-10;
  integrate_samples(solver, y0, times, [&](double t, const Eigen::VectorXd& y) {
    Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const Complex*>(y.data()), N, N);
    Eigen::MatrixXcd r = rho;
    run.max_trace_error = std::max(run.max_trace_error, std::abs(r.trace() - 1.0));
    run.max_hermiticity_error = std::max(run.max_hermiticity_error, (r - r.adjoint()).cwiseAbs().maxCoeff());
    double leak = leakage(r, space);
    run.max_leakage = std::max(run.max_leakage, leak);
    if (leak > kLeakageWarning && !leak_reported) {
      leak_reported = true;
      run.events.push_back({t, "leakage", "top Fock level population " + format_number(leak) + " exceeds 1e-6"});
    }
    if (options.monitor_positivity) {
      double m = min_eigenvalue_hermitian(r);
      run.min_eigenvalue = std::min(run.min_eigenvalue, m);
      if (m < -1e-8) run.events.push_back({t, "positivity", "min eigenvalue " + format_number(m)});
    }
    observer(t, r);
  });
  run.steps = solver.accepted_steps();
  return run;
}

WignerGrid wigner_of_density(const Eigen::MatrixXcd& rho, const GridSpec& spec) {
  spec.validate();
  const int M = static_cast<int>(rho.rows());
  WignerGrid grid;
  grid.spec = spec;
  grid.values.resize(spec.nq, spec.np);
  std::vector<Complex> wl(M);
  std::vector<double> sq(M + 1);
  for (int k = 0; k <= M; ++k) sq[k] = std::sqrt(static_cast<double>(k));
  for (int i = 0; i < spec.nq; ++i) {
    for (int j = 0; j < spec.np; ++j) {
      const Complex A = Complex(spec.q(i), spec.p(j)) / std::numbers::sqrt2;
      const Complex Ac = std::conj(A);
      wl[0] = std::exp(-2.0 * std::norm(A)) / std::numbers::pi;
      double w = rho(0, 0).real() * wl[0].real();
      for (int n = 1; n < M; ++n) {
        wl[n] = 2.0 * A * wl[n - 1] / sq[n];
        w += 2.0 * (rho(0, n) * wl[n]).real();
      }
      for (int m = 1; m < M; ++m) {
        Complex temp = wl[m];
        wl[m] = (2.0 * Ac * temp - sq[m] * wl[m - 1]) / sq[m];
        w += (rho(m, m) * wl[m]).real();
        for (int n = m + 1; n < M; ++n) {
          Complex next = (2.0 * A * wl[n - 1] - sq[m] * temp) / sq[n];
          temp = wl[n];
          wl[n] = next;
          w += 2.0 * (rho(m, n) * wl[n]).real();
        }
      }
      grid.values(i, j) = w;
    }
  }
  return grid;
}

Complex expectation(const Eigen::MatrixXcd& rho, const SparseOp& op) {
  // Tr(rho op) = sum_{r,c} rho(c, r) op(r, c)
  Complex s = 0.0;
  for (int r = 0; r < op.outerSize(); ++r) {
    for (SparseOp::InnerIterator it(op, r); it; ++it) s += rho(it.col(), r) * it.value();
  }
  return s;
}

Complex expectation(const Eigen::VectorXcd& psi, const SparseOp& op) {
  return psi.dot(op * psi) / psi.squaredNorm();
}

Moments moments_of_density(const Eigen::MatrixXcd& rho, const FockSpace& space) {
  const int n = space.num_modes();
  Moments m;
  m.mean_a.resize(n);
  for (int j = 0; j < n; ++j) m.mean_a[j] = expectation(rho, space.lowering(j));
  m.correlation.resize(n, n);
  Eigen::MatrixXcd pair(n, n);  // <a_i a_j>
  for (int i = 0; i < n; ++i) {
    SparseOp ad = SparseOp(space.lowering(i).adjoint());
    for (int j = 0; j < n; ++j) {
      m.correlation(i, j) = expectation(rho, SparseOp(ad * space.lowering(j)));
      pair(i, j) = expectation(rho, SparseOp(space.lowering(i) * space.lowering(j)));
    }
  }
  m.covariance.alpha_block.resize(n, n);
  m.covariance.beta_block.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Commutator form avoids the truncated a a^dagger.
      m.covariance.alpha_block(i, j) =
          2.0 * m.correlation(i, j) + (i == j ? 1.0 : 0.0) - 2.0 * std::conj(m.mean_a[i]) * m.mean_a[j];
      m.covariance.beta_block(i, j) = 2.0 * std::conj(pair(j, i)) - 2.0 * std::conj(m.mean_a[i] * m.mean_a[j]);
    }
  }
  return m;
}

}  // namespace lindgauss
