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

#include "lindgauss/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lindgauss {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

}  // namespace

DormandPrince::DormandPrince(Rhs rhs, OdeOptions options)
    : rhs_(std::move(rhs)), options_(options) {}

void DormandPrince::eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) {
  out.resize(y.size());
  rhs_(t, y, out);
  ++evaluations_;
}

void DormandPrince::reset(double t, const Eigen::VectorXd& y) {
  t_ = t;
  t_prev_ = t;
  y_ = y;
  if (projector_) projector_(t_, y_);
  eval(t_, y_, k1_);
  h_ = 0.0;
  r1_ = y_;
  r2_.setZero(y_.size());
  r3_.setZero(y_.size());
  r4_.setZero(y_.size());
  r5_.setZero(y_.size());
}

double DormandPrince::error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                                 const Eigen::VectorXd& y1) const {
  const Eigen::Index n = err.size();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double sk = options_.atol + options_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double r = err[i] / sk;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

double DormandPrince::initial_step(double span) {
  if (options_.initial_step > 0.0) return std::min(options_.initial_step, span);
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(y_.size());
  double dnf = error_norm(k1_, y_, zeros);
  double dny = error_norm(y_, y_, zeros);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, span);
  tmp_ = y_ + h * k1_;
  eval(t_ + h, tmp_, k2_);
  double der2 = error_norm(k2_ - k1_, y_, zeros) / h;
  double der12 = std::max(std::abs(der2), dnf);
  double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  h = std::min({100 * h, h1, span});
  if (options_.max_step > 0.0) h = std::min(h, options_.max_step);
  return h;
}

void DormandPrince::step(double t_limit) {
  const double span = t_limit - t_;
  if (span <= 0.0) return;
  if (h_ <= 0.0) h_ = initial_step(span);
  const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(t_));
  bool last_rejected = false;
  for (;;) {
    double h = std::min(h_, span);
    if (options_.max_step > 0.0) h = std::min(h, options_.max_step);
    // Avoid leaving a sliver before the limit.
    if (span - h < 1e-3 * h) h = span;
    if (h < h_floor) {
      throw OdeError("step size underflow at t = " + std::to_string(t_));
    }
    if (accepted_ + rejected_ >= options_.max_steps) {
      throw OdeError("step budget exhausted at t = " + std::to_string(t_));
    }
    const Eigen::VectorXd& y = y_;
    tmp_ = y + h * a21 * k1_;
    eval(t_ + c2 * h, tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    eval(t_ + c3 * h, tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    eval(t_ + c4 * h, tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    eval(t_ + c5 * h, tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    const double t_new = (h == span) ? t_limit : t_ + h;
    eval(t_new, tmp_, k6_);
    ynew_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    eval(t_new, ynew_, k7_);
    tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    const double err = error_norm(tmp_, y, ynew_);
    if (!std::isfinite(err)) {
      ++rejected_;
      h_ = 0.25 * h;
      last_rejected = true;
      continue;
    }
    double factor = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
    factor = std::clamp(factor, 0.2, 5.0);
    if (err <= 1.0) {
      // Continuous extension for dense output over [t_, t_new].
      r1_ = y;
      r2_ = ynew_ - y;
      r3_ = h * k1_ - r2_;
      r4_ = r2_ - h * k7_ - r3_;
      r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
      t_prev_ = t_;
      t_ = t_new;
      y_.swap(ynew_);
      k1_.swap(k7_);
      if (projector_ && projector_(t_, y_)) eval(t_, y_, k1_);
      ++accepted_;
      if (last_rejected) factor = std::min(factor, 1.0);
      // Keep the natural step length when this step was only clipped.
      h_ = h == span && h < h_ ? std::max(h_, h * factor) : h * factor;
      return;
    }
    ++rejected_;
    last_rejected = true;
    h_ = h * factor;
  }
}

void DormandPrince::advance_to(double t_end) {
  while (t_ < t_end) step(t_end);
}

Eigen::VectorXd DormandPrince::dense(double t) const {
  const double h = t_ - t_prev_;
  if (h <= 0.0) return y_;
  const double theta = (t - t_prev_) / h;
  const double theta1 = 1.0 - theta;
  return r1_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
}

void integrate_samples(DormandPrince& solver, const Eigen::VectorXd& y0,
                       const std::vector<double>& times,
                       const std::function<void(double, const Eigen::VectorXd&)>& on_sample) {
  if (times.empty()) return;
  if (!std::is_sorted(times.begin(), times.end())) {
    throw OdeError("sample times must be nondecreasing");
  }
  solver.reset(times.front(), y0);
  for (double t : times) {
    solver.advance_to(t);
    on_sample(t, solver.y());
  }
}

}  // namespace lindgauss
