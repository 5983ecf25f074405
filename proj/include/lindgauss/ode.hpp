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

#ifndef LINDGAUSS_ODE_HPP
#define LINDGAUSS_ODE_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lindgauss {

class OdeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step automatically
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 50'000'000;
};

/// Something worth telling the user about that did not stop the run.
struct Event {
  double t = 0.0;
  std::string kind;
  std::string detail;
};

/// Compact "%.6g" rendering for event details.
std::string format_number(double v);

/// Dormand-Prince 5(4) with the Hairer continuous extension.
///
/// Steps are clipped so that requested sample times are hit exactly; dense
/// output is available inside the most recent accepted step.
class DormandPrince {
 public:
  using Rhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;
  /// Called on every accepted state; may modify y in place (for example to
  /// re-symmetrize a matrix). Returning true signals that y was changed.
  using Projector = std::function<bool(double t, Eigen::VectorXd& y)>;

  DormandPrince(Rhs rhs, OdeOptions options);

  void set_projector(Projector projector) { projector_ = std::move(projector); }
  void reset(double t, const Eigen::VectorXd& y);

  /// Takes one accepted step, never passing t_limit.
  void step(double t_limit);
  /// Repeated steps until t == t_end.
  void advance_to(double t_end);

  double t() const { return t_; }
  double t_previous() const { return t_prev_; }
  const Eigen::VectorXd& y() const { return y_; }
  /// Interpolated state at t_previous() <= t <= t().
  Eigen::VectorXd dense(double t) const;

  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }
  long rhs_evaluations() const { return evaluations_; }

 private:
  double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& y1) const;
  double initial_step(double direction_span);
  void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out);

  Rhs rhs_;
  Projector projector_;
  OdeOptions options_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  Eigen::VectorXd y_;
  Eigen::VectorXd k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
  Eigen::VectorXd r1_, r2_, r3_, r4_, r5_;
  long accepted_ = 0;
  long rejected_ = 0;
  long evaluations_ = 0;
};

/// Integrates from times.front() and calls on_sample(t, y) at every entry of
/// the nondecreasing list times, including the first.
void integrate_samples(DormandPrince& solver, const Eigen::VectorXd& y0,
                       const std::vector<double>& times,
                       const std::function<void(double, const Eigen::VectorXd&)>& on_sample);

}  // namespace lindgauss

#endif  // LINDGAUSS_ODE_HPP
