// Copyright 2026 The lqrgaifo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "lqrgaifo/dynamics_model.hpp"
#include "lqrgaifo/environment.hpp"
#include "lqrgaifo/linear_gaussian_controller.hpp"
#include "lqrgaifo/numerics.hpp"

namespace lqrgaifo {

// Per-timestep quadratic cost over x = [s; a] in absolute coordinates:
//   c_t(x) = 1/2 x^T C_t x + x^T c_t + const_t,
// plus an optional terminal quadratic over s_T.
struct QuadraticCost {
  std::vector<Matrix> hessian;   // C_t
  std::vector<Vector> gradient;  // c_t
  std::vector<double> constant;  // const_t
  Matrix terminal_hessian;       // empty means zero
  Vector terminal_gradient;
  double terminal_constant = 0.0;

  int horizon() const { return static_cast<int>(hessian.size()); }
  bool has_terminal() const { return terminal_hessian.size() > 0; }

  double stage(int t, const Vector& s, const Vector& a) const;
  double terminal(const Vector& s) const;

  static QuadraticCost zeros(int state_dim, int action_dim, int horizon);
};

// Smooth cost with analytic derivatives, expanded by iLQR about a nominal.
class CostFunction {
 public:
  virtual ~CostFunction() = default;
  virtual double stage(int t, const Vector& s, const Vector& a) const = 0;
  // Gradient and Hessian with respect to [s; a].
  virtual void stage_derivatives(int t, const Vector& s, const Vector& a, Vector& gradient,
                                 Matrix& hessian) const = 0;
  virtual double terminal(const Vector&) const { return 0.0; }
  virtual void terminal_derivatives(const Vector& s, Vector& gradient, Matrix& hessian) const {
    gradient = Vector::Zero(s.size());
    hessian = Matrix::Zero(s.size(), s.size());
  }
};

// The time-varying quadratic cost viewed as a CostFunction.
class QuadraticCostFunction final : public CostFunction {
 public:
  explicit QuadraticCostFunction(QuadraticCost cost) : cost_(std::move(cost)) {}
  double stage(int t, const Vector& s, const Vector& a) const override;
  void stage_derivatives(int t, const Vector& s, const Vector& a, Vector& gradient,
                         Matrix& hessian) const override;
  double terminal(const Vector& s) const override;
  void terminal_derivatives(const Vector& s, Vector& gradient, Matrix& hessian) const override;

 private:
  QuadraticCost cost_;
};

enum class CovarianceMode {
  QuuInverse,  // Sigma_t = temperature * Q_uu^{-1}
  Fixed,       // Sigma_t = fixed_variance * I
};

struct LqrOptions {
  double temperature = 1.0;
  double covariance_floor = 1e-4;
  CovarianceMode covariance_mode = CovarianceMode::QuuInverse;
  double fixed_variance = 0.1;
  double initial_damping = 1e-6;
  double max_damping = 1e6;
  double damping_factor = 10.0;
};

namespace control {

// Backward Riccati recursion. The returned controller is in absolute form
// (zero anchors). Q_uu is Levenberg-damped only when not positive definite.
// Throws Error(NotPositiveDefinite) if damping up to max_damping fails.
LinearGaussianController lqr_backward(const TimeVaryingLinearDynamics& dyn,
                                      const QuadraticCost& cost,
                                      const LqrOptions& options = {});

// Gaussian marginals of [s_t; a_t] under the controller, propagated in closed
// form through the linear-Gaussian dynamics.
struct TrajectoryMarginals {
  std::vector<Vector> mean;
  std::vector<Matrix> covariance;
  Gaussian terminal;
};

TrajectoryMarginals propagate(const TimeVaryingLinearDynamics& dyn,
                              const LinearGaussianController& controller);

double expected_cost(const TimeVaryingLinearDynamics& dyn,
                     const LinearGaussianController& controller, const QuadraticCost& cost);

// sum_t E_{s_t ~ new}[ KL(new(.|s_t) || old(.|s_t)) ].
// Throws Error(NotPositiveDefinite) if an old covariance is singular.
double trajectory_kl(const TimeVaryingLinearDynamics& dyn,
                     const LinearGaussianController& next,
                     const LinearGaussianController& previous);

enum class KlStatus {
  Satisfied,         // KL landed in [lower, upper] * epsilon
  Inactive,          // constraint slack even at the smallest dual value
  BracketExhausted,  // closest feasible controller returned
};

struct KlStepOptions {
  double eta_min = 1e-12;
  double eta_max = 1e16;
  int max_bisections = 40;
  double lower_fraction = 0.5;
  double upper_fraction = 1.05;
  double covariance_floor = 1e-4;
  // Reuse the previous covariances instead of the augmented Q_uu^{-1}.
  bool keep_covariance = false;
};

struct KlStepResult {
  LinearGaussianController controller;
  double kl = 0.0;
  double eta = 0.0;
  KlStatus status = KlStatus::Satisfied;
  int evaluations = 0;
};

// Minimizes expected cost subject to trajectory_kl(new, previous) <= epsilon
// by bisecting (in log space) on the dual variable eta of the augmented cost
// cost / eta - log p_previous(a | s). The result is anchored like `previous`.
KlStepResult kl_bounded_improve(const TimeVaryingLinearDynamics& dyn,
                                const QuadraticCost& cost,
                                const LinearGaussianController& previous, double epsilon,
                                const KlStepOptions& options = {});

// Second-order expansion of a cost function about a state/action sequence,
// with each Hessian projected onto the PSD cone.
QuadraticCost expand_cost(const CostFunction& cost, const std::vector<Vector>& states,
                          const std::vector<Vector>& actions);

struct IlqrOptions {
  LqrOptions lqr;
  int max_halvings = 10;
};

struct IlqrResult {
  LinearGaussianController controller;
  bool line_search_failed = false;
  double step = 0.0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

// One iLQR iteration. `linearization` supplies F_t, f_t about the nominal.
// With a `plant` the line search scores candidates by the cost of their
// simulated mean trajectory. Without one it uses the closed-form expected
// cost under the linear model: the mean-trajectory cost plus the covariance
// term 1/2 tr(C_t Sigma_t) of the expansion.
IlqrResult ilqr_improve(const TimeVaryingLinearDynamics& linearization, const EnvSpec* plant,
                        const CostFunction& cost, const LinearGaussianController& current,
                        const Trajectory& nominal, const IlqrOptions& options = {});

}  // namespace control
}  // namespace lqrgaifo
