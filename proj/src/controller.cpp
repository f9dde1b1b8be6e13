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

#include "lqrgaifo/controller.hpp"

#include <cmath>
#include <limits>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

namespace {

Vector stack(const Vector& s, const Vector& a) {
  Vector x(s.size() + a.size());
  x << s, a;
  return x;
}

}  // namespace

double QuadraticCost::stage(int t, const Vector& s, const Vector& a) const {
  const Vector x = stack(s, a);
  return 0.5 * x.dot(hessian[t] * x) + x.dot(gradient[t]) + constant[t];
}

double QuadraticCost::terminal(const Vector& s) const {
  if (!has_terminal()) return 0.0;
  return 0.5 * s.dot(terminal_hessian * s) + s.dot(terminal_gradient) + terminal_constant;
}

QuadraticCost QuadraticCost::zeros(int state_dim, int action_dim, int horizon) {
  const int n = state_dim + action_dim;
  QuadraticCost cost;
  cost.hessian.assign(horizon, Matrix::Zero(n, n));
  cost.gradient.assign(horizon, Vector::Zero(n));
  cost.constant.assign(horizon, 0.0);
  return cost;
}

double QuadraticCostFunction::stage(int t, const Vector& s, const Vector& a) const {
  return cost_.stage(t, s, a);
}

void QuadraticCostFunction::stage_derivatives(int t, const Vector& s, const Vector& a,
                                              Vector& gradient, Matrix& hessian) const {
  hessian = cost_.hessian[t];
  gradient = hessian * stack(s, a) + cost_.gradient[t];
}

double QuadraticCostFunction::terminal(const Vector& s) const { return cost_.terminal(s); }

void QuadraticCostFunction::terminal_derivatives(const Vector& s, Vector& gradient,
                                                 Matrix& hessian) const {
  if (!cost_.has_terminal()) {
    CostFunction::terminal_derivatives(s, gradient, hessian);
    return;
  }
  hessian = cost_.terminal_hessian;
  gradient = hessian * s + cost_.terminal_gradient;
}

namespace control {

LinearGaussianController lqr_backward(const TimeVaryingLinearDynamics& dyn,
                                      const QuadraticCost& cost, const LqrOptions& options) {
  const int horizon = dyn.horizon();
  if (cost.horizon() != horizon) {
    throw Error(ErrorKind::InvalidArgument, "lqr_backward: horizon mismatch");
  }
  const int d = dyn.state_dim();
  const int m = dyn.action_dim();
  const Matrix eye_m = Matrix::Identity(m, m);

  LinearGaussianController ctrl = LinearGaussianController::zero(d, m, horizon, 0.0);
  Matrix value_hess = cost.has_terminal() ? cost.terminal_hessian : Matrix::Zero(d, d);
  Vector value_grad = cost.has_terminal() ? cost.terminal_gradient : Vector::Zero(d);

  for (int t = horizon - 1; t >= 0; --t) {
    const Matrix& f_mat = dyn.transition[t];
    const Matrix q = cost.hessian[t] + f_mat.transpose() * value_hess * f_mat;
    const Vector qv = cost.gradient[t] +
                      f_mat.transpose() * (value_hess * dyn.bias[t] + value_grad);
    const Matrix q_ss = q.topLeftCorner(d, d);
    const Matrix q_su = q.topRightCorner(d, m);
    const Matrix q_us = q.bottomLeftCorner(m, d);
    const Matrix q_uu = numerics::symmetrize(q.bottomRightCorner(m, m));

    double damping = 0.0;
    Eigen::LLT<Matrix> chol(q_uu);
    while (chol.info() != Eigen::Success) {
      damping = damping == 0.0 ? options.initial_damping : damping * options.damping_factor;
      if (damping > options.max_damping) {
        throw Error(ErrorKind::NotPositiveDefinite,
                    "lqr_backward: Q_uu not positive definite after regularization");
      }
      chol.compute(q_uu + damping * eye_m);
    }
    const Matrix gain = -chol.solve(q_us);
    const Vector bias = -chol.solve(qv.tail(m));

    ctrl.gain[t] = gain;
    ctrl.offset[t] = bias;
    Matrix sigma = options.covariance_mode == CovarianceMode::Fixed
                       ? Matrix(options.fixed_variance * eye_m)
                       : Matrix(options.temperature * chol.solve(eye_m));
    ctrl.covariance[t] = numerics::symmetrize_and_clamp(sigma, options.covariance_floor);

    value_hess = numerics::symmetrize(q_ss + q_su * gain + gain.transpose() * q_us +
                                      gain.transpose() * q_uu * gain);
    value_grad = qv.head(d) + q_su * bias + gain.transpose() * qv.tail(m) +
                 gain.transpose() * q_uu * bias;
  }
  return ctrl;
}

TrajectoryMarginals propagate(const TimeVaryingLinearDynamics& dyn,
                              const LinearGaussianController& controller) {
  const int horizon = dyn.horizon();
  if (controller.horizon() != horizon) {
    throw Error(ErrorKind::InvalidArgument, "propagate: horizon mismatch");
  }
  const int d = dyn.state_dim();
  const int m = dyn.action_dim();
  TrajectoryMarginals out;
  Vector mu = dyn.initial_state.mean;
  Matrix sigma = dyn.initial_state.covariance;
  for (int t = 0; t < horizon; ++t) {
    const Matrix& k = controller.gain[t];
    Vector joint_mean(d + m);
    joint_mean << mu, k * mu + controller.affine_bias(t);
    Matrix joint_cov(d + m, d + m);
    const Matrix cross = sigma * k.transpose();
    joint_cov.topLeftCorner(d, d) = sigma;
    joint_cov.topRightCorner(d, m) = cross;
    joint_cov.bottomLeftCorner(m, d) = cross.transpose();
    joint_cov.bottomRightCorner(m, m) = k * cross + controller.covariance[t];
    joint_cov = numerics::symmetrize(joint_cov);
    const Matrix& f_mat = dyn.transition[t];
    mu = f_mat * joint_mean + dyn.bias[t];
    sigma = numerics::symmetrize(f_mat * joint_cov * f_mat.transpose() + dyn.covariance[t]);
    out.mean.push_back(std::move(joint_mean));
    out.covariance.push_back(std::move(joint_cov));
  }
  out.terminal = {mu, sigma};
  return out;
}

double expected_cost(const TimeVaryingLinearDynamics& dyn,
                     const LinearGaussianController& controller, const QuadraticCost& cost) {
  const TrajectoryMarginals marg = propagate(dyn, controller);
  double total = 0.0;
  for (int t = 0; t < dyn.horizon(); ++t) {
    const Vector& mu = marg.mean[t];
    total += 0.5 * (cost.hessian[t] * marg.covariance[t]).trace() +
             0.5 * mu.dot(cost.hessian[t] * mu) + mu.dot(cost.gradient[t]) + cost.constant[t];
  }
  if (cost.has_terminal()) {
    const Vector& mu = marg.terminal.mean;
    total += 0.5 * (cost.terminal_hessian * marg.terminal.covariance).trace() +
             0.5 * mu.dot(cost.terminal_hessian * mu) + mu.dot(cost.terminal_gradient) +
             cost.terminal_constant;
  }
  return total;
}

double trajectory_kl(const TimeVaryingLinearDynamics& dyn,
                     const LinearGaussianController& next,
                     const LinearGaussianController& previous) {
  if (next.horizon() != previous.horizon() || next.horizon() != dyn.horizon() ||
      next.action_dim() != previous.action_dim()) {
    throw Error(ErrorKind::InvalidArgument, "trajectory_kl: controller shapes differ");
  }
  const int d = dyn.state_dim();
  const int m = next.action_dim();
  const TrajectoryMarginals marg = propagate(dyn, next);
  double total = 0.0;
  for (int t = 0; t < dyn.horizon(); ++t) {
    Eigen::LLT<Matrix> old_chol(previous.covariance[t]);
    if (old_chol.info() != Eigen::Success) {
      throw Error(ErrorKind::NotPositiveDefinite, "trajectory_kl: old covariance singular");
    }
    Eigen::LLT<Matrix> new_chol(next.covariance[t]);
    if (new_chol.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Matrix dk = next.gain[t] - previous.gain[t];
    const Vector db = next.affine_bias(t) - previous.affine_bias(t);
    const Vector mu_s = marg.mean[t].head(d);
    const Matrix sigma_s = marg.covariance[t].topLeftCorner(d, d);
    const Vector shift = dk * mu_s + db;
    const double step_kl =
        0.5 * (old_chol.solve(next.covariance[t]).trace() - m +
               numerics::log_determinant(old_chol) - numerics::log_determinant(new_chol) +
               shift.dot(old_chol.solve(shift)) +
               (dk.transpose() * old_chol.solve(dk) * sigma_s).trace());
    total += std::max(0.0, step_kl);
  }
  return total;
}

namespace {

// cost / eta - log p_previous(a | s), dropping terms constant in (s, a).
QuadraticCost kl_augmented_cost(const QuadraticCost& cost,
                                const LinearGaussianController& previous, double eta) {
  const int d = previous.state_dim();
  const int m = previous.action_dim();
  QuadraticCost aug = cost;
  for (int t = 0; t < cost.horizon(); ++t) {
    Eigen::LLT<Matrix> chol(previous.covariance[t]);
    if (chol.info() != Eigen::Success) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "kl_bounded_improve: previous covariance singular");
    }
    const Matrix precision = chol.solve(Matrix::Identity(m, m));
    const Matrix& k = previous.gain[t];
    const Vector b = previous.affine_bias(t);
    Matrix pkl(d + m, d + m);
    pkl.topLeftCorner(d, d) = k.transpose() * precision * k;
    pkl.topRightCorner(d, m) = -k.transpose() * precision;
    pkl.bottomLeftCorner(m, d) = -precision * k;
    pkl.bottomRightCorner(m, m) = precision;
    Vector pkl_grad(d + m);
    pkl_grad << k.transpose() * precision * b, -precision * b;
    aug.hessian[t] = numerics::symmetrize(cost.hessian[t] / eta + pkl);
    aug.gradient[t] = cost.gradient[t] / eta + pkl_grad;
    aug.constant[t] = cost.constant[t] / eta + 0.5 * b.dot(precision * b);
  }
  if (cost.has_terminal()) {
    aug.terminal_hessian = cost.terminal_hessian / eta;
    aug.terminal_gradient = cost.terminal_gradient / eta;
    aug.terminal_constant = cost.terminal_constant / eta;
  }
  return aug;
}

}  // namespace

KlStepResult kl_bounded_improve(const TimeVaryingLinearDynamics& dyn,
                                const QuadraticCost& cost,
                                const LinearGaussianController& previous, double epsilon,
                                const KlStepOptions& options) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "kl_bounded_improve: epsilon must be positive");
  }
  LqrOptions lqr;
  lqr.covariance_floor = options.covariance_floor;
  KlStepResult result;

  auto solve = [&](double eta) {
    ++result.evaluations;
    LinearGaussianController ctrl =
        lqr_backward(dyn, kl_augmented_cost(cost, previous, eta), lqr)
            .reanchored(previous.state_anchor, previous.action_anchor);
    if (options.keep_covariance) ctrl.covariance = previous.covariance;
    const double kl = trajectory_kl(dyn, ctrl, previous);
    return std::pair{std::move(ctrl), kl};
  };
  const double upper = options.upper_fraction * epsilon;
  const double lower = options.lower_fraction * epsilon;

  auto [loose, loose_kl] = solve(options.eta_min);
  if (loose_kl <= upper) {
    result.controller = std::move(loose);
    result.kl = loose_kl;
    result.eta = options.eta_min;
    result.status = loose_kl >= lower ? KlStatus::Satisfied : KlStatus::Inactive;
    return result;
  }
  auto [tight, tight_kl] = solve(options.eta_max);
  double hi = options.eta_max;
  if (tight_kl > upper) {
    result.controller = std::move(tight);
    result.kl = tight_kl;
    result.eta = hi;
    result.status = KlStatus::BracketExhausted;
    return result;
  }
  double lo = options.eta_min;
  LinearGaussianController best = std::move(tight);
  double best_kl = tight_kl;
  for (int i = 0; i < options.max_bisections; ++i) {
    const double mid = std::sqrt(lo * hi);
    auto [ctrl, kl] = solve(mid);
    if (kl > upper) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(ctrl);
      best_kl = kl;
      if (kl >= lower) {
        result.controller = std::move(best);
        result.kl = best_kl;
        result.eta = mid;
        result.status = KlStatus::Satisfied;
        return result;
      }
    }
  }
  result.controller = std::move(best);
  result.kl = best_kl;
  result.eta = hi;
  result.status = KlStatus::BracketExhausted;
  return result;
}

QuadraticCost expand_cost(const CostFunction& cost, const std::vector<Vector>& states,
                          const std::vector<Vector>& actions) {
  const int horizon = static_cast<int>(actions.size());
  QuadraticCost out;
  Vector grad;
  Matrix hess;
  for (int t = 0; t < horizon; ++t) {
    const Vector x = stack(states[t], actions[t]);
    cost.stage_derivatives(t, states[t], actions[t], grad, hess);
    const Matrix h = numerics::symmetrize_and_clamp(hess, 0.0);
    out.hessian.push_back(h);
    out.gradient.push_back(grad - h * x);
    out.constant.push_back(cost.stage(t, states[t], actions[t]) - grad.dot(x) +
                           0.5 * x.dot(h * x));
  }
  if (static_cast<int>(states.size()) > horizon) {
    const Vector& s = states[horizon];
    cost.terminal_derivatives(s, grad, hess);
    const Matrix h = numerics::symmetrize_and_clamp(hess, 0.0);
    out.terminal_hessian = h;
    out.terminal_gradient = grad - h * s;
    out.terminal_constant = cost.terminal(s) - grad.dot(s) + 0.5 * s.dot(h * s);
  }
  return out;
}

namespace {

double line_search_objective(const TimeVaryingLinearDynamics& lin, const EnvSpec* plant,
                             const CostFunction& cost, const QuadraticCost& expansion,
                             const LinearGaussianController& ctrl) {
  const int horizon = lin.horizon();
  std::vector<Vector> states, actions;
  if (plant != nullptr) {
    Rng unused(0);
    Trajectory traj = env::rollout(*plant, ctrl, false, unused);
    states = std::move(traj.states);
    actions = std::move(traj.actions);
  } else {
    states.push_back(lin.initial_state.mean);
    for (int t = 0; t < horizon; ++t) {
      actions.push_back(ctrl.mean_action(t, states.back()));
      states.push_back(lin.transition[t] * stack(states.back(), actions.back()) + lin.bias[t]);
    }
  }
  double total = cost.terminal(states.back());
  for (int t = 0; t < horizon; ++t) total += cost.stage(t, states[t], actions[t]);
  // A fitted model is only trusted near the nominal, so plant-scored searches
  // omit the model-propagated covariance term.
  if (plant != nullptr) return total;
  const TrajectoryMarginals marg = propagate(lin, ctrl);
  for (int t = 0; t < horizon; ++t) {
    total += 0.5 * (expansion.hessian[t] * marg.covariance[t]).trace();
  }
  if (expansion.has_terminal()) {
    total += 0.5 * (expansion.terminal_hessian * marg.terminal.covariance).trace();
  }
  return total;
}

}  // namespace

IlqrResult ilqr_improve(const TimeVaryingLinearDynamics& linearization, const EnvSpec* plant,
                        const CostFunction& cost, const LinearGaussianController& current,
                        const Trajectory& nominal, const IlqrOptions& options) {
  const int horizon = linearization.horizon();
  if (current.horizon() != horizon || nominal.horizon() != horizon ||
      nominal.actions.size() != static_cast<std::size_t>(horizon)) {
    throw Error(ErrorKind::InvalidArgument, "ilqr_improve: horizon mismatch");
  }
  const QuadraticCost expansion = expand_cost(cost, nominal.states, nominal.actions);
  const LinearGaussianController candidate =
      lqr_backward(linearization, expansion, options.lqr)
          .reanchored(nominal.states, nominal.actions);

  IlqrResult result;
  result.cost_before = line_search_objective(linearization, plant, cost, expansion, current);
  double alpha = 1.0;
  for (int h = 0; h <= options.max_halvings; ++h, alpha *= 0.5) {
    LinearGaussianController trial = candidate;
    for (auto& k : trial.offset) k *= alpha;
    double value = std::numeric_limits<double>::infinity();
    try {
      value = line_search_objective(linearization, plant, cost, expansion, trial);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFiniteState) throw;
    }
    if (value < result.cost_before) {
      result.controller = std::move(trial);
      result.step = alpha;
      result.cost_after = value;
      return result;
    }
  }
  result.controller = current;
  result.line_search_failed = true;
  result.cost_after = result.cost_before;
  return result;
}

}  // namespace control
}  // namespace lqrgaifo
