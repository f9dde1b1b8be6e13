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

// Time-varying linear-Gaussian dynamics fitted per timestep by Bayesian
// linear regression, with a normal-inverse-Wishart prior built from a
// Gaussian mixture over all pooled transitions.

#pragma once

#include <vector>

#include "lqrgaifo/environment.hpp"
#include "lqrgaifo/numerics.hpp"

namespace lqrgaifo {

// p(s_{t+1} | s_t, a_t) = N(F_t [s_t; a_t] + f_t, Sigma_t).
struct TimeVaryingLinearDynamics {
  std::vector<Matrix> transition;  // F_t, d x (d + m)
  std::vector<Vector> bias;        // f_t
  std::vector<Matrix> covariance;  // Sigma_t
  // Distribution of s_0, used when propagating state marginals.
  Gaussian initial_state;

  int horizon() const { return static_cast<int>(transition.size()); }
  int state_dim() const { return transition.empty() ? 0 : static_cast<int>(transition[0].rows()); }
  int action_dim() const {
    return transition.empty() ? 0 : static_cast<int>(transition[0].cols() - transition[0].rows());
  }
};

// Mixture over joint transition vectors [s; a; s'].
struct GmmPrior {
  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;
  // EM objective after each E-step: data log-likelihood plus the log of the
  // inverse-Wishart covariance prior that implements the regularization floor.
  std::vector<double> objective_trace;

  int num_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }
};

namespace dynamics {

struct GmmOptions {
  int max_iterations = 100;
  double tolerance = 1e-6;       // relative objective improvement
  double regularization = 1e-6;  // covariance floor scale
};

// EM with k-means++ seeding. Deterministic given rng.
// Throws Error(DegenerateComponent) if a component loses all responsibility.
GmmPrior fit_gmm(const std::vector<Vector>& points, int num_components, Rng& rng,
                 const GmmOptions& options = {});

// Plain mixture log-likelihood of the points.
double gmm_log_likelihood(const GmmPrior& gmm, const std::vector<Vector>& points);

// Responsibility-weighted moments of the mixture for a set of query points.
Gaussian gmm_moments(const GmmPrior& gmm, const std::vector<Vector>& points);

// Joint vectors [s_t; a_t; s_{t+1}] of every transition in the rollouts.
std::vector<Vector> pooled_transitions(const std::vector<Trajectory>& rollouts);

struct FitOptions {
  double regularization = 1e-6;
};

// Per-timestep conditioning of the posterior joint Gaussian over (s, a, s').
// A null prior (or nu == 0) gives ordinary least squares.
// Throws Error(InsufficientData) with fewer than two rollouts, or when
// nu == 0 and the sample count cannot determine the regression.
TimeVaryingLinearDynamics fit_dynamics(const std::vector<Trajectory>& rollouts,
                                       const GmmPrior* prior, double nu,
                                       const FitOptions& options = {});

Gaussian predict(const TimeVaryingLinearDynamics& dyn, int t, const Vector& s,
                 const Vector& a);

// The true dynamics linearized along a trajectory, with a small isotropic
// noise covariance. Used for expert training with a known model.
TimeVaryingLinearDynamics linearize_along(const EnvSpec& spec, const Trajectory& nominal,
                                          double noise_variance);

}  // namespace dynamics
}  // namespace lqrgaifo
