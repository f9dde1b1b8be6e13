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

// Composite imitation cost C(s, a) = D(s, F_t [s; a] + f_t) and its
// per-timestep second-order expansion for the LQR backward pass.

#pragma once

#include "lqrgaifo/controller.hpp"
#include "lqrgaifo/discriminator.hpp"
#include "lqrgaifo/dynamics_model.hpp"

namespace lqrgaifo {

// Any twice-differentiable scorer of a transition x = [s; s'].
class TransitionCritic {
 public:
  virtual ~TransitionCritic() = default;
  virtual double score(const Vector& x) const = 0;
  virtual critic::InputDerivatives derivatives(const Vector& x) const = 0;
};

class NetworkCritic final : public TransitionCritic {
 public:
  explicit NetworkCritic(const DiscriminatorParams& params) : params_(params) {}
  double score(const Vector& x) const override { return critic::forward(params_, x); }
  critic::InputDerivatives derivatives(const Vector& x) const override {
    return critic::input_gradient_hessian(params_, x);
  }

 private:
  const DiscriminatorParams& params_;
};

namespace costs {

double composite_cost(const TransitionCritic& critic, const TimeVaryingLinearDynamics& dyn,
                      int t, const Vector& s, const Vector& a);
double composite_cost(const DiscriminatorParams& params, const TimeVaryingLinearDynamics& dyn,
                      int t, const Vector& s, const Vector& a);

// Value, gradient and Hessian of the composite cost with respect to [s; a]
// by the chain rule through the affine mean map (no PSD projection).
critic::InputDerivatives composite_derivatives(const TransitionCritic& critic,
                                               const TimeVaryingLinearDynamics& dyn, int t,
                                               const Vector& s, const Vector& a);

struct QuadratizeOptions {
  // Multiplies the critic before expansion. The imitation loop uses -1 so the
  // controller climbs the critic score, which is high on expert transitions.
  double scale = 1.0;
  // Evaluate the critic at the observed nominal successor s_{t+1} instead of
  // the dynamics mean (ablation switch).
  bool direct = false;
};

// Expansion about (s_hat_t, a_hat_t) = nominal(t), Hessians projected onto
// the PSD cone. No terminal term: the last transition is already covered.
QuadraticCost quadratize(const TransitionCritic& critic, const TimeVaryingLinearDynamics& dyn,
                         const Trajectory& nominal, const QuadratizeOptions& options = {});
QuadraticCost quadratize(const DiscriminatorParams& params, const TimeVaryingLinearDynamics& dyn,
                         const Trajectory& nominal, const QuadratizeOptions& options = {});

}  // namespace costs
}  // namespace lqrgaifo
