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

#include "lqrgaifo/cost_quadratizer.hpp"

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo::costs {
namespace {

// d[s; mu] / d[s; a] for the affine mean map mu = F [s; a] + f.
Matrix composition_jacobian(const Matrix& transition) {
  const Eigen::Index d = transition.rows();
  const Eigen::Index n = transition.cols();
  Matrix jac = Matrix::Zero(2 * d, n);
  jac.topLeftCorner(d, d).setIdentity();
  jac.bottomRows(d) = transition;
  return jac;
}

critic::InputDerivatives chain(const TransitionCritic& critic, const Matrix& transition,
                               const Vector& s, const Vector& s_next) {
  const critic::InputDerivatives inner = critic.derivatives(critic::join(s, s_next));
  const Matrix jac = composition_jacobian(transition);
  critic::InputDerivatives out;
  out.value = inner.value;
  out.gradient = jac.transpose() * inner.gradient;
  out.hessian = numerics::symmetrize(jac.transpose() * inner.hessian * jac);
  return out;
}

}  // namespace

double composite_cost(const TransitionCritic& critic, const TimeVaryingLinearDynamics& dyn,
                      int t, const Vector& s, const Vector& a) {
  return critic.score(critic::join(s, dynamics::predict(dyn, t, s, a).mean));
}

double composite_cost(const DiscriminatorParams& params, const TimeVaryingLinearDynamics& dyn,
                      int t, const Vector& s, const Vector& a) {
  return composite_cost(NetworkCritic(params), dyn, t, s, a);
}

critic::InputDerivatives composite_derivatives(const TransitionCritic& critic,
                                               const TimeVaryingLinearDynamics& dyn, int t,
                                               const Vector& s, const Vector& a) {
  return chain(critic, dyn.transition[t], s, dynamics::predict(dyn, t, s, a).mean);
}

QuadraticCost quadratize(const TransitionCritic& critic, const TimeVaryingLinearDynamics& dyn,
                         const Trajectory& nominal, const QuadratizeOptions& options) {
  const int horizon = dyn.horizon();
  if (nominal.horizon() != horizon || nominal.actions.size() != static_cast<std::size_t>(horizon)) {
    throw Error(ErrorKind::InvalidArgument, "quadratize: nominal horizon mismatch");
  }
  QuadraticCost out;
  for (int t = 0; t < horizon; ++t) {
    const Vector& s = nominal.states[t];
    const Vector& a = nominal.actions[t];
    const Vector s_next =
        options.direct ? nominal.states[t + 1] : dynamics::predict(dyn, t, s, a).mean;
    const critic::InputDerivatives der = chain(critic, dyn.transition[t], s, s_next);
    Vector x(s.size() + a.size());
    x << s, a;
    const Vector g = options.scale * der.gradient;
    const Matrix h = numerics::symmetrize_and_clamp(options.scale * der.hessian, 0.0);
    out.hessian.push_back(h);
    out.gradient.push_back(g - h * x);
    out.constant.push_back(options.scale * der.value - g.dot(x) + 0.5 * x.dot(h * x));
  }
  return out;
}

QuadraticCost quadratize(const DiscriminatorParams& params, const TimeVaryingLinearDynamics& dyn,
                         const Trajectory& nominal, const QuadratizeOptions& options) {
  return quadratize(NetworkCritic(params), dyn, nominal, options);
}

}  // namespace lqrgaifo::costs
