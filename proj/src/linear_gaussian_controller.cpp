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

#include "lqrgaifo/linear_gaussian_controller.hpp"

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

LinearGaussianController LinearGaussianController::reanchored(
    const std::vector<Vector>& states, const std::vector<Vector>& actions) const {
  LinearGaussianController out = *this;
  for (int t = 0; t < horizon(); ++t) {
    const Vector bias = affine_bias(t);
    out.state_anchor[t] = states[t];
    out.action_anchor[t] = actions[t];
    out.offset[t] = bias + gain[t] * states[t] - actions[t];
  }
  return out;
}

LinearGaussianController LinearGaussianController::zero(int state_dim, int action_dim,
                                                        int horizon,
                                                        double noise_variance) {
  LinearGaussianController c;
  c.gain.assign(horizon, Matrix::Zero(action_dim, state_dim));
  c.offset.assign(horizon, Vector::Zero(action_dim));
  c.state_anchor.assign(horizon, Vector::Zero(state_dim));
  c.action_anchor.assign(horizon, Vector::Zero(action_dim));
  c.covariance.assign(horizon, noise_variance * Matrix::Identity(action_dim, action_dim));
  return c;
}

void LinearGaussianController::validate() const {
  const auto T = gain.size();
  if (T == 0 || offset.size() != T || state_anchor.size() != T ||
      action_anchor.size() != T || covariance.size() != T) {
    throw Error(ErrorKind::InvalidArgument, "controller: inconsistent horizon");
  }
  const int d = state_dim();
  const int m = action_dim();
  for (std::size_t t = 0; t < T; ++t) {
    if (gain[t].rows() != m || gain[t].cols() != d || offset[t].size() != m ||
        state_anchor[t].size() != d || action_anchor[t].size() != m ||
        covariance[t].rows() != m || covariance[t].cols() != m) {
      throw Error(ErrorKind::InvalidArgument, "controller: inconsistent dimensions");
    }
    const Matrix& s = covariance[t];
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, s.norm())) {
      throw Error(ErrorKind::InvalidArgument, "controller: covariance not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw Error(ErrorKind::InvalidArgument, "controller: covariance not PSD");
    }
  }
}

}  // namespace lqrgaifo
