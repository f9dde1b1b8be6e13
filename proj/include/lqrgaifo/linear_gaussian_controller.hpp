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

#include "lqrgaifo/numerics.hpp"

namespace lqrgaifo {

// Time-varying linear-Gaussian policy
//   p(a_t | s_t) = N(K_t (s_t - s_hat_t) + k_t + a_hat_t, Sigma_t).
struct LinearGaussianController {
  std::vector<Matrix> gain;           // K_t, m x d
  std::vector<Vector> offset;         // k_t
  std::vector<Vector> state_anchor;   // s_hat_t
  std::vector<Vector> action_anchor;  // a_hat_t
  std::vector<Matrix> covariance;     // Sigma_t, m x m

  int horizon() const { return static_cast<int>(gain.size()); }
  int state_dim() const { return gain.empty() ? 0 : static_cast<int>(gain[0].cols()); }
  int action_dim() const { return gain.empty() ? 0 : static_cast<int>(gain[0].rows()); }

  Vector mean_action(int t, const Vector& s) const {
    return gain[t] * (s - state_anchor[t]) + offset[t] + action_anchor[t];
  }

  // The constant b_t of the equivalent absolute form a = K_t s + b_t.
  Vector affine_bias(int t) const {
    return offset[t] + action_anchor[t] - gain[t] * state_anchor[t];
  }

  // Same policy, re-expressed about new anchors.
  LinearGaussianController reanchored(const std::vector<Vector>& states,
                                      const std::vector<Vector>& actions) const;

  // Zero-gain controller with isotropic exploration noise.
  static LinearGaussianController zero(int state_dim, int action_dim, int horizon,
                                       double noise_variance);

  // Throws Error(InvalidArgument) on inconsistent dimensions or a covariance
  // that is not symmetric PSD.
  void validate() const;
};

}  // namespace lqrgaifo
