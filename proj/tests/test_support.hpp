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

// Shared fixtures for the test suites: random instances and finite
// differences.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lqrgaifo/controller.hpp"
#include "lqrgaifo/dynamics_model.hpp"
#include "lqrgaifo/linear_gaussian_controller.hpp"
#include "lqrgaifo/numerics.hpp"

namespace lqrgaifo::testing {

inline Matrix random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

inline Vector random_vector(Rng& rng, int n, double scale = 1.0) {
  return random_matrix(rng, n, 1, scale);
}

// Well-conditioned SPD matrix: A A^T / n + shift I.
inline Matrix random_spd(Rng& rng, int n, double shift = 0.5) {
  const Matrix a = random_matrix(rng, n, n);
  return a * a.transpose() / n + shift * Matrix::Identity(n, n);
}

// Largest absolute difference scaled by max(1, |reference|).
inline double relative_error(const Matrix& value, const Matrix& reference) {
  return (value - reference).cwiseAbs().maxCoeff() /
         std::max(1.0, reference.cwiseAbs().maxCoeff());
}

inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
  const Vector f0 = f(x);
  Matrix j(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    j.col(i) = (f(xp) - f(xm)) / (2 * h);
  }
  return j;
}

// Stable random time-varying linear-Gaussian dynamics.
inline TimeVaryingLinearDynamics random_dynamics(Rng& rng, int d, int m, int horizon,
                                                 double noise = 0.01) {
  TimeVaryingLinearDynamics dyn;
  for (int t = 0; t < horizon; ++t) {
    Matrix f(d, d + m);
    f.leftCols(d) = Matrix::Identity(d, d) + random_matrix(rng, d, d, 0.1);
    f.rightCols(m) = random_matrix(rng, d, m, 0.3);
    dyn.transition.push_back(f);
    dyn.bias.push_back(random_vector(rng, d, 0.1));
    dyn.covariance.push_back(noise * Matrix::Identity(d, d));
  }
  dyn.initial_state = {random_vector(rng, d), 0.05 * Matrix::Identity(d, d)};
  return dyn;
}

inline LinearGaussianController random_controller(Rng& rng, int d, int m, int horizon,
                                                  double gain_scale = 0.2) {
  LinearGaussianController c;
  for (int t = 0; t < horizon; ++t) {
    c.gain.push_back(random_matrix(rng, m, d, gain_scale));
    c.offset.push_back(random_vector(rng, m, 0.3));
    c.state_anchor.push_back(random_vector(rng, d, 0.3));
    c.action_anchor.push_back(random_vector(rng, m, 0.3));
    c.covariance.push_back(random_spd(rng, m, 0.2) * 0.5);
  }
  return c;
}

// Convex random quadratic cost with a PD action block.
inline QuadraticCost random_cost(Rng& rng, int d, int m, int horizon, bool terminal = true) {
  QuadraticCost c;
  for (int t = 0; t < horizon; ++t) {
    c.hessian.push_back(random_spd(rng, d + m, 0.1));
    c.gradient.push_back(random_vector(rng, d + m, 0.5));
    c.constant.push_back(rng.normal());
  }
  if (terminal) {
    c.terminal_hessian = random_spd(rng, d, 0.1);
    c.terminal_gradient = random_vector(rng, d, 0.5);
    c.terminal_constant = rng.normal();
  }
  return c;
}

}  // namespace lqrgaifo::testing
