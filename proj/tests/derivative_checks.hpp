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

// Finite-difference audit of every analytic derivative in the cost pipeline:
// critic input gradient and Hessian, the parameter gradient of the critic
// loss (through the gradient penalty) and the composite-cost expansion.

#pragma once

#include <algorithm>
#include <vector>

#include "lqrgaifo/cost_quadratizer.hpp"
#include "lqrgaifo/discriminator.hpp"
#include "test_support.hpp"

namespace lqrgaifo::testing {

// ||value - reference||_F / max(||reference||_F, 1e-6).
inline double scaled_error(const Matrix& value, const Matrix& reference) {
  return (value - reference).norm() / std::max(reference.norm(), 1e-6);
}

// Random critic with nonzero biases and a non-trivial input normalizer.
inline DiscriminatorParams random_critic(Rng& rng, int input_dim, const std::vector<int>& hidden) {
  DiscriminatorParams p = DiscriminatorParams::create(input_dim, hidden, rng);
  for (auto& layer : p.layers) layer.bias = random_vector(rng, layer.bias.size(), 0.3);
  const Vector center = random_vector(rng, input_dim);
  for (int i = 0; i < 20; ++i) {
    p.normalizer.observe(center + random_vector(rng, input_dim, 0.5 + rng.uniform()));
  }
  return p;
}

inline Vector flatten_params(const DiscriminatorParams& p) {
  std::vector<double> out;
  for (const auto& layer : p.layers) {
    out.insert(out.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
    out.insert(out.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
  }
  return Eigen::Map<Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

inline DiscriminatorParams unflatten_params(DiscriminatorParams p, const Vector& v) {
  Eigen::Index at = 0;
  for (auto& layer : p.layers) {
    std::copy(v.data() + at, v.data() + at + layer.weight.size(), layer.weight.data());
    at += layer.weight.size();
    std::copy(v.data() + at, v.data() + at + layer.bias.size(), layer.bias.data());
    at += layer.bias.size();
  }
  return p;
}

inline Vector flatten_gradient(const ParamGradient& g) {
  std::vector<double> out;
  for (const auto& layer : g) {
    out.insert(out.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
    out.insert(out.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
  }
  return Eigen::Map<Vector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

struct DerivativeReport {
  double input_gradient = 0.0;
  double input_hessian = 0.0;
  double hessian_asymmetry = 0.0;
  double param_gradient = 0.0;
  double quad_gradient = 0.0;
  double quad_hessian = 0.0;
};

// Worst error of each derivative over `instances` random draws.
inline DerivativeReport derivative_suite(int instances, std::uint64_t seed) {
  Rng rng(seed);
  DerivativeReport rep;
  for (int i = 0; i < instances; ++i) {
    const int d = 2 + static_cast<int>(rng.index(4));
    const int m = 1 + static_cast<int>(rng.index(3));
    std::vector<int> hidden;
    const int depth = 1 + static_cast<int>(rng.index(2));
    for (int l = 0; l < depth; ++l) hidden.push_back(2 + static_cast<int>(rng.index(7)));
    const DiscriminatorParams params = random_critic(rng, 2 * d, hidden);

    const Vector x = params.normalizer.mean + random_vector(rng, 2 * d);
    const auto der = critic::input_gradient_hessian(params, x);
    const Vector fd_g = fd_gradient([&](const Vector& y) { return critic::forward(params, y); }, x);
    rep.input_gradient = std::max(rep.input_gradient, scaled_error(der.gradient, fd_g));
    const Matrix fd_h =
        fd_jacobian([&](const Vector& y) { return critic::input_gradient(params, y); }, x);
    rep.input_hessian = std::max(rep.input_hessian, scaled_error(der.hessian, fd_h));
    rep.hessian_asymmetry =
        std::max(rep.hessian_asymmetry, (der.hessian - der.hessian.transpose()).cwiseAbs().maxCoeff());

    TransitionBatch imitator{{}, TransitionSource::Imitator};
    TransitionBatch expert{{}, TransitionSource::Expert};
    const int n_i = 1 + static_cast<int>(rng.index(5)), n_e = 1 + static_cast<int>(rng.index(5));
    for (int j = 0; j < n_i; ++j) imitator.pairs.push_back(x + random_vector(rng, 2 * d));
    for (int j = 0; j < n_e; ++j) expert.pairs.push_back(x + random_vector(rng, 2 * d));
    const double lambda = 10.0 * rng.uniform();
    const Rng draw = rng.split();
    Rng r0 = draw;
    const auto loss = critic::wgan_gp_loss(params, imitator, expert, lambda, r0);
    const Vector theta = flatten_params(params);
    const Vector fd_theta = fd_gradient(
        [&](const Vector& v) {
          Rng r = draw;  // identical interpolation draws at every probe
          return critic::wgan_gp_loss(unflatten_params(params, v), imitator, expert, lambda, r)
              .loss;
        },
        theta);
    rep.param_gradient =
        std::max(rep.param_gradient, scaled_error(flatten_gradient(loss.gradient), fd_theta));

    const auto dyn = random_dynamics(rng, d, m, 1);
    const NetworkCritic net(params);
    const Vector s = params.normalizer.mean.head(d) + random_vector(rng, d);
    const Vector a = random_vector(rng, m);
    Vector sa(d + m);
    sa << s, a;
    const auto comp = costs::composite_derivatives(net, dyn, 0, s, a);
    const Vector fd_cg = fd_gradient(
        [&](const Vector& y) { return costs::composite_cost(net, dyn, 0, y.head(d), y.tail(m)); },
        sa);
    rep.quad_gradient = std::max(rep.quad_gradient, scaled_error(comp.gradient, fd_cg));
    const Matrix fd_ch = fd_jacobian(
        [&](const Vector& y) {
          return costs::composite_derivatives(net, dyn, 0, y.head(d), y.tail(m)).gradient;
        },
        sa);
    rep.quad_hessian = std::max(rep.quad_hessian, scaled_error(comp.hessian, fd_ch));
  }
  return rep;
}

}  // namespace lqrgaifo::testing
