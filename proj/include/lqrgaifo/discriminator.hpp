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

// Feed-forward critic D(s, s') over state transitions. All derivatives are
// analytic: parameter gradients for training (including the gradient-penalty
// term, which differentiates through the input gradient) and the input
// gradient/Hessian used to quadratize the imitation cost.

#pragma once

#include <vector>

#include "lqrgaifo/numerics.hpp"

namespace lqrgaifo {

enum class Activation { Tanh, Identity };

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;
  Activation activation = Activation::Tanh;
};

// Running per-feature standardization, applied inside the critic.
struct InputNormalizer {
  Vector mean;
  Vector m2;  // sum of squared deviations (Welford)
  double count = 0.0;
  double min_scale = 1e-3;

  static InputNormalizer identity(int dim);
  void observe(const Vector& x);
  // 1 / std, or 1 for features never observed.
  Vector inverse_scale() const;
};

struct DiscriminatorParams {
  std::vector<DenseLayer> layers;
  InputNormalizer normalizer;

  int input_dim() const { return layers.empty() ? 0 : static_cast<int>(layers[0].weight.cols()); }

  // tanh hidden layers with Glorot-uniform weights and a linear output unit.
  static DiscriminatorParams create(int input_dim, const std::vector<int>& hidden, Rng& rng);
  // Single affine layer w . x + b with an identity normalizer.
  static DiscriminatorParams affine(const Vector& w, double b);

  void validate() const;
};

struct LayerGradient {
  Matrix weight;
  Vector bias;
};
using ParamGradient = std::vector<LayerGradient>;

enum class TransitionSource { Imitator, Expert };

struct TransitionBatch {
  std::vector<Vector> pairs;  // each [s; s']
  TransitionSource source = TransitionSource::Imitator;
};

namespace critic {

Vector join(const Vector& s, const Vector& s_next);

double forward(const DiscriminatorParams& params, const Vector& x);
double forward(const DiscriminatorParams& params, const Vector& s, const Vector& s_next);

struct InputDerivatives {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

InputDerivatives input_gradient_hessian(const DiscriminatorParams& params, const Vector& x);
InputDerivatives input_gradient_hessian(const DiscriminatorParams& params, const Vector& s,
                                        const Vector& s_next);
Vector input_gradient(const DiscriminatorParams& params, const Vector& x);

// Gradient of D(x) with respect to every weight and bias.
ParamGradient parameter_gradient(const DiscriminatorParams& params, const Vector& x);

ParamGradient zero_gradient(const DiscriminatorParams& params);

struct LossResult {
  double loss = 0.0;
  double wasserstein = 0.0;  // mean_imitator D - mean_expert D
  double penalty = 0.0;      // mean (||grad_x D(x_hat)|| - 1)^2
  ParamGradient gradient;
};

// WGAN-GP critic loss. Interpolate j mixes expert pair j mod n_E with
// imitator pair j mod n_I using u_j ~ U(0, 1) drawn from rng.
// Throws Error(EmptyBatch) on an empty batch.
LossResult wgan_gp_loss(const DiscriminatorParams& params, const TransitionBatch& imitator,
                        const TransitionBatch& expert, double lambda, Rng& rng);

struct AdamState {
  ParamGradient first;
  ParamGradient second;
  int step = 0;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
};

struct TrainStep {
  DiscriminatorParams params;
  double loss = 0.0;
  double wasserstein = 0.0;
};

TrainStep train_step(const DiscriminatorParams& params, const TransitionBatch& imitator,
                     const TransitionBatch& expert, double lambda, double step_size,
                     AdamState& adam, Rng& rng);

}  // namespace critic
}  // namespace lqrgaifo
