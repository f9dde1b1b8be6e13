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

#include "lqrgaifo/discriminator.hpp"

#include <cmath>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

InputNormalizer InputNormalizer::identity(int dim) {
  InputNormalizer n;
  n.mean = Vector::Zero(dim);
  n.m2 = Vector::Zero(dim);
  return n;
}

void InputNormalizer::observe(const Vector& x) {
  count += 1.0;
  const Vector delta = x - mean;
  mean += delta / count;
  m2 += delta.cwiseProduct(x - mean);
}

Vector InputNormalizer::inverse_scale() const {
  if (count < 2.0) return Vector::Ones(mean.size());
  return (m2 / count).cwiseSqrt().cwiseMax(min_scale).cwiseInverse();
}

DiscriminatorParams DiscriminatorParams::create(int input_dim, const std::vector<int>& hidden,
                                                Rng& rng) {
  DiscriminatorParams p;
  int fan_in = input_dim;
  std::vector<int> widths = hidden;
  widths.push_back(1);
  for (std::size_t l = 0; l < widths.size(); ++l) {
    const int fan_out = widths[l];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    DenseLayer layer;
    layer.weight.resize(fan_out, fan_in);
    for (int i = 0; i < fan_out; ++i) {
      for (int j = 0; j < fan_in; ++j) layer.weight(i, j) = limit * (2.0 * rng.uniform() - 1.0);
    }
    layer.bias = Vector::Zero(fan_out);
    layer.activation = l + 1 == widths.size() ? Activation::Identity : Activation::Tanh;
    p.layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  p.normalizer = InputNormalizer::identity(input_dim);
  return p;
}

DiscriminatorParams DiscriminatorParams::affine(const Vector& w, double b) {
  DiscriminatorParams p;
  DenseLayer layer;
  layer.weight = w.transpose();
  layer.bias = Vector::Constant(1, b);
  layer.activation = Activation::Identity;
  p.layers.push_back(std::move(layer));
  p.normalizer = InputNormalizer::identity(static_cast<int>(w.size()));
  return p;
}

void DiscriminatorParams::validate() const {
  if (layers.empty()) throw Error(ErrorKind::InvalidArgument, "critic: no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.bias.size() != layer.weight.rows() ||
        (l > 0 && layer.weight.cols() != layers[l - 1].weight.rows())) {
      throw Error(ErrorKind::InvalidArgument, "critic: layer dimensions do not chain");
    }
  }
  if (layers.back().weight.rows() != 1 || layers.back().activation != Activation::Identity) {
    throw Error(ErrorKind::InvalidArgument, "critic: output must be one identity unit");
  }
  if (normalizer.mean.size() != input_dim()) {
    throw Error(ErrorKind::InvalidArgument, "critic: normalizer dimension mismatch");
  }
}

namespace critic {
namespace {

struct Pass {
  Vector inv_scale;
  std::vector<Vector> pre;   // a_l
  std::vector<Vector> post;  // h_l, post[0] = normalized input
};

Vector act(Activation f, const Vector& a) {
  return f == Activation::Tanh ? Vector(a.array().tanh()) : a;
}
Vector act_d1(Activation f, const Vector& a) {
  if (f == Activation::Identity) return Vector::Ones(a.size());
  return (1.0 - a.array().tanh().square()).matrix();
}
Vector act_d2(Activation f, const Vector& a) {
  if (f == Activation::Identity) return Vector::Zero(a.size());
  const auto th = a.array().tanh();
  return (-2.0 * th * (1.0 - th.square())).matrix();
}

Pass run(const DiscriminatorParams& p, const Vector& x) {
  if (x.size() != p.input_dim()) {
    throw Error(ErrorKind::InvalidArgument, "critic: input dimension mismatch");
  }
  Pass pass;
  pass.inv_scale = p.normalizer.inverse_scale();
  pass.post.push_back((x - p.normalizer.mean).cwiseProduct(pass.inv_scale));
  for (const auto& layer : p.layers) {
    pass.pre.push_back(layer.weight * pass.post.back() + layer.bias);
    pass.post.push_back(act(layer.activation, pass.pre.back()));
  }
  return pass;
}

// Adjoints of the output with respect to each layer output h_l (beta[l]),
// beta[0] being the gradient in normalized input space.
std::vector<Vector> output_adjoints(const DiscriminatorParams& p, const Pass& pass) {
  const std::size_t depth = p.layers.size();
  std::vector<Vector> beta(depth + 1);
  beta[depth] = Vector::Ones(1);
  for (std::size_t l = depth; l-- > 0;) {
    const Vector delta = beta[l + 1].cwiseProduct(act_d1(p.layers[l].activation, pass.pre[l]));
    beta[l] = p.layers[l].weight.transpose() * delta;
  }
  return beta;
}

void accumulate(ParamGradient& into, const ParamGradient& g, double scale) {
  for (std::size_t l = 0; l < into.size(); ++l) {
    into[l].weight += scale * g[l].weight;
    into[l].bias += scale * g[l].bias;
  }
}

// d/dtheta of the directional derivative grad_z D . u, by reverse-mode
// differentiation of the forward tangent pass.
ParamGradient directional_parameter_gradient(const DiscriminatorParams& p, const Pass& pass,
                                             const Vector& u) {
  const std::size_t depth = p.layers.size();
  std::vector<Vector> tangent_pre(depth), tangent_post(depth + 1);
  tangent_post[0] = u;
  for (std::size_t l = 0; l < depth; ++l) {
    tangent_pre[l] = p.layers[l].weight * tangent_post[l];
    tangent_post[l + 1] =
        act_d1(p.layers[l].activation, pass.pre[l]).cwiseProduct(tangent_pre[l]);
  }
  ParamGradient grad = zero_gradient(p);
  Vector adj_post = Vector::Zero(1);
  Vector adj_tangent = Vector::Ones(1);
  for (std::size_t l = depth; l-- > 0;) {
    const auto& layer = p.layers[l];
    const Vector d1 = act_d1(layer.activation, pass.pre[l]);
    const Vector d2 = act_d2(layer.activation, pass.pre[l]);
    const Vector adj_tangent_pre = d1.cwiseProduct(adj_tangent);
    const Vector adj_pre = d2.cwiseProduct(tangent_pre[l]).cwiseProduct(adj_tangent) +
                           d1.cwiseProduct(adj_post);
    grad[l].weight += adj_tangent_pre * tangent_post[l].transpose() +
                      adj_pre * pass.post[l].transpose();
    grad[l].bias += adj_pre;
    adj_tangent = layer.weight.transpose() * adj_tangent_pre;
    adj_post = layer.weight.transpose() * adj_pre;
  }
  return grad;
}

}  // namespace

Vector join(const Vector& s, const Vector& s_next) {
  Vector x(s.size() + s_next.size());
  x << s, s_next;
  return x;
}

double forward(const DiscriminatorParams& params, const Vector& x) {
  return run(params, x).post.back()[0];
}

double forward(const DiscriminatorParams& params, const Vector& s, const Vector& s_next) {
  return forward(params, join(s, s_next));
}

Vector input_gradient(const DiscriminatorParams& params, const Vector& x) {
  const Pass pass = run(params, x);
  return output_adjoints(params, pass)[0].cwiseProduct(pass.inv_scale);
}

InputDerivatives input_gradient_hessian(const DiscriminatorParams& params, const Vector& x) {
  const Pass pass = run(params, x);
  const std::vector<Vector> beta = output_adjoints(params, pass);
  InputDerivatives out;
  out.value = pass.post.back()[0];
  out.gradient = beta[0].cwiseProduct(pass.inv_scale);

  // Hessian in normalized space: sum_l A_l^T diag(beta_l * phi''(a_l)) A_l,
  // with A_l = d a_l / d z.
  const Eigen::Index n = x.size();
  Matrix hz = Matrix::Zero(n, n);
  Matrix jac;  // d a_l / d z
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    jac = l == 0 ? layer.weight
                 : Matrix(layer.weight *
                          act_d1(params.layers[l - 1].activation, pass.pre[l - 1]).asDiagonal() *
                          jac);
    const Vector curv = beta[l + 1].cwiseProduct(act_d2(layer.activation, pass.pre[l]));
    if (curv.cwiseAbs().maxCoeff() > 0.0) {
      hz.noalias() += jac.transpose() * curv.asDiagonal() * jac;
    }
  }
  out.hessian = numerics::symmetrize(pass.inv_scale.asDiagonal() * hz *
                                     pass.inv_scale.asDiagonal());
  return out;
}

InputDerivatives input_gradient_hessian(const DiscriminatorParams& params, const Vector& s,
                                        const Vector& s_next) {
  return input_gradient_hessian(params, join(s, s_next));
}

ParamGradient zero_gradient(const DiscriminatorParams& params) {
  ParamGradient g;
  for (const auto& layer : params.layers) {
    g.push_back({Matrix::Zero(layer.weight.rows(), layer.weight.cols()),
                 Vector::Zero(layer.bias.size())});
  }
  return g;
}

ParamGradient parameter_gradient(const DiscriminatorParams& params, const Vector& x) {
  const Pass pass = run(params, x);
  const std::vector<Vector> beta = output_adjoints(params, pass);
  ParamGradient g;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Vector delta =
        beta[l + 1].cwiseProduct(act_d1(params.layers[l].activation, pass.pre[l]));
    g.push_back({delta * pass.post[l].transpose(), delta});
  }
  return g;
}

LossResult wgan_gp_loss(const DiscriminatorParams& params, const TransitionBatch& imitator,
                        const TransitionBatch& expert, double lambda, Rng& rng) {
  if (imitator.pairs.empty() || expert.pairs.empty()) {
    throw Error(ErrorKind::EmptyBatch, "wgan_gp_loss: empty transition batch");
  }
  if (lambda < 0.0) throw Error(ErrorKind::InvalidArgument, "wgan_gp_loss: lambda < 0");
  LossResult out;
  out.gradient = zero_gradient(params);
  const double n_i = static_cast<double>(imitator.pairs.size());
  const double n_e = static_cast<double>(expert.pairs.size());
  for (const auto& x : imitator.pairs) {
    out.wasserstein += forward(params, x) / n_i;
    accumulate(out.gradient, parameter_gradient(params, x), 1.0 / n_i);
  }
  for (const auto& x : expert.pairs) {
    out.wasserstein -= forward(params, x) / n_e;
    accumulate(out.gradient, parameter_gradient(params, x), -1.0 / n_e);
  }

  const std::size_t n_pen = std::max(imitator.pairs.size(), expert.pairs.size());
  for (std::size_t j = 0; j < n_pen; ++j) {
    const double u = rng.uniform();
    const Vector& xe = expert.pairs[j % expert.pairs.size()];
    const Vector& xi = imitator.pairs[j % imitator.pairs.size()];
    const Vector x_hat = u * xe + (1.0 - u) * xi;
    if (lambda == 0.0) continue;
    const Pass pass = run(params, x_hat);
    const Vector g = output_adjoints(params, pass)[0].cwiseProduct(pass.inv_scale);
    const double norm = g.norm();
    out.penalty += (norm - 1.0) * (norm - 1.0) / static_cast<double>(n_pen);
    if (norm == 0.0) continue;  // subgradient 0 at the kink
    const Vector v = 2.0 * (norm - 1.0) / norm * g;
    accumulate(out.gradient,
               directional_parameter_gradient(params, pass, pass.inv_scale.cwiseProduct(v)),
               lambda / static_cast<double>(n_pen));
  }
  out.loss = out.wasserstein + lambda * out.penalty;
  return out;
}

TrainStep train_step(const DiscriminatorParams& params, const TransitionBatch& imitator,
                     const TransitionBatch& expert, double lambda, double step_size,
                     AdamState& adam, Rng& rng) {
  const LossResult loss = wgan_gp_loss(params, imitator, expert, lambda, rng);
  if (adam.first.empty()) {
    adam.first = zero_gradient(params);
    adam.second = zero_gradient(params);
  }
  ++adam.step;
  const double c1 = 1.0 - std::pow(adam.beta1, adam.step);
  const double c2 = 1.0 - std::pow(adam.beta2, adam.step);
  TrainStep out{params, loss.loss, loss.wasserstein};
  auto update = [&](auto& value, auto& m, auto& v, const auto& g) {
    m = adam.beta1 * m + (1.0 - adam.beta1) * g;
    v = adam.beta2 * v + (1.0 - adam.beta2) * g.cwiseAbs2();
    value.array() -= step_size * (m.array() / c1) / ((v.array() / c2).sqrt() + adam.epsilon);
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(out.params.layers[l].weight, adam.first[l].weight, adam.second[l].weight,
           loss.gradient[l].weight);
    update(out.params.layers[l].bias, adam.first[l].bias, adam.second[l].bias,
           loss.gradient[l].bias);
  }
  return out;
}

}  // namespace critic
}  // namespace lqrgaifo
