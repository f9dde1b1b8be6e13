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

// Dense small-matrix helpers and Gaussian utilities shared by every module.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace lqrgaifo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Gaussian {
  Vector mean;
  Matrix covariance;
};

// Seedable generator owned by the caller. Copying an Rng copies its state, so
// two copies produce identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }
  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  Vector standard_normal(Eigen::Index n);

  // Independent child stream; advances this generator.
  Rng split();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

namespace numerics {

inline constexpr double kSymmetryTolerance = 1e-10;

// Solves A X = B for symmetric positive-definite A.
// Throws Error(NotPositiveDefinite) if the factorization meets a pivot <= 0.
Matrix cholesky_solve(const Matrix& a, const Matrix& b);

// (A + A^T) / 2 with every eigenvalue raised to at least `floor`.
Matrix symmetrize_and_clamp(const Matrix& a, double floor);

// KL(p || q) in nats. Returns +inf when p is singular and q is not.
double gaussian_kl(const Gaussian& p, const Gaussian& q);

// A factor L with L L^T = covariance for any PSD covariance (eigen-based, so
// singular covariances are fine).
Matrix sampling_factor(const Matrix& covariance);

Vector gaussian_sample(const Gaussian& g, Rng& rng);

// log N(x | mean, covariance) given the lower Cholesky factor of covariance.
double gaussian_log_density(const Vector& x, const Vector& mean,
                            const Eigen::LLT<Matrix>& chol);

double log_determinant(const Eigen::LLT<Matrix>& chol);

Matrix symmetrize(const Matrix& a);

bool all_finite(const Matrix& a);

}  // namespace numerics
}  // namespace lqrgaifo
