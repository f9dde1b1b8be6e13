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

#include "lqrgaifo/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

Vector Rng::standard_normal(Eigen::Index n) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal();
  return z;
}

Rng Rng::split() {
  // Two draws keep the child seed independent of the next parent output.
  const std::uint64_t hi = engine_();
  const std::uint64_t lo = engine_();
  return Rng(hi ^ (lo * 0x9E3779B97F4A7C15ULL));
}

namespace numerics {

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

bool all_finite(const Matrix& a) { return a.allFinite(); }

Matrix cholesky_solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw Error(ErrorKind::InvalidArgument, "cholesky_solve: dimension mismatch");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorKind::InvalidArgument, "cholesky_solve: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "cholesky_solve: matrix is not positive definite");
  }
  return llt.solve(b);
}

Matrix symmetrize_and_clamp(const Matrix& a, double floor) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::InvalidArgument, "symmetrize_and_clamp: matrix is not square");
  }
  const Matrix sym = symmetrize(a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector clamped = eig.eigenvalues().cwiseMax(floor);
  if (clamped == eig.eigenvalues()) return sym;
  return symmetrize(eig.eigenvectors() * clamped.asDiagonal() *
                    eig.eigenvectors().transpose());
}

double log_determinant(const Eigen::LLT<Matrix>& chol) {
  const Matrix& l = chol.matrixLLT();
  return 2.0 * l.diagonal().array().log().sum();
}

double gaussian_log_density(const Vector& x, const Vector& mean,
                            const Eigen::LLT<Matrix>& chol) {
  const Vector z = chol.matrixL().solve(x - mean);
  const double n = static_cast<double>(x.size());
  return -0.5 * (z.squaredNorm() + log_determinant(chol) +
                 n * std::log(2.0 * std::numbers::pi));
}

double gaussian_kl(const Gaussian& p, const Gaussian& q) {
  const Eigen::Index k = p.mean.size();
  if (q.mean.size() != k || p.covariance.rows() != k || q.covariance.rows() != k) {
    throw Error(ErrorKind::InvalidArgument, "gaussian_kl: dimension mismatch");
  }
  Eigen::LLT<Matrix> q_chol(q.covariance);
  if (q_chol.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "gaussian_kl: q covariance is singular");
  }
  Eigen::LLT<Matrix> p_chol(p.covariance);
  if (p_chol.info() != Eigen::Success) {
    return std::numeric_limits<double>::infinity();
  }
  const Vector diff = q.mean - p.mean;
  const double trace = q_chol.solve(p.covariance).trace();
  const double mahalanobis = diff.dot(q_chol.solve(diff));
  const double kl = 0.5 * (trace + mahalanobis - static_cast<double>(k) +
                           log_determinant(q_chol) - log_determinant(p_chol));
  return std::max(0.0, kl);
}

Matrix sampling_factor(const Matrix& covariance) {
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(covariance));
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Vector gaussian_sample(const Gaussian& g, Rng& rng) {
  const Vector z = rng.standard_normal(g.mean.size());
  return g.mean + sampling_factor(g.covariance) * z;
}

}  // namespace numerics
}  // namespace lqrgaifo
