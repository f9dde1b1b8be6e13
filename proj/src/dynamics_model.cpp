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

#include "lqrgaifo/dynamics_model.hpp"

#include <cmath>
#include <limits>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo::dynamics {
namespace {

struct Moments {
  Vector mean;
  Matrix scatter;  // sum of weighted outer products about the mean
  double total = 0.0;
};

Moments weighted_moments(const std::vector<Vector>& points, const Vector& weights) {
  const Eigen::Index dim = points.front().size();
  Moments mom;
  mom.total = weights.sum();
  mom.mean = Vector::Zero(dim);
  for (std::size_t n = 0; n < points.size(); ++n) mom.mean += weights[n] * points[n];
  mom.mean /= mom.total;
  mom.scatter = Matrix::Zero(dim, dim);
  for (std::size_t n = 0; n < points.size(); ++n) {
    const Vector diff = points[n] - mom.mean;
    mom.scatter.noalias() += weights[n] * diff * diff.transpose();
  }
  return mom;
}

// Log N(x | mu_k, Sigma_k) + log pi_k for every point and component.
Matrix log_joint(const GmmPrior& gmm, const std::vector<Vector>& points) {
  const int k_count = gmm.num_components();
  Matrix out(points.size(), k_count);
  for (int k = 0; k < k_count; ++k) {
    Eigen::LLT<Matrix> chol(gmm.covariances[k]);
    if (chol.info() != Eigen::Success) {
      throw Error(ErrorKind::DegenerateComponent, "gmm: component covariance not PD");
    }
    const double log_w = std::log(gmm.weights[k]);
    for (std::size_t n = 0; n < points.size(); ++n) {
      out(n, k) = log_w + numerics::gaussian_log_density(points[n], gmm.means[k], chol);
    }
  }
  return out;
}

Vector row_logsumexp(const Matrix& m) {
  Vector out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double mx = m.row(i).maxCoeff();
    out[i] = mx + std::log((m.row(i).array() - mx).exp().sum());
  }
  return out;
}

Matrix responsibilities(const GmmPrior& gmm, const std::vector<Vector>& points,
                        Vector* log_norm = nullptr) {
  Matrix lj = log_joint(gmm, points);
  const Vector lse = row_logsumexp(lj);
  for (Eigen::Index i = 0; i < lj.rows(); ++i) lj.row(i).array() -= lse[i];
  if (log_norm) *log_norm = lse;
  return lj.array().exp().matrix();
}

// k-means++ seeding on per-dimension standardized points, then one hard
// assignment. Returns the cluster label of each point.
std::vector<int> kmeanspp_labels(const std::vector<Vector>& points, int k_count, Rng& rng) {
  const std::size_t n = points.size();
  const Eigen::Index dim = points.front().size();
  Vector mean = Vector::Zero(dim);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(n);
  Vector var = Vector::Zero(dim);
  for (const auto& p : points) var += (p - mean).cwiseAbs2();
  const Vector inv_std =
      (var / static_cast<double>(n)).cwiseSqrt().cwiseMax(1e-12).cwiseInverse();
  std::vector<Vector> z;
  z.reserve(n);
  for (const auto& p : points) z.push_back((p - mean).cwiseProduct(inv_std));

  std::vector<Vector> centers;
  centers.push_back(z[rng.index(n)]);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k_count) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], (z[i] - centers.back()).squaredNorm());
      total += dist[i];
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.index(n);
    } else {
      double target = rng.uniform() * total;
      for (pick = 0; pick + 1 < n; ++pick) {
        target -= dist[pick];
        if (target <= 0.0) break;
      }
    }
    centers.push_back(z[pick]);
  }
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_count; ++k) {
      const double dd = (z[i] - centers[k]).squaredNorm();
      if (dd < best) {
        best = dd;
        labels[i] = k;
      }
    }
  }
  return labels;
}

// MAP M-step: Sigma_k = (S_k + psi I) / N_k.
void m_step(GmmPrior& gmm, const std::vector<Vector>& points, const Matrix& resp, double psi) {
  const double n_total = static_cast<double>(points.size());
  const Eigen::Index dim = points.front().size();
  for (int k = 0; k < gmm.num_components(); ++k) {
    const Vector w = resp.col(k);
    const double nk = w.sum();
    if (!(nk > 1e-10 * n_total)) {
      throw Error(ErrorKind::DegenerateComponent,
                  "gmm: component collapsed (too many components for the data)");
    }
    const Moments mom = weighted_moments(points, w);
    gmm.weights[k] = nk / n_total;
    gmm.means[k] = mom.mean;
    gmm.covariances[k] =
        numerics::symmetrize((mom.scatter + psi * Matrix::Identity(dim, dim)) / nk);
  }
}

double covariance_prior_log(const GmmPrior& gmm, double psi) {
  double out = 0.0;
  for (const auto& cov : gmm.covariances) {
    Eigen::LLT<Matrix> chol(cov);
    out -= 0.5 * psi * chol.solve(Matrix::Identity(cov.rows(), cov.cols())).trace();
  }
  return out;
}

}  // namespace

GmmPrior fit_gmm(const std::vector<Vector>& points, int num_components, Rng& rng,
                 const GmmOptions& options) {
  if (num_components < 1 || points.size() < static_cast<std::size_t>(num_components)) {
    throw Error(ErrorKind::InvalidArgument, "fit_gmm: need at least one point per component");
  }
  for (const auto& p : points) {
    if (!p.allFinite() || p.size() != points.front().size()) {
      throw Error(ErrorKind::InvalidArgument, "fit_gmm: points must be finite and equal length");
    }
  }
  const std::size_t n = points.size();
  const Eigen::Index dim = points.front().size();
  const double psi = options.regularization * static_cast<double>(n) / num_components;

  GmmPrior gmm;
  gmm.weights.assign(num_components, 1.0 / num_components);
  gmm.means.assign(num_components, Vector::Zero(dim));
  gmm.covariances.assign(num_components, Matrix::Identity(dim, dim));

  const std::vector<int> labels = kmeanspp_labels(points, num_components, rng);
  Matrix resp = Matrix::Zero(n, num_components);
  for (std::size_t i = 0; i < n; ++i) resp(i, labels[i]) = 1.0;
  m_step(gmm, points, resp, psi);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Vector log_norm;
    resp = responsibilities(gmm, points, &log_norm);
    const double objective = log_norm.sum() + covariance_prior_log(gmm, psi);
    gmm.objective_trace.push_back(objective);
    if (iter > 0) {
      const double prev = gmm.objective_trace[iter - 1];
      if (objective - prev < options.tolerance * std::abs(prev)) break;
    }
    if (iter + 1 == options.max_iterations) break;
    m_step(gmm, points, resp, psi);
  }
  return gmm;
}

double gmm_log_likelihood(const GmmPrior& gmm, const std::vector<Vector>& points) {
  return row_logsumexp(log_joint(gmm, points)).sum();
}

Gaussian gmm_moments(const GmmPrior& gmm, const std::vector<Vector>& points) {
  const Matrix resp = responsibilities(gmm, points);
  const Vector w = resp.colwise().mean().transpose();
  const Eigen::Index dim = gmm.dim();
  Gaussian g{Vector::Zero(dim), Matrix::Zero(dim, dim)};
  for (int k = 0; k < gmm.num_components(); ++k) g.mean += w[k] * gmm.means[k];
  for (int k = 0; k < gmm.num_components(); ++k) {
    const Vector diff = gmm.means[k] - g.mean;
    g.covariance += w[k] * (gmm.covariances[k] + diff * diff.transpose());
  }
  g.covariance = numerics::symmetrize(g.covariance);
  return g;
}

std::vector<Vector> pooled_transitions(const std::vector<Trajectory>& rollouts) {
  std::vector<Vector> out;
  for (const auto& traj : rollouts) {
    for (int t = 0; t < traj.horizon(); ++t) {
      Vector x(traj.states[t].size() * 2 + traj.actions[t].size());
      x << traj.states[t], traj.actions[t], traj.states[t + 1];
      out.push_back(std::move(x));
    }
  }
  return out;
}

TimeVaryingLinearDynamics fit_dynamics(const std::vector<Trajectory>& rollouts,
                                       const GmmPrior* prior, double nu,
                                       const FitOptions& options) {
  if (rollouts.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "fit_dynamics: need at least two rollouts");
  }
  const int horizon = rollouts.front().horizon();
  const int d = static_cast<int>(rollouts.front().states.front().size());
  if (rollouts.front().actions.size() != static_cast<std::size_t>(horizon)) {
    throw Error(ErrorKind::InvalidArgument, "fit_dynamics: rollouts need actions");
  }
  const int m = static_cast<int>(rollouts.front().actions.front().size());
  for (const auto& r : rollouts) {
    if (r.horizon() != horizon || r.actions.size() != static_cast<std::size_t>(horizon) ||
        r.states.front().size() != d || r.actions.front().size() != m) {
      throw Error(ErrorKind::InvalidArgument, "fit_dynamics: rollouts disagree in shape");
    }
  }
  const bool use_prior = prior != nullptr && nu > 0.0;
  const int n = static_cast<int>(rollouts.size());
  if (!use_prior && n <= d + m) {
    throw Error(ErrorKind::InsufficientData,
                "fit_dynamics: too few rollouts for an unregularized regression");
  }
  if (use_prior && prior->dim() != 2 * d + m) {
    throw Error(ErrorKind::InvalidArgument, "fit_dynamics: prior dimension mismatch");
  }

  const int xu = d + m;
  const int dim = 2 * d + m;
  const Matrix ridge = options.regularization * Matrix::Identity(dim, dim);
  const Vector uniform = Vector::Constant(n, 1.0 / n);

  TimeVaryingLinearDynamics dyn;
  {
    std::vector<Vector> s0;
    for (const auto& r : rollouts) s0.push_back(r.states.front());
    const Moments mom = weighted_moments(s0, uniform);
    dyn.initial_state = {mom.mean,
                         mom.scatter + options.regularization * Matrix::Identity(d, d)};
  }

  for (int t = 0; t < horizon; ++t) {
    std::vector<Vector> pts;
    pts.reserve(n);
    for (const auto& r : rollouts) {
      Vector x(dim);
      x << r.states[t], r.actions[t], r.states[t + 1];
      pts.push_back(std::move(x));
    }
    const Moments emp = weighted_moments(pts, uniform);  // scatter already / n
    Vector mu = emp.mean;
    Matrix sigma = emp.scatter;
    if (use_prior) {
      const Gaussian pri = gmm_moments(*prior, pts);
      const double nn = n;
      const Vector diff = emp.mean - pri.mean;
      sigma = (nn * emp.scatter + nu * pri.covariance +
               (nn * nu / (nn + nu)) * diff * diff.transpose()) /
              (nn + nu);
      mu = (nn * emp.mean + nu * pri.mean) / (nn + nu);
    }
    // Without a prior the fit is plain least squares; the ridge only keeps
    // the prior-blended joint covariance well conditioned.
    sigma = numerics::symmetrize(sigma);
    if (use_prior) sigma += ridge;

    const Matrix sxx = sigma.topLeftCorner(xu, xu);
    const Matrix sxy = sigma.topRightCorner(xu, d);
    Eigen::LLT<Matrix> chol(sxx);
    if (chol.info() != Eigen::Success) {
      throw Error(ErrorKind::InsufficientData, "fit_dynamics: singular regression");
    }
    const Matrix f_mat = chol.solve(sxy).transpose();
    dyn.transition.push_back(f_mat);
    dyn.bias.push_back(mu.tail(d) - f_mat * mu.head(xu));
    const Matrix cond = sigma.bottomRightCorner(d, d) - f_mat * sxy;
    dyn.covariance.push_back(numerics::symmetrize_and_clamp(cond, options.regularization));
  }
  return dyn;
}

Gaussian predict(const TimeVaryingLinearDynamics& dyn, int t, const Vector& s,
                 const Vector& a) {
  if (t < 0 || t >= dyn.horizon()) {
    throw Error(ErrorKind::InvalidArgument, "predict: timestep out of range");
  }
  Vector x(s.size() + a.size());
  x << s, a;
  return {dyn.transition[t] * x + dyn.bias[t], dyn.covariance[t]};
}

TimeVaryingLinearDynamics linearize_along(const EnvSpec& spec, const Trajectory& nominal,
                                          double noise_variance) {
  const int d = spec.state_dim();
  const int m = spec.action_dim();
  TimeVaryingLinearDynamics dyn;
  dyn.initial_state = {nominal.states.front(), noise_variance * Matrix::Identity(d, d)};
  for (int t = 0; t < nominal.horizon(); ++t) {
    const env::AffineModel lin = env::linearize(spec, nominal.states[t], nominal.actions[t]);
    Matrix f_mat(d, d + m);
    f_mat << lin.a, lin.b;
    dyn.transition.push_back(f_mat);
    dyn.bias.push_back(lin.c);
    dyn.covariance.push_back(noise_variance * Matrix::Identity(d, d));
  }
  return dyn;
}

}  // namespace lqrgaifo::dynamics
