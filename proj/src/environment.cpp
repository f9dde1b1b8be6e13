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

#include "lqrgaifo/environment.hpp"

#include <cmath>
#include <string>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

EnvSpec EnvSpec::point_mass() {
  EnvSpec spec;
  spec.kind = EnvKind::PointMass;
  spec.link_masses = {1.0};
  spec.link_lengths = {};
  spec.initial_angles = {0.0, 0.0};
  return spec;
}

void EnvSpec::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "env spec: " + what);
  };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (horizon < 2) fail("horizon must be at least 2");
  if (num_links < 1) fail("num_links must be at least 1");
  if (!(torque_limit > 0.0)) fail("torque_limit must be positive");
  if (damping < 0.0) fail("damping must be non-negative");
  if (!goal.allFinite()) fail("goal must be finite");
  const auto joints = static_cast<std::size_t>(joint_count());
  if (initial_angles.size() != joints) fail("initial_angles must have one entry per joint");
  if (kind == EnvKind::PlanarArm) {
    if (link_lengths.size() != joints) fail("link_lengths must have num_links entries");
    if (link_masses.size() != joints) fail("link_masses must have num_links entries");
    for (double l : link_lengths) if (!(l > 0.0)) fail("link lengths must be positive");
    for (double m : link_masses) if (!(m > 0.0)) fail("link masses must be positive");
  } else {
    if (link_masses.empty() || !(link_masses[0] > 0.0)) fail("point mass needs a positive mass");
  }
}

Vector State::flatten() const {
  const Eigen::Index n = joint_angles.size();
  Vector s(2 * n + 4);
  s << joint_angles, joint_velocities, goal_delta, ee_velocity;
  return s;
}

State State::unflatten(const EnvSpec& spec, const Vector& flat) {
  const int n = spec.joint_count();
  if (flat.size() != spec.state_dim()) {
    throw Error(ErrorKind::InvalidArgument, "state: dimension mismatch");
  }
  State st;
  st.joint_angles = flat.segment(0, n);
  st.joint_velocities = flat.segment(n, n);
  st.goal_delta = flat.segment(2 * n, 2);
  st.ee_velocity = flat.segment(2 * n + 2, 2);
  return st;
}

namespace env {
namespace {

// Kinematic quantities of the arm at one configuration.
struct ArmKinematics {
  std::vector<Eigen::Vector2d> tip;       // tip positions p_i
  std::vector<Matrix> jacobian;           // 2 x n, dp_i/dtheta
  std::vector<Eigen::Vector2d> bias_acc;  // Jdot_i * thetadot
};

ArmKinematics arm_kinematics(const EnvSpec& spec, const Vector& q, const Vector& qd) {
  const int n = spec.num_links;
  std::vector<Eigen::Vector2d> u(n), normal(n);
  std::vector<double> phid(n);
  double phi = 0.0, phi_rate = 0.0;
  for (int k = 0; k < n; ++k) {
    phi += q[k];
    phi_rate += qd[k];
    u[k] = {std::cos(phi), std::sin(phi)};
    normal[k] = {-std::sin(phi), std::cos(phi)};
    phid[k] = phi_rate;
  }
  ArmKinematics kin;
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    const double len = spec.link_lengths[i];
    p += len * u[i];
    acc -= len * phid[i] * phid[i] * u[i];
    Matrix jac = Matrix::Zero(2, n);
    for (int j = 0; j <= i; ++j) {
      for (int k = j; k <= i; ++k) jac.col(j) += spec.link_lengths[k] * normal[k];
    }
    kin.tip.push_back(p);
    kin.jacobian.push_back(std::move(jac));
    kin.bias_acc.push_back(acc);
  }
  return kin;
}

Matrix arm_mass_matrix(const EnvSpec& spec, const ArmKinematics& kin) {
  const int n = spec.num_links;
  Matrix mass = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    mass += spec.link_masses[i] * kin.jacobian[i].transpose() * kin.jacobian[i];
  }
  return mass;
}

}  // namespace

Eigen::Vector2d forward_kinematics(const EnvSpec& spec, const Vector& joint_angles) {
  if (spec.kind == EnvKind::PointMass) return joint_angles.head<2>();
  if (joint_angles.size() != spec.num_links) {
    throw Error(ErrorKind::InvalidArgument, "forward_kinematics: wrong joint count");
  }
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  double phi = 0.0;
  for (int i = 0; i < spec.num_links; ++i) {
    phi += joint_angles[i];
    p += spec.link_lengths[i] * Eigen::Vector2d(std::cos(phi), std::sin(phi));
  }
  return p;
}

Vector make_state(const EnvSpec& spec, const Vector& q, const Vector& qd) {
  State st;
  st.joint_angles = q;
  st.joint_velocities = qd;
  if (spec.kind == EnvKind::PointMass) {
    st.goal_delta = spec.goal - q.head<2>();
    st.ee_velocity = qd.head<2>();
  } else {
    const ArmKinematics kin = arm_kinematics(spec, q, qd);
    st.goal_delta = spec.goal - kin.tip.back();
    st.ee_velocity = kin.jacobian.back() * qd;
  }
  return st.flatten();
}

Vector initial_state(const EnvSpec& spec) {
  const int n = spec.joint_count();
  const Vector q = Eigen::Map<const Vector>(spec.initial_angles.data(), n);
  return make_state(spec, q, Vector::Zero(n));
}

Vector clamp_action(const EnvSpec& spec, const Vector& a) {
  return a.cwiseMax(-spec.torque_limit).cwiseMin(spec.torque_limit);
}

Vector step(const EnvSpec& spec, const Vector& s, const Vector& a) {
  const int n = spec.joint_count();
  if (s.size() != spec.state_dim() || a.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "step: dimension mismatch");
  }
  const Vector tau = clamp_action(spec, a);
  const Vector q = s.segment(0, n);
  const Vector qd = s.segment(n, n);
  Vector qdd;
  if (spec.kind == EnvKind::PointMass) {
    qdd = (tau - spec.damping * qd) / spec.link_masses[0];
  } else {
    const ArmKinematics kin = arm_kinematics(spec, q, qd);
    Vector rhs = tau - spec.damping * qd;
    for (int i = 0; i < n; ++i) {
      const double m = spec.link_masses[i];
      rhs -= m * kin.jacobian[i].transpose() * kin.bias_acc[i];
      if (spec.gravity != 0.0) {
        rhs -= m * spec.gravity * kin.jacobian[i].row(1).transpose();
      }
    }
    qdd = arm_mass_matrix(spec, kin).llt().solve(rhs);
  }
  const Vector qd_next = qd + spec.dt * qdd;
  const Vector q_next = q + spec.dt * qd_next;
  Vector next = make_state(spec, q_next, qd_next);
  if (!next.allFinite()) {
    throw Error(ErrorKind::NonFiniteState, "step: non-finite state (dt too large?)");
  }
  return next;
}

Trajectory rollout(const EnvSpec& spec, const LinearGaussianController& controller,
                   bool noise_on, Rng& rng) {
  if (controller.horizon() != spec.horizon || controller.state_dim() != spec.state_dim() ||
      controller.action_dim() != spec.action_dim()) {
    throw Error(ErrorKind::InvalidArgument, "rollout: controller does not match env");
  }
  Trajectory traj;
  traj.env = spec;
  traj.states.reserve(spec.horizon + 1);
  traj.actions.reserve(spec.horizon);
  traj.states.push_back(initial_state(spec));
  for (int t = 0; t < spec.horizon; ++t) {
    Vector a = controller.mean_action(t, traj.states.back());
    if (noise_on) {
      a += numerics::sampling_factor(controller.covariance[t]) *
           rng.standard_normal(a.size());
    }
    a = clamp_action(spec, a);
    traj.states.push_back(step(spec, traj.states.back(), a));
    traj.actions.push_back(std::move(a));
  }
  return traj;
}

double kinetic_energy(const EnvSpec& spec, const Vector& s) {
  const int n = spec.joint_count();
  const Vector q = s.segment(0, n);
  const Vector qd = s.segment(n, n);
  if (spec.kind == EnvKind::PointMass) return 0.5 * spec.link_masses[0] * qd.squaredNorm();
  const ArmKinematics kin = arm_kinematics(spec, q, qd);
  return 0.5 * qd.dot(arm_mass_matrix(spec, kin) * qd);
}

AffineModel point_mass_model(const EnvSpec& spec) {
  const double mass = spec.link_masses[0];
  const double keep = 1.0 - spec.dt * spec.damping / mass;
  const double dt = spec.dt;
  const Matrix eye = Matrix::Identity(2, 2);
  AffineModel model;
  model.a = Matrix::Zero(8, 8);
  model.b = Matrix::Zero(8, 2);
  model.c = Vector::Zero(8);
  // position
  model.a.block(0, 0, 2, 2) = eye;
  model.a.block(0, 2, 2, 2) = dt * keep * eye;
  model.b.block(0, 0, 2, 2) = dt * dt / mass * eye;
  // velocity
  model.a.block(2, 2, 2, 2) = keep * eye;
  model.b.block(2, 0, 2, 2) = dt / mass * eye;
  // goal delta = goal - position
  model.a.block(4, 0, 2, 2) = -eye;
  model.a.block(4, 2, 2, 2) = -dt * keep * eye;
  model.b.block(4, 0, 2, 2) = -dt * dt / mass * eye;
  model.c.segment(4, 2) = spec.goal;
  // ee velocity = velocity
  model.a.block(6, 2, 2, 2) = keep * eye;
  model.b.block(6, 0, 2, 2) = dt / mass * eye;
  return model;
}

AffineModel linearize(const EnvSpec& spec, const Vector& s, const Vector& a) {
  if (spec.kind == EnvKind::PointMass) return point_mass_model(spec);
  const Eigen::Index d = s.size();
  const Eigen::Index m = a.size();
  const double h = 1e-6;
  AffineModel model;
  model.a.resize(d, d);
  model.b.resize(d, m);
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector plus = s, minus = s;
    plus[i] += h;
    minus[i] -= h;
    model.a.col(i) = (step(spec, plus, a) - step(spec, minus, a)) / (2.0 * h);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    Vector plus = a, minus = a;
    plus[i] += h;
    minus[i] -= h;
    model.b.col(i) = (step(spec, s, plus) - step(spec, s, minus)) / (2.0 * h);
  }
  model.c = step(spec, s, a) - model.a * s - model.b * a;
  return model;
}

}  // namespace env
}  // namespace lqrgaifo
