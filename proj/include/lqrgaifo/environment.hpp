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

// Desk-scale reaching environments: a gravity-free planar N-link arm with
// point masses at the link tips, and a linear 2-D point mass.
//
// Flat state layout (d = 2 * joints + 4):
//   [ joint angles | joint velocities | goal - ee position | ee velocity ]
// For the point mass the "joints" are the two Cartesian coordinates.

#pragma once

#include <cstdint>
#include <vector>

#include "lqrgaifo/linear_gaussian_controller.hpp"
#include "lqrgaifo/numerics.hpp"

namespace lqrgaifo {

enum class EnvKind { PlanarArm, PointMass };

struct EnvSpec {
  EnvKind kind = EnvKind::PlanarArm;
  int num_links = 2;
  double dt = 0.1;
  int horizon = 50;
  Eigen::Vector2d goal{1.2, 0.6};
  double torque_limit = 10.0;
  std::vector<double> link_lengths{1.0, 1.0};
  // Tip masses for the arm; the point mass uses the first entry.
  std::vector<double> link_masses{1.0, 1.0};
  double damping = 0.5;
  double gravity = 0.0;
  // Initial joint angles (arm) or initial position (point mass).
  std::vector<double> initial_angles{0.0, 2.0};

  static EnvSpec point_mass();

  int joint_count() const { return kind == EnvKind::PlanarArm ? num_links : 2; }
  int state_dim() const { return 2 * joint_count() + 4; }
  int action_dim() const { return joint_count(); }

  void validate() const;
};

struct State {
  Vector joint_angles;
  Vector joint_velocities;
  Eigen::Vector2d goal_delta;
  Eigen::Vector2d ee_velocity;

  Vector flatten() const;
  static State unflatten(const EnvSpec& spec, const Vector& flat);
};

struct Trajectory {
  std::vector<Vector> states;   // horizon + 1
  std::vector<Vector> actions;  // horizon (empty for state-only demos)
  EnvSpec env;
  std::uint64_t seed = 0;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
  bool state_only() const { return actions.empty(); }
};

namespace env {

Eigen::Vector2d forward_kinematics(const EnvSpec& spec, const Vector& joint_angles);

// Assembles a full state from joint positions and velocities.
Vector make_state(const EnvSpec& spec, const Vector& joint_angles,
                  const Vector& joint_velocities);

Vector initial_state(const EnvSpec& spec);

Vector clamp_action(const EnvSpec& spec, const Vector& a);

// One semi-implicit Euler step. Torques are clamped to +-torque_limit.
// Throws Error(NonFiniteState) if the integration blows up.
Vector step(const EnvSpec& spec, const Vector& s, const Vector& a);

// Executes the controller from the initial state. With noise_on == false the
// recorded actions are the (clamped) controller means. Recorded actions are
// always the clamped torques actually applied.
Trajectory rollout(const EnvSpec& spec, const LinearGaussianController& controller,
                   bool noise_on, Rng& rng);

// Kinetic energy 1/2 qdot^T M(q) qdot of the arm (or point mass).
double kinetic_energy(const EnvSpec& spec, const Vector& s);

// Exact affine map s' = A s + B a + c of the point mass.
struct AffineModel {
  Matrix a;
  Matrix b;
  Vector c;
};
AffineModel point_mass_model(const EnvSpec& spec);

// Jacobian [ds'/ds, ds'/da] and offset of step() about (s, a), by central
// differences for the arm and exactly for the point mass.
AffineModel linearize(const EnvSpec& spec, const Vector& s, const Vector& a);

}  // namespace env
}  // namespace lqrgaifo
