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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lqrgaifo/environment.hpp"
#include "lqrgaifo/errors.hpp"
#include "test_support.hpp"

using namespace lqrgaifo;
using namespace lqrgaifo::testing;

namespace {

EnvSpec arm(int links = 2) {
  EnvSpec spec;
  spec.num_links = links;
  spec.link_lengths.assign(links, 1.0);
  spec.link_masses.assign(links, 1.0);
  spec.initial_angles.assign(links, 0.3);
  return spec;
}

Vector angles(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("forward kinematics examples") {
  const EnvSpec spec = arm();
  const double pi = std::numbers::pi;
  CHECK((env::forward_kinematics(spec, angles({0, 0})) - Eigen::Vector2d(2, 0)).norm() < 1e-15);
  CHECK((env::forward_kinematics(spec, angles({pi / 2, 0})) - Eigen::Vector2d(0, 2)).norm() <
        1e-15);
  CHECK((env::forward_kinematics(spec, angles({pi / 2, -pi / 2})) - Eigen::Vector2d(1, 1))
            .norm() < 1e-15);
}

TEST_CASE("arm at rest with zero torque stays at rest") {
  const EnvSpec spec = arm();
  const Vector s = env::make_state(spec, angles({0.4, -1.1}), Vector::Zero(2));
  const Vector next = env::step(spec, s, Vector::Zero(2));
  CHECK(next.head(2) == s.head(2));
  CHECK(next.segment(2, 2).isZero(0.0));
}

TEST_CASE("point mass with zero action and zero velocity does not move") {
  const EnvSpec spec = EnvSpec::point_mass();
  const Vector s = env::make_state(spec, angles({0.3, -0.2}), Vector::Zero(2));
  const Vector next = env::step(spec, s, Vector::Zero(2));
  CHECK(next == s);
  const env::AffineModel model = env::point_mass_model(spec);
  Rng rng(1);
  const Vector a = random_vector(rng, 2);
  const Vector s2 = env::make_state(spec, random_vector(rng, 2), random_vector(rng, 2));
  CHECK(relative_error(model.a * s2 + model.b * a + model.c, env::step(spec, s2, a)) < 1e-14);
}

TEST_CASE("single link under constant torque matches hand integration") {
  EnvSpec spec = arm(1);
  spec.link_lengths = {0.7};
  spec.link_masses = {1.3};
  spec.initial_angles = {0.2};
  spec.damping = 0.4;
  const double tau = 1.5;
  double q = 0.2, qd = 0.0;
  Vector s = env::initial_state(spec);
  for (int k = 0; k < 3; ++k) {
    const double inertia = 1.3 * 0.7 * 0.7;
    qd = qd + spec.dt * (tau - spec.damping * qd) / inertia;
    q = q + spec.dt * qd;
    s = env::step(spec, s, Vector::Constant(1, tau));
    CHECK(s[0] == doctest::Approx(q).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(qd).epsilon(1e-14));
  }
  const Eigen::Vector2d ee(0.7 * std::cos(q), 0.7 * std::sin(q));
  CHECK((s.segment(2, 2) - (spec.goal - ee)).norm() < 1e-12);
  CHECK((s.segment(4, 2) - qd * Eigen::Vector2d(-0.7 * std::sin(q), 0.7 * std::cos(q))).norm() <
        1e-12);
}

TEST_CASE("torques are clamped, not rejected") {
  const EnvSpec spec = arm();
  const Vector s = env::initial_state(spec);
  const Vector big = Vector::Constant(2, 100.0);
  CHECK(env::step(spec, s, big) == env::step(spec, s, Vector::Constant(2, spec.torque_limit)));
}

TEST_CASE("integration blow-up raises NonFiniteState") {
  EnvSpec spec = EnvSpec::point_mass();
  spec.dt = 1e300;
  const Vector s = env::make_state(spec, Vector::Zero(2), Vector::Constant(2, 1e300));
  try {
    env::step(spec, s, Vector::Zero(2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFiniteState);
  }
}

TEST_CASE("null controller on the point mass applies zero actions") {
  const EnvSpec spec = EnvSpec::point_mass();
  const auto ctrl = LinearGaussianController::zero(spec.state_dim(), 2, spec.horizon, 0.0);
  Rng rng(2);
  const Trajectory tr = env::rollout(spec, ctrl, true, rng);
  REQUIRE(tr.actions.size() == static_cast<std::size_t>(spec.horizon));
  for (const auto& a : tr.actions) CHECK(a.isZero(0.0));
}

TEST_CASE("rollouts are deterministic and replay-consistent") {
  const EnvSpec spec = arm();
  Rng init(3);
  const auto ctrl = random_controller(init, spec.state_dim(), 2, spec.horizon, 0.3);
  Rng a(5), b(5);
  const Trajectory ta = env::rollout(spec, ctrl, true, a);
  const Trajectory tb = env::rollout(spec, ctrl, true, b);
  CHECK(ta.states == tb.states);
  CHECK(ta.actions == tb.actions);
  REQUIRE(ta.states.size() == ta.actions.size() + 1);
  for (int t = 0; t < ta.horizon(); ++t) {
    CHECK(env::step(spec, ta.states[t], ta.actions[t]) == ta.states[t + 1]);
    const Eigen::Vector2d ee = env::forward_kinematics(spec, ta.states[t].head(2));
    CHECK((ta.states[t].segment(4, 2) - (spec.goal - ee)).norm() < 1e-12);
  }
}

TEST_CASE("noiseless rollouts apply the controller means") {
  const EnvSpec spec = arm();
  Rng init(4);
  const auto ctrl = random_controller(init, spec.state_dim(), 2, spec.horizon, 0.2);
  Rng rng(6);
  const Trajectory tr = env::rollout(spec, ctrl, false, rng);
  for (int t = 0; t < tr.horizon(); ++t) {
    CHECK(tr.actions[t] == env::clamp_action(spec, ctrl.mean_action(t, tr.states[t])));
  }
}

TEST_CASE("exploration noise has the commanded standard deviation") {
  const EnvSpec spec = EnvSpec::point_mass();
  const double sigma = 0.3;
  Rng init(7);
  auto ctrl = random_controller(init, spec.state_dim(), 2, spec.horizon, 0.1);
  for (auto& c : ctrl.covariance) c = sigma * sigma * Matrix::Identity(2, 2);
  Rng rng(8);
  double ss = 0.0;
  long count = 0;
  for (int r = 0; r < 10'000; ++r) {
    const Trajectory tr = env::rollout(spec, ctrl, true, rng);
    for (int t = 0; t < tr.horizon(); t += 7) {
      const Vector e = tr.actions[t] - ctrl.mean_action(t, tr.states[t]);
      ss += e.squaredNorm();
      count += 2;
    }
  }
  CHECK(std::abs(std::sqrt(ss / count) - sigma) < 0.05 * sigma);
}

TEST_CASE("kinetic energy never increases under zero torque for a single link") {
  EnvSpec spec = arm(1);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    spec.damping = trial % 4 == 0 ? 0.0 : 0.5;
    Vector s = env::make_state(spec, random_vector(rng, 1), random_vector(rng, 1, 3.0));
    double energy = env::kinetic_energy(spec, s);
    for (int k = 0; k < 100; ++k) {
      s = env::step(spec, s, Vector::Zero(1));
      const double next = env::kinetic_energy(spec, s);
      CHECK(next <= energy * (1 + 1e-12));
      energy = next;
    }
  }
}

TEST_CASE("kinetic energy of the point mass never increases under zero force") {
  EnvSpec spec = EnvSpec::point_mass();
  Rng rng(10);
  Vector s = env::make_state(spec, random_vector(rng, 2), random_vector(rng, 2, 3.0));
  double energy = env::kinetic_energy(spec, s);
  for (int k = 0; k < 100; ++k) {
    s = env::step(spec, s, Vector::Zero(2));
    const double next = env::kinetic_energy(spec, s);
    CHECK(next <= energy);
    energy = next;
  }
}

// Semi-implicit Euler does not conserve energy exactly once the mass matrix
// depends on the configuration; the per-step error is O(dt^2) while damping
// removes O(dt), so monotonicity holds for fine steps.
TEST_CASE("damped multi-link energy is monotone at fine time steps") {
  for (int links : {2, 3}) {
    EnvSpec spec = arm(links);
    spec.dt = 1e-3;
    spec.damping = 0.5;
    Rng rng(11 + links);
    for (int trial = 0; trial < 10; ++trial) {
      Vector s = env::make_state(spec, random_vector(rng, links), random_vector(rng, links));
      double energy = env::kinetic_energy(spec, s);
      for (int k = 0; k < 1000; ++k) {
        s = env::step(spec, s, Vector::Zero(links));
        const double next = env::kinetic_energy(spec, s);
        CHECK(next <= energy * (1 + 1e-12));
        energy = next;
      }
    }
  }
}

TEST_CASE("undamped multi-link energy drift vanishes with the time step") {
  auto drift = [](double dt) {
    EnvSpec spec = arm(2);
    spec.dt = dt;
    spec.damping = 0.0;
    Vector s = env::make_state(spec, angles({0.3, 1.0}), angles({1.0, -0.5}));
    const double e0 = env::kinetic_energy(spec, s);
    double worst = 0.0;
    for (int k = 0; k < static_cast<int>(std::lround(1.0 / dt)); ++k) {
      s = env::step(spec, s, Vector::Zero(2));
      worst = std::max(worst, std::abs(env::kinetic_energy(spec, s) - e0));
    }
    return worst / e0;
  };
  const double coarse = drift(1e-2);
  const double fine = drift(1e-3);
  CHECK(fine < 0.2 * coarse);
  CHECK(fine < 1e-2);
}

TEST_CASE("arm linearization is first-order accurate") {
  const EnvSpec spec = arm();
  Rng rng(10);
  const Vector s = env::make_state(spec, random_vector(rng, 2), random_vector(rng, 2, 0.5));
  const Vector a = random_vector(rng, 2);
  const env::AffineModel lin = env::linearize(spec, s, a);
  CHECK(relative_error(lin.a * s + lin.b * a + lin.c, env::step(spec, s, a)) < 1e-9);
  const Vector ds = random_vector(rng, spec.state_dim(), 1e-4);
  const Vector da = random_vector(rng, 2, 1e-4);
  // Perturb only the joint coordinates; the rest of the state is derived.
  Vector s2 = env::make_state(spec, s.head(2) + ds.head(2), s.segment(2, 2) + ds.segment(2, 2));
  const Vector predicted = lin.a * s2 + lin.b * (a + da) + lin.c;
  CHECK((predicted - env::step(spec, s2, a + da)).norm() < 1e-6);
}

TEST_CASE("EnvSpec validation") {
  EnvSpec spec = arm();
  spec.dt = 0.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = arm();
  spec.horizon = 1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = arm();
  spec.torque_limit = 0.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = arm();
  spec.link_lengths = {1.0};
  CHECK_THROWS_AS(spec.validate(), Error);
  CHECK_NOTHROW(EnvSpec::point_mass().validate());
  CHECK(EnvSpec().state_dim() == 8);
  CHECK(arm(3).state_dim() == 10);
}

TEST_CASE("state flatten round trip") {
  const EnvSpec spec = arm(3);
  Rng rng(11);
  const Vector s = env::make_state(spec, random_vector(rng, 3), random_vector(rng, 3));
  CHECK(State::unflatten(spec, s).flatten() == s);
}
