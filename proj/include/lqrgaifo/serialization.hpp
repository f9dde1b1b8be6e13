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

// Line-oriented text container shared by every persisted artifact.
//
// A block starts with a header line
//   # lqrgaifo <kind> key=value key=value ...
// followed by tab-separated numeric rows. Reals are written with 17
// significant digits so that a write/read cycle is bit-exact.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lqrgaifo/config.hpp"
#include "lqrgaifo/discriminator.hpp"
#include "lqrgaifo/dynamics_model.hpp"
#include "lqrgaifo/environment.hpp"
#include "lqrgaifo/linear_gaussian_controller.hpp"

namespace lqrgaifo {

struct Header {
  std::string kind;
  std::vector<Config::Entry> entries;

  // Throws Error(Io) if the key is absent.
  const std::string& get(const std::string& key) const;
  const std::string* find(const std::string& key) const;
};

namespace io {

void write_header(std::ostream& out, const Header& header);
// Reads the next header, skipping blank lines. Returns false at end of input.
bool read_header(std::istream& in, Header& header);

// Rows `t, s[0..d), a[0..m)`; the terminal row has m empty action fields.
// State-only trajectories are written with action_dim=0.
void write_trajectory(std::ostream& out, const Trajectory& traj,
                      const std::vector<Config::Entry>& extra = {});
// Returns false at end of input. Unrecognized header keys land in `header`.
bool read_trajectory(std::istream& in, Trajectory& traj, Header* header = nullptr);

void save_trajectory(const std::string& path, const Trajectory& traj);
Trajectory load_trajectory(const std::string& path);

// Rows `t, K (row-major), k, s_hat, a_hat, Sigma (row-major)`.
void write_controller(std::ostream& out, const LinearGaussianController& ctrl);
LinearGaussianController read_controller(std::istream& in);
void save_controller(const std::string& path, const LinearGaussianController& ctrl);
LinearGaussianController load_controller(const std::string& path);

// Rows `t, F (row-major), f, Sigma (row-major)` and a final row `-1, mu_0, P_0`.
void write_dynamics(std::ostream& out, const TimeVaryingLinearDynamics& dyn);
TimeVaryingLinearDynamics read_dynamics(std::istream& in);

// One row per layer `out, in, activation(0 tanh, 1 identity), W, b` and a
// final normalizer row `count, min_scale, mean, m2`.
void write_discriminator(std::ostream& out, const DiscriminatorParams& params);
DiscriminatorParams read_discriminator(std::istream& in);

}  // namespace io
}  // namespace lqrgaifo
