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

// Flat key=value experiment configuration. Every key has a default; unknown
// keys are rejected so that typos fail fast.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqrgaifo/controller.hpp"
#include "lqrgaifo/environment.hpp"

namespace lqrgaifo {

class Config {
 public:
  using Entry = std::pair<std::string, std::string>;

  Config();

  // Lines are `key = value`; blank lines and lines starting with '#' are
  // ignored. Throws Error(Config) on malformed lines or unknown keys.
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  static bool is_known(const std::string& key);
  static const std::vector<Entry>& defaults();

  void set(const std::string& key, const std::string& value);
  // Applies `key=value`.
  void apply_override(const std::string& assignment);
  const std::string& get(const std::string& key) const;

  const std::vector<Entry>& entries() const { return values_; }

  void write(std::ostream& out) const;
  void save(const std::string& path) const;

 private:
  std::vector<Entry> values_;
};

enum class ExpertCostKind { Auto, SmoothDistance, Quadratic };
enum class ExpertDynamics { Fitted, True };

struct ExperimentConfig {
  EnvSpec env;
  std::vector<std::uint64_t> seeds{1};
  int num_iterations = 30;
  int rollouts_per_iteration = 5;
  double kl_epsilon = 1.0;
  double initial_noise = 0.1;
  CovarianceMode covariance_mode = CovarianceMode::QuuInverse;
  double covariance_floor = 1e-4;

  std::vector<int> disc_hidden{32, 32};
  double disc_lambda = 10.0;
  int disc_steps = 20;
  int disc_batch = 64;
  double disc_step_size = 1e-3;

  int gmm_components = 4;
  double prior_strength = 1.0;
  bool gmm_include_previous = false;
  bool direct_cost = false;

  int demo_count = 5;
  std::vector<std::string> demos;
  std::string expert_controller;
  std::optional<double> expert_cost;

  int expert_iterations = 50;
  int expert_rollouts = 5;
  double expert_noise = 0.1;
  ExpertCostKind expert_cost_kind = ExpertCostKind::Auto;
  ExpertDynamics expert_dynamics = ExpertDynamics::Fitted;

  int baseline_rollouts = 100;
  std::string output_dir = "out";
  bool log_wall_clock = true;

  // Throws Error(Config) on unparsable or out-of-range values.
  static ExperimentConfig from(const Config& config);
  void validate() const;
};

// Env keys shared by the config file and the trajectory container header.
std::vector<Config::Entry> env_entries(const EnvSpec& spec);
EnvSpec env_from_entries(const std::vector<Config::Entry>& entries);

namespace text {
std::string format_double(double v);
std::string format_list(const std::vector<double>& values);
double parse_double(const std::string& s, const std::string& what);
long long parse_int(const std::string& s, const std::string& what);
std::vector<double> parse_double_list(const std::string& s, const std::string& what);
std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);
}  // namespace text

}  // namespace lqrgaifo
