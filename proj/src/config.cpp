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

#include "lqrgaifo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

namespace text {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::Config, what + ": not a number: '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::Config, what + ": not an integer: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part, what));
  return out;
}

}  // namespace text

namespace {

const std::vector<Config::Entry> kDefaults = {
    {"env", "planar_arm"},
    {"num_links", "2"},
    {"dt", "0.1"},
    {"horizon", "50"},
    {"goal", "1.2,0.6"},
    {"torque_limit", "10"},
    {"link_lengths", ""},
    {"link_masses", ""},
    {"damping", "0.5"},
    {"gravity", "0"},
    {"initial_angles", ""},
    {"seeds", "1"},
    {"num_iterations", "30"},
    {"rollouts_per_iteration", "5"},
    {"kl_epsilon", "1"},
    {"initial_noise", "0.1"},
    {"covariance_mode", "quu"},
    {"covariance_floor", "1e-4"},
    {"disc_hidden", "32,32"},
    {"disc_lambda", "10"},
    {"disc_steps", "20"},
    {"disc_batch", "64"},
    {"disc_step_size", "1e-3"},
    {"gmm_components", "4"},
    {"prior_strength", "1"},
    {"gmm_include_previous", "false"},
    {"cost_mode", "mean"},
    {"demo_count", "5"},
    {"demos", ""},
    {"expert_controller", ""},
    {"expert_cost", ""},
    {"expert_iterations", "50"},
    {"expert_rollouts", "5"},
    {"expert_noise", "0.1"},
    {"expert_cost_kind", "auto"},
    {"expert_dynamics", "fitted"},
    {"baseline_rollouts", "100"},
    {"output_dir", "out"},
    {"log_wall_clock", "true"},
};

bool parse_bool(const std::string& s, const std::string& what) {
  const std::string t = text::trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw Error(ErrorKind::Config, what + ": expected true/false, got '" + s + "'");
}

int parse_count(const std::string& s, const std::string& what) {
  const long long v = text::parse_int(s, what);
  if (v < 0 || v > 1'000'000'000) throw Error(ErrorKind::Config, what + ": out of range");
  return static_cast<int>(v);
}

const std::string& lookup(const std::vector<Config::Entry>& entries, const std::string& key) {
  static const std::string empty;
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return empty;
}

}  // namespace

Config::Config() : values_(kDefaults) {}

const std::vector<Config::Entry>& Config::defaults() { return kDefaults; }

bool Config::is_known(const std::string& key) {
  return std::any_of(kDefaults.begin(), kDefaults.end(),
                     [&](const Entry& e) { return e.first == key; });
}

void Config::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : values_) {
    if (k == key) {
      v = text::trim(value);
      return;
    }
  }
  throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorKind::Config, "override must be key=value: '" + assignment + "'");
  }
  set(text::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

const std::string& Config::get(const std::string& key) const {
  for (const auto& [k, v] : values_) {
    if (k == key) return v;
  }
  throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.find('=') == std::string::npos) {
      throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key=value");
    }
    cfg.apply_override(t);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
  return parse(in);
}

void Config::write(std::ostream& out) const {
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write config file '" + path + "'");
  write(out);
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

std::vector<Config::Entry> env_entries(const EnvSpec& spec) {
  return {
      {"env", spec.kind == EnvKind::PlanarArm ? "planar_arm" : "point_mass"},
      {"num_links", std::to_string(spec.num_links)},
      {"dt", text::format_double(spec.dt)},
      {"horizon", std::to_string(spec.horizon)},
      {"goal", text::format_list({spec.goal.x(), spec.goal.y()})},
      {"torque_limit", text::format_double(spec.torque_limit)},
      {"link_lengths", text::format_list(spec.link_lengths)},
      {"link_masses", text::format_list(spec.link_masses)},
      {"damping", text::format_double(spec.damping)},
      {"gravity", text::format_double(spec.gravity)},
      {"initial_angles", text::format_list(spec.initial_angles)},
  };
}

EnvSpec env_from_entries(const std::vector<Config::Entry>& entries) {
  const std::string kind = text::trim(lookup(entries, "env"));
  EnvSpec spec;
  if (kind == "point_mass") {
    spec = EnvSpec::point_mass();
  } else if (kind != "planar_arm") {
    throw Error(ErrorKind::Config, "env: expected planar_arm or point_mass, got '" + kind + "'");
  }
  spec.num_links = parse_count(lookup(entries, "num_links"), "num_links");
  spec.dt = text::parse_double(lookup(entries, "dt"), "dt");
  spec.horizon = parse_count(lookup(entries, "horizon"), "horizon");
  const auto goal = text::parse_double_list(lookup(entries, "goal"), "goal");
  if (goal.size() != 2) throw Error(ErrorKind::Config, "goal: expected x,y");
  spec.goal = {goal[0], goal[1]};
  spec.torque_limit = text::parse_double(lookup(entries, "torque_limit"), "torque_limit");
  spec.damping = text::parse_double(lookup(entries, "damping"), "damping");
  spec.gravity = text::parse_double(lookup(entries, "gravity"), "gravity");
  const int joints = spec.joint_count();
  auto list_or = [&](const std::string& key, std::vector<double> fallback) {
    auto v = text::parse_double_list(lookup(entries, key), key);
    return v.empty() ? fallback : v;
  };
  if (spec.kind == EnvKind::PlanarArm) {
    spec.link_lengths = list_or("link_lengths", std::vector<double>(joints, 1.0));
    spec.link_masses = list_or("link_masses", std::vector<double>(joints, 1.0));
    std::vector<double> init(joints, 0.0);
    if (joints >= 2) init[1] = 2.0;
    spec.initial_angles = list_or("initial_angles", init);
  } else {
    spec.link_lengths = list_or("link_lengths", {});
    spec.link_masses = list_or("link_masses", {1.0});
    spec.initial_angles = list_or("initial_angles", {0.0, 0.0});
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  return spec;
}

ExperimentConfig ExperimentConfig::from(const Config& config) {
  const auto& e = config.entries();
  ExperimentConfig c;
  c.env = env_from_entries(e);
  c.seeds.clear();
  for (const auto& part : text::split(config.get("seeds"), ',')) {
    if (text::trim(part).empty()) continue;
    const long long v = text::parse_int(part, "seeds");
    if (v < 0) throw Error(ErrorKind::Config, "seeds: must be non-negative");
    c.seeds.push_back(static_cast<std::uint64_t>(v));
  }
  c.num_iterations = parse_count(config.get("num_iterations"), "num_iterations");
  c.rollouts_per_iteration =
      parse_count(config.get("rollouts_per_iteration"), "rollouts_per_iteration");
  c.kl_epsilon = text::parse_double(config.get("kl_epsilon"), "kl_epsilon");
  c.initial_noise = text::parse_double(config.get("initial_noise"), "initial_noise");
  const std::string mode = text::trim(config.get("covariance_mode"));
  if (mode == "quu") {
    c.covariance_mode = CovarianceMode::QuuInverse;
  } else if (mode == "fixed") {
    c.covariance_mode = CovarianceMode::Fixed;
  } else {
    throw Error(ErrorKind::Config, "covariance_mode: expected quu or fixed");
  }
  c.covariance_floor = text::parse_double(config.get("covariance_floor"), "covariance_floor");
  c.disc_hidden.clear();
  for (double w : text::parse_double_list(config.get("disc_hidden"), "disc_hidden")) {
    if (w < 1 || w != std::floor(w)) throw Error(ErrorKind::Config, "disc_hidden: bad width");
    c.disc_hidden.push_back(static_cast<int>(w));
  }
  c.disc_lambda = text::parse_double(config.get("disc_lambda"), "disc_lambda");
  c.disc_steps = parse_count(config.get("disc_steps"), "disc_steps");
  c.disc_batch = parse_count(config.get("disc_batch"), "disc_batch");
  c.disc_step_size = text::parse_double(config.get("disc_step_size"), "disc_step_size");
  c.gmm_components = parse_count(config.get("gmm_components"), "gmm_components");
  c.prior_strength = text::parse_double(config.get("prior_strength"), "prior_strength");
  c.gmm_include_previous = parse_bool(config.get("gmm_include_previous"), "gmm_include_previous");
  const std::string cost_mode = text::trim(config.get("cost_mode"));
  if (cost_mode != "mean" && cost_mode != "direct") {
    throw Error(ErrorKind::Config, "cost_mode: expected mean or direct");
  }
  c.direct_cost = cost_mode == "direct";
  c.demo_count = parse_count(config.get("demo_count"), "demo_count");
  c.demos.clear();
  for (const auto& part : text::split(config.get("demos"), ',')) {
    if (!text::trim(part).empty()) c.demos.push_back(text::trim(part));
  }
  c.expert_controller = text::trim(config.get("expert_controller"));
  if (!text::trim(config.get("expert_cost")).empty()) {
    c.expert_cost = text::parse_double(config.get("expert_cost"), "expert_cost");
  }
  c.expert_iterations = parse_count(config.get("expert_iterations"), "expert_iterations");
  c.expert_rollouts = parse_count(config.get("expert_rollouts"), "expert_rollouts");
  c.expert_noise = text::parse_double(config.get("expert_noise"), "expert_noise");
  const std::string kind = text::trim(config.get("expert_cost_kind"));
  if (kind == "auto") {
    c.expert_cost_kind = ExpertCostKind::Auto;
  } else if (kind == "smooth") {
    c.expert_cost_kind = ExpertCostKind::SmoothDistance;
  } else if (kind == "quadratic") {
    c.expert_cost_kind = ExpertCostKind::Quadratic;
  } else {
    throw Error(ErrorKind::Config, "expert_cost_kind: expected auto, smooth or quadratic");
  }
  const std::string dyn = text::trim(config.get("expert_dynamics"));
  if (dyn == "fitted") {
    c.expert_dynamics = ExpertDynamics::Fitted;
  } else if (dyn == "true") {
    c.expert_dynamics = ExpertDynamics::True;
  } else {
    throw Error(ErrorKind::Config, "expert_dynamics: expected fitted or true");
  }
  c.baseline_rollouts = parse_count(config.get("baseline_rollouts"), "baseline_rollouts");
  c.output_dir = text::trim(config.get("output_dir"));
  c.log_wall_clock = parse_bool(config.get("log_wall_clock"), "log_wall_clock");
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Config, what); };
  if (seeds.empty()) fail("seeds: at least one seed is required");
  if (num_iterations < 1) fail("num_iterations must be at least 1");
  if (rollouts_per_iteration < 2) fail("rollouts_per_iteration must be at least 2");
  if (!(kl_epsilon > 0.0)) fail("kl_epsilon must be positive");
  if (!(initial_noise > 0.0)) fail("initial_noise must be positive");
  if (!(covariance_floor > 0.0)) fail("covariance_floor must be positive");
  if (disc_lambda < 0.0) fail("disc_lambda must be non-negative");
  if (disc_batch < 1) fail("disc_batch must be at least 1");
  if (!(disc_step_size > 0.0)) fail("disc_step_size must be positive");
  if (gmm_components < 1) fail("gmm_components must be at least 1");
  if (prior_strength < 0.0) fail("prior_strength must be non-negative");
  if (demo_count < 1) fail("demo_count must be at least 1");
  if (expert_rollouts < 2) fail("expert_rollouts must be at least 2");
  if (!(expert_noise > 0.0)) fail("expert_noise must be positive");
  if (baseline_rollouts < 1) fail("baseline_rollouts must be at least 1");
}

}  // namespace lqrgaifo
