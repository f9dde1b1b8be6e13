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

#include <sstream>

#include "doctest.h"
#include "lqrgaifo/config.hpp"
#include "lqrgaifo/errors.hpp"

using namespace lqrgaifo;

namespace {

Config parse_text(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("defaults resolve to the documented experiment") {
  const ExperimentConfig cfg = ExperimentConfig::from(Config());
  CHECK(cfg.env.kind == EnvKind::PlanarArm);
  CHECK(cfg.env.num_links == 2);
  CHECK(cfg.env.horizon == 50);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
  CHECK(cfg.num_iterations == 30);
  CHECK(cfg.rollouts_per_iteration == 5);
  CHECK(cfg.kl_epsilon == 1.0);
  CHECK(cfg.disc_hidden == std::vector<int>{32, 32});
  CHECK(cfg.disc_lambda == 10.0);
  CHECK(cfg.disc_steps == 20);
  CHECK(cfg.disc_batch == 64);
  CHECK(cfg.covariance_mode == CovarianceMode::QuuInverse);
  CHECK_FALSE(cfg.expert_cost.has_value());
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parsing accepts comments, blanks and spacing") {
  const Config c = parse_text(
      "# experiment\n\n  num_iterations =  12 \nseeds=1,2,3\nenv = point_mass\n"
      "covariance_mode=fixed\n");
  const ExperimentConfig cfg = ExperimentConfig::from(c);
  CHECK(cfg.num_iterations == 12);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.env.kind == EnvKind::PointMass);
  CHECK(cfg.env.state_dim() == 8);
  CHECK(cfg.covariance_mode == CovarianceMode::Fixed);
}

TEST_CASE("malformed input is a configuration error") {
  CHECK(kind_of([] { parse_text("no equals sign\n"); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_text("frobnicate = 1\n"); }) == ErrorKind::Config);
  CHECK(kind_of([] { Config().apply_override("rollouts_per_iteration"); }) == ErrorKind::Config);
  CHECK(kind_of([] { Config().set("nope", "1"); }) == ErrorKind::Config);
  CHECK(kind_of([] { ExperimentConfig::from(parse_text("num_iterations = ten\n")); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { ExperimentConfig::from(parse_text("covariance_mode = wide\n")); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { ExperimentConfig::from(parse_text("rollouts_per_iteration = 1\n")); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { ExperimentConfig::from(parse_text("dt = -0.1\n")); }) == ErrorKind::Config);
  CHECK(kind_of([] { Config::load("/nonexistent/run.cfg"); }) == ErrorKind::Io);
}

TEST_CASE("overrides replace entries and survive a write/parse cycle") {
  Config c;
  c.apply_override("rollouts_per_iteration=7");
  c.set("goal", "0.5,-0.25");
  c.set("expert_cost", "0.125");
  CHECK(c.get("rollouts_per_iteration") == "7");
  std::stringstream ss;
  c.write(ss);
  const Config back = Config::parse(ss);
  CHECK(back.entries() == c.entries());
  const ExperimentConfig cfg = ExperimentConfig::from(back);
  CHECK(cfg.rollouts_per_iteration == 7);
  CHECK(cfg.env.goal == Eigen::Vector2d(0.5, -0.25));
  REQUIRE(cfg.expert_cost.has_value());
  CHECK(*cfg.expert_cost == 0.125);
}

TEST_CASE("every default key is known and listed once") {
  std::vector<std::string> keys;
  for (const auto& [k, v] : Config::defaults()) {
    CHECK(Config::is_known(k));
    CHECK(std::find(keys.begin(), keys.end(), k) == keys.end());
    keys.push_back(k);
  }
  CHECK_FALSE(Config::is_known("frobnicate"));
}

TEST_CASE("env entries round-trip") {
  EnvSpec spec;
  spec.num_links = 3;
  spec.link_lengths = {0.5, 0.75, 1.25};
  spec.link_masses = {1.0, 2.0, 0.5};
  spec.initial_angles = {0.1, 0.2, 0.3};
  spec.goal = {0.3, 1.1};
  spec.gravity = 9.81;
  const EnvSpec back = env_from_entries(env_entries(spec));
  CHECK(back.num_links == 3);
  CHECK(back.link_lengths == spec.link_lengths);
  CHECK(back.link_masses == spec.link_masses);
  CHECK(back.initial_angles == spec.initial_angles);
  CHECK(back.goal == spec.goal);
  CHECK(back.gravity == spec.gravity);
  const EnvSpec pm = env_from_entries(env_entries(EnvSpec::point_mass()));
  CHECK(pm.kind == EnvKind::PointMass);
}

TEST_CASE("number formatting is exact") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    CHECK(text::parse_double(text::format_double(v), "v") == v);
  }
  CHECK(text::parse_double_list("1, 2.5,-3", "l") == std::vector<double>{1.0, 2.5, -3.0});
  CHECK(text::split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(text::trim("  x y \t") == "x y");
  CHECK(kind_of([] { text::parse_int("3.5", "n"); }) == ErrorKind::Config);
}
