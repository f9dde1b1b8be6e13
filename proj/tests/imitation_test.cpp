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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lqrgaifo/errors.hpp"
#include "lqrgaifo/imitation.hpp"
#include "lqrgaifo/serialization.hpp"
#include "point_mass_problem.hpp"
#include "test_support.hpp"

using namespace lqrgaifo;
using namespace lqrgaifo::testing;

namespace {

// Straight trajectory of a point mass whose distance to the goal is `dist`.
Trajectory constant_distance(const EnvSpec& spec, double dist, int horizon) {
  Trajectory tr;
  tr.env = spec;
  Vector pos(2);
  pos << spec.goal[0] - dist, spec.goal[1];
  for (int t = 0; t <= horizon; ++t) tr.states.push_back(env::make_state(spec, pos, Vector::Zero(2)));
  return tr;
}

ExperimentConfig point_mass_config() {
  ExperimentConfig cfg;
  cfg.env = EnvSpec::point_mass();
  cfg.env.horizon = 30;
  return cfg;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lqrgaifo_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("eval_cost examples") {
  const EnvSpec spec = EnvSpec::point_mass();
  CHECK(eval_cost(constant_distance(spec, 1.0, 2), spec.goal) == doctest::Approx(2.5));
  CHECK(eval_cost(constant_distance(spec, 0.0, 7), spec.goal) == 0.0);

  // Recompute the weighted sum on a random arm trajectory.
  EnvSpec arm;
  arm.horizon = 12;
  Rng rng(1);
  const auto ctrl = LinearGaussianController::zero(arm.state_dim(), 2, arm.horizon, 1.0);
  const Trajectory tr = env::rollout(arm, ctrl, true, rng);
  double expect = 0.0;
  std::vector<double> dist;
  for (const auto& s : tr.states) {
    const Eigen::Vector2d ee = env::forward_kinematics(arm, s.head(2));
    dist.push_back((ee - arm.goal).norm());
  }
  for (int i = 0; i <= arm.horizon; ++i) expect += (static_cast<double>(i) / arm.horizon) * dist[i];
  expect += dist.back();
  CHECK(eval_cost(tr, arm.goal) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("normalized score anchors") {
  CHECK(normalized_score(0.3, 5.0, 0.3) == doctest::Approx(1.0));
  CHECK(normalized_score(5.0, 5.0, 0.3) == doctest::Approx(0.0));
  CHECK(normalized_score(2.65, 5.0, 0.3) == doctest::Approx(0.5));
  try {
    normalized_score(1.0, 2.0, 2.0 + 1e-12);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateBaseline);
  }
}

TEST_CASE("reaching cost derivatives agree with finite differences") {
  Rng rng(2);
  for (const EnvSpec& spec : {EnvSpec{}, EnvSpec::point_mass()}) {
    const ReachingCost cost(spec);
    const int d = spec.state_dim(), m = spec.action_dim();
    for (int trial = 0; trial < 10; ++trial) {
      const Vector q = random_vector(rng, spec.joint_count());
      const Vector s = env::make_state(spec, q, random_vector(rng, spec.joint_count()));
      const Vector a = random_vector(rng, m);
      const int t = static_cast<int>(rng.index(spec.horizon));
      Vector x(d + m);
      x << s, a;
      Vector g;
      Matrix h;
      cost.stage_derivatives(t, s, a, g, h);
      auto f = [&](const Vector& y) { return cost.stage(t, y.head(d), y.tail(m)); };
      CHECK(relative_error(g, fd_gradient(f, x)) < 1e-6);
      auto grad = [&](const Vector& y) {
        Vector gy;
        Matrix hy;
        cost.stage_derivatives(t, y.head(d), y.tail(m), gy, hy);
        return gy;
      };
      CHECK(relative_error(h, fd_jacobian(grad, x)) < 1e-5);
      cost.terminal_derivatives(s, g, h);
      CHECK(relative_error(g, fd_gradient([&](const Vector& y) { return cost.terminal(y); }, s)) <
            1e-6);
    }
  }
}

TEST_CASE("point-mass expert with exact dynamics reaches the LQR optimum") {
  ExperimentConfig cfg = point_mass_config();
  cfg.env.torque_limit = 1e9;  // no saturation, so the problem is exactly LQ
  cfg.expert_dynamics = ExpertDynamics::True;
  Rng rng(3);
  const ExpertResult expert = train_expert(cfg, rng);
  CHECK(expert.converged);

  const ReachingCost cost(cfg.env);
  CHECK(cost.kind() == ExpertCostKind::Quadratic);
  Matrix embed;
  Vector offset;
  point_mass_embedding(cfg.env, embed, offset);
  const MinimalGains oracle = minimal_riccati(
      cfg.env, embed, offset,
      [&](int t, const Vector& s, const Vector& a) { return cost.stage(t, s, a); },
      [&](const Vector& s) { return cost.terminal(s); });
  CHECK(minimal_gain_gap(expert.controller, embed, offset, oracle) < 1e-4);
}

TEST_CASE("reacher expert training") {
  ExperimentConfig cfg;
  const Rng seed(4);
  const auto idle = LinearGaussianController::zero(cfg.env.state_dim(), 2, cfg.env.horizon, 0.1);
  Rng quiet(0);
  const double initial = eval_cost(env::rollout(cfg.env, idle, false, quiet), cfg.env.goal);

  SUBCASE("fifteen alternations cut the cost by at least 80%") {
    cfg.expert_iterations = 15;
    Rng rng = seed;
    const ExpertResult res = train_expert(cfg, rng);
    CHECK(res.iterations <= 15);
    CHECK(res.eval_cost <= 0.2 * initial);
  }
  SUBCASE("the converged expert ends at the goal and is a fixed point") {
    Rng rng = seed;
    const ExpertResult res = train_expert(cfg, rng);
    const Vector& last = res.trajectory.states.back();
    CHECK((env::forward_kinematics(cfg.env, last.head(2)) - cfg.env.goal).norm() < 0.05);
    // Objective trace never increases: the line search only accepts improvements.
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);
    }
    Rng again(5);
    const ExpertResult re = train_expert(cfg, again, &res.controller);
    const double before = res.objective_trace.back();
    CHECK(re.objective_trace.front() == doctest::Approx(before).epsilon(1e-12));
    CHECK(before - re.objective_trace.back() <= 1e-3);
  }
}

TEST_CASE("recorded demos are state-only and round-trip through a file") {
  ExperimentConfig cfg = point_mass_config();
  cfg.expert_dynamics = ExpertDynamics::True;
  Rng rng(6);
  const ExpertResult expert = train_expert(cfg, rng);
  const DemoSet demos = record_demos(expert.controller, cfg.env, 5, rng);
  REQUIRE(demos.trajectories.size() == 5);
  for (const auto& tr : demos.trajectories) {
    CHECK(tr.state_only());
    CHECK(tr.horizon() == cfg.env.horizon);
  }
  REQUIRE(demos.expert_cost.has_value());
  CHECK(*demos.expert_cost == doctest::Approx(expert.eval_cost));

  // Noisy demos of a converged expert score close to the expert anchor.
  Rng base(kBaselineSeed);
  const double random = random_policy_cost(cfg.env, 100, 0.1, base);
  double mean = 0.0;
  for (const auto& tr : demos.trajectories) mean += eval_cost(tr, cfg.env.goal) / 5.0;
  CHECK(normalized_score(mean, random, *demos.expert_cost) == doctest::Approx(1.0).epsilon(0.05));

  const auto dir = scratch_dir("demos");
  const std::string path = (dir / "demos.traj").string();
  save_demos(path, demos);
  std::ifstream in(path);
  Header h;
  REQUIRE(io::read_header(in, h));
  CHECK(h.get("action_dim") == "0");
  const DemoSet back = load_demos(path);
  REQUIRE(back.trajectories.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(back.trajectories[i].state_only());
    CHECK(back.trajectories[i].states == demos.trajectories[i].states);
    CHECK(back.goals[i] == demos.goals[i]);
  }
  CHECK(*back.expert_cost == *demos.expert_cost);
  CHECK(back.env.kind == EnvKind::PointMass);
  std::filesystem::remove_all(dir);
}

TEST_CASE("merging demo sets pools trajectories and goals") {
  ExperimentConfig cfg = point_mass_config();
  auto ctrl = LinearGaussianController::zero(8, 2, cfg.env.horizon, 0.1);
  Rng rng(7);
  DemoSet a = record_demos(ctrl, cfg.env, 2, rng);
  EnvSpec other = cfg.env;
  other.goal = {0.5, -0.5};
  DemoSet b = record_demos(ctrl, other, 3, rng);
  const DemoSet merged = merge_demos({a, b});
  CHECK(merged.trajectories.size() == 5);
  CHECK(merged.goals[1] == cfg.env.goal);
  CHECK(merged.goals[4] == other.goal);
  CHECK(*merged.expert_cost == *a.expert_cost);
  EnvSpec three_link;
  three_link.num_links = 3;
  three_link.link_lengths = {0.7, 0.7, 0.6};
  three_link.link_masses = {1.0, 1.0, 1.0};
  three_link.initial_angles = {0.0, 1.0, 1.0};
  const auto arm_ctrl = LinearGaussianController::zero(10, 3, three_link.horizon, 0.1);
  CHECK_THROWS_AS(merge_demos({a, record_demos(arm_ctrl, three_link, 1, rng)}), Error);
  // Same state dimension, different system.
  const auto two_link = LinearGaussianController::zero(8, 2, 50, 0.1);
  CHECK_THROWS_AS(merge_demos({a, record_demos(two_link, EnvSpec{}, 1, rng)}), Error);
}

TEST_CASE("imitation run bookkeeping and determinism") {
  ExperimentConfig cfg = point_mass_config();
  cfg.expert_dynamics = ExpertDynamics::True;
  cfg.num_iterations = 4;
  cfg.log_wall_clock = false;
  Rng rng(8);
  const ExpertResult expert = train_expert(cfg, rng);
  const DemoSet demos = record_demos(expert.controller, cfg.env, 5, rng);
  std::vector<int> seen;
  const RunResult a =
      run_lqr_gaifo(cfg, demos, 11, [&](const IterationRecord& r) { seen.push_back(r.iteration); });
  REQUIRE(a.records.size() == 4);
  CHECK(seen == std::vector<int>{1, 2, 3, 4});
  for (const auto& r : a.records) {
    CHECK(std::isfinite(r.norm_score));
    CHECK(r.kl >= 0.0);
    CHECK(r.seconds == 0.0);
  }
  CHECK(a.expert_cost == *demos.expert_cost);
  const RunResult b = run_lqr_gaifo(cfg, demos, 11);
  std::ostringstream ca, cb;
  runlog::write_csv(ca, a.records);
  runlog::write_csv(cb, b.records);
  CHECK(ca.str() == cb.str());
  const RunResult c = run_lqr_gaifo(cfg, demos, 12);
  std::ostringstream cc;
  runlog::write_csv(cc, c.records);
  CHECK(cc.str() != ca.str());
}

TEST_CASE("self-imitation of the initial controller has nothing to learn") {
  ExperimentConfig cfg = point_mass_config();
  cfg.num_iterations = 5;
  const auto initial = LinearGaussianController::zero(8, 2, cfg.env.horizon, cfg.initial_noise);
  Rng rng(9);
  DemoSet demos = record_demos(initial, cfg.env, 5, rng);
  // Anchor the score to a separately trained expert.
  cfg.expert_dynamics = ExpertDynamics::True;
  demos.expert_cost = train_expert(cfg, rng).eval_cost;
  const RunResult run = run_lqr_gaifo(cfg, demos, 3);
  for (const auto& r : run.records) CHECK(std::abs(r.norm_score) < 0.1);
}

TEST_CASE("run logs round-trip and summarize with standard errors") {
  std::vector<std::vector<IterationRecord>> runs(3);
  const double scores[3][2] = {{0.1, 0.5}, {0.3, 0.7}, {0.2, 0.9}};
  for (int r = 0; r < 3; ++r) {
    for (int i = 0; i < 2; ++i) {
      IterationRecord rec;
      rec.iteration = i + 1;
      rec.norm_score = scores[r][i];
      rec.eval_cost = 1.0 + r;
      rec.kl = 0.25;
      runs[r].push_back(rec);
    }
  }
  std::stringstream csv;
  runlog::write_csv(csv, runs[1]);
  CHECK(csv.str().rfind(runlog::kCsvHeader, 0) == 0);
  const auto back = runlog::read_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[1].norm_score == runs[1][1].norm_score);
  CHECK(back[0].kl == 0.25);

  const auto rows = runlog::summarize(runs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].runs == 3);
  CHECK(rows[0].mean_score == doctest::Approx(0.2));
  CHECK(rows[0].stderr_score == doctest::Approx(0.1 / std::sqrt(3.0)));
  CHECK(rows[1].mean_score == doctest::Approx(0.7));
  CHECK(rows[1].stderr_score == doctest::Approx(0.2 / std::sqrt(3.0)));
  CHECK(rows[0].mean_eval_cost == doctest::Approx(2.0));

  std::stringstream summary;
  runlog::write_summary(summary, rows);
  const auto rows_back = runlog::read_summary(summary);
  REQUIRE(rows_back.size() == 2);
  CHECK(rows_back[1].stderr_score == rows[1].stderr_score);

  std::ostringstream plot;
  runlog::write_plot_script(plot, {"a/summary.csv", "b/summary.csv"}, {"4 goals", "8 goals"},
                            "score.png");
  CHECK(plot.str().find("yerrorbars") != std::string::npos);
  CHECK(plot.str().find("8 goals") != std::string::npos);
  CHECK(plot.str().find("score.png") != std::string::npos);
}
