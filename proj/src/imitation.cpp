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

#include "lqrgaifo/imitation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lqrgaifo/cost_quadratizer.hpp"
#include "lqrgaifo/dynamics_model.hpp"
#include "lqrgaifo/errors.hpp"
#include "lqrgaifo/serialization.hpp"

namespace lqrgaifo {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// EM with the requested component count, falling back to fewer components
// when one collapses. Each attempt starts from the same generator state.
GmmPrior fit_prior(const std::vector<Vector>& points, int components, Rng& rng) {
  const Rng base = rng.split();
  int k = std::min<int>(components, static_cast<int>(points.size()));
  for (;; --k) {
    Rng attempt = base;
    try {
      return dynamics::fit_gmm(points, k, attempt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateComponent || k <= 1) throw;
    }
  }
}

TimeVaryingLinearDynamics fit_from_samples(const std::vector<Trajectory>& samples,
                                           const std::vector<Trajectory>& previous,
                                           int components, double nu, Rng& rng) {
  std::vector<Vector> points = dynamics::pooled_transitions(samples);
  if (!previous.empty()) {
    const auto extra = dynamics::pooled_transitions(previous);
    points.insert(points.end(), extra.begin(), extra.end());
  }
  const GmmPrior prior = fit_prior(points, components, rng);
  return dynamics::fit_dynamics(samples, &prior, nu);
}

double trajectory_objective(const CostFunction& cost, const Trajectory& traj) {
  double total = cost.terminal(traj.states.back());
  for (int t = 0; t < traj.horizon(); ++t) total += cost.stage(t, traj.states[t], traj.actions[t]);
  return total;
}

std::vector<Vector> transition_pairs(const std::vector<Trajectory>& trajs) {
  std::vector<Vector> pairs;
  for (const auto& tr : trajs) {
    for (int t = 0; t < tr.horizon(); ++t) {
      pairs.push_back(critic::join(tr.states[t], tr.states[t + 1]));
    }
  }
  return pairs;
}

TransitionBatch minibatch(const std::vector<Vector>& pool, int size, TransitionSource source,
                          Rng& rng) {
  TransitionBatch batch;
  batch.source = source;
  batch.pairs.reserve(size);
  for (int i = 0; i < size; ++i) batch.pairs.push_back(pool[rng.index(pool.size())]);
  return batch;
}

double mean_score(const DiscriminatorParams& params, const std::vector<Vector>& pool) {
  double s = 0.0;
  for (const auto& x : pool) s += critic::forward(params, x);
  return s / static_cast<double>(pool.size());
}

}  // namespace

void DemoSet::validate() const {
  if (trajectories.empty()) throw Error(ErrorKind::InvalidArgument, "demo set is empty");
  if (goals.size() != trajectories.size()) {
    throw Error(ErrorKind::InvalidArgument, "demo set needs one goal per trajectory");
  }
  const int d = env.state_dim();
  for (const auto& tr : trajectories) {
    if (!tr.state_only()) {
      throw Error(ErrorKind::InvalidArgument, "demo trajectories must be state-only");
    }
    if (tr.horizon() < 1) throw Error(ErrorKind::InvalidArgument, "demo trajectory too short");
    for (const auto& s : tr.states) {
      if (s.size() != d) throw Error(ErrorKind::InvalidArgument, "demo state dimension mismatch");
    }
  }
}

ReachingCost::ReachingCost(const EnvSpec& spec, const ReachingCostOptions& options)
    : horizon_(spec.horizon),
      delta_offset_(2 * spec.joint_count()),
      state_dim_(spec.state_dim()),
      action_dim_(spec.action_dim()),
      kind_(options.kind),
      options_(options) {
  if (kind_ == ExpertCostKind::Auto) {
    kind_ = spec.kind == EnvKind::PlanarArm ? ExpertCostKind::SmoothDistance
                                            : ExpertCostKind::Quadratic;
  }
}

double ReachingCost::distance_term(const Vector& s, Vector* gradient, Matrix* hessian,
                                   double weight) const {
  const Eigen::Vector2d delta = s.segment<2>(delta_offset_);
  if (kind_ == ExpertCostKind::Quadratic) {
    if (gradient) gradient->segment<2>(delta_offset_) += weight * delta;
    if (hessian) hessian->block<2, 2>(delta_offset_, delta_offset_).diagonal().array() += weight;
    return 0.5 * weight * delta.squaredNorm();
  }
  const double alpha = options_.smoothing;
  const double r = std::sqrt(delta.squaredNorm() + alpha * alpha);
  if (gradient) gradient->segment<2>(delta_offset_) += weight * delta / r;
  if (hessian) {
    hessian->block<2, 2>(delta_offset_, delta_offset_) +=
        weight * (Eigen::Matrix2d::Identity() / r - delta * delta.transpose() / (r * r * r));
  }
  return weight * (r - alpha);
}

double ReachingCost::stage(int t, const Vector& s, const Vector& a) const {
  const double w = static_cast<double>(t) / horizon_;
  return distance_term(s, nullptr, nullptr, w) + 0.5 * options_.action_weight * a.squaredNorm() +
         0.5 * options_.velocity_weight * s.tail<2>().squaredNorm();
}

void ReachingCost::stage_derivatives(int t, const Vector& s, const Vector& a, Vector& gradient,
                                     Matrix& hessian) const {
  const int n = state_dim_ + action_dim_;
  gradient = Vector::Zero(n);
  hessian = Matrix::Zero(n, n);
  const double w = static_cast<double>(t) / horizon_;
  distance_term(s, &gradient, &hessian, w);
  gradient.segment(state_dim_ - 2, 2) += options_.velocity_weight * s.tail<2>();
  hessian.block(state_dim_ - 2, state_dim_ - 2, 2, 2).diagonal().array() +=
      options_.velocity_weight;
  gradient.tail(action_dim_) += options_.action_weight * a;
  hessian.bottomRightCorner(action_dim_, action_dim_).diagonal().array() +=
      options_.action_weight;
}

double ReachingCost::terminal(const Vector& s) const {
  return distance_term(s, nullptr, nullptr, options_.terminal_weight) +
         0.5 * options_.terminal_velocity_weight * s.tail<2>().squaredNorm();
}

void ReachingCost::terminal_derivatives(const Vector& s, Vector& gradient,
                                        Matrix& hessian) const {
  gradient = Vector::Zero(state_dim_);
  hessian = Matrix::Zero(state_dim_, state_dim_);
  distance_term(s, &gradient, &hessian, options_.terminal_weight);
  gradient.tail<2>() += options_.terminal_velocity_weight * s.tail<2>();
  hessian.bottomRightCorner<2, 2>().diagonal().array() += options_.terminal_velocity_weight;
}

ExpertResult train_expert(const ExperimentConfig& config, Rng& rng,
                          const LinearGaussianController* warm_start) {
  const EnvSpec& spec = config.env;
  spec.validate();
  ReachingCostOptions cost_options;
  cost_options.kind = config.expert_cost_kind;
  const ReachingCost cost(spec, cost_options);

  control::IlqrOptions options;
  options.lqr.covariance_mode = CovarianceMode::Fixed;
  options.lqr.fixed_variance = config.expert_noise;
  options.lqr.covariance_floor = config.covariance_floor;

  LinearGaussianController ctrl =
      warm_start ? *warm_start
                 : LinearGaussianController::zero(spec.state_dim(), spec.action_dim(),
                                                  spec.horizon, config.expert_noise);
  if (ctrl.horizon() != spec.horizon || ctrl.state_dim() != spec.state_dim() ||
      ctrl.action_dim() != spec.action_dim()) {
    throw Error(ErrorKind::InvalidArgument, "train_expert: warm start does not fit the env");
  }
  for (auto& c : ctrl.covariance) {
    c = config.expert_noise * Matrix::Identity(spec.action_dim(), spec.action_dim());
  }

  Rng quiet(0);
  ExpertResult result;
  Trajectory nominal = env::rollout(spec, ctrl, false, quiet);
  result.objective_trace.push_back(trajectory_objective(cost, nominal));
  for (int it = 0; it < config.expert_iterations; ++it) {
    TimeVaryingLinearDynamics dyn;
    if (config.expert_dynamics == ExpertDynamics::True) {
      dyn = dynamics::linearize_along(spec, nominal, 1e-6);
    } else {
      std::vector<Trajectory> samples;
      for (int i = 0; i < config.expert_rollouts; ++i) {
        Rng stream = rng.split();
        samples.push_back(env::rollout(spec, ctrl, true, stream));
      }
      dyn = fit_from_samples(samples, {}, config.gmm_components, config.prior_strength, rng);
    }
    const control::IlqrResult step = control::ilqr_improve(dyn, &spec, cost, ctrl, nominal, options);
    ++result.iterations;
    if (!step.line_search_failed) {
      ctrl = step.controller;
      nominal = env::rollout(spec, ctrl, false, quiet);
    }
    result.objective_trace.push_back(trajectory_objective(cost, nominal));
    const auto& tr = result.objective_trace;
    const std::size_t n = tr.size();
    if (n >= 4 && tr[n - 4] - tr[n - 1] < 1e-3 * std::abs(tr[n - 4])) {
      result.converged = true;
      break;
    }
    if (step.line_search_failed && config.expert_dynamics == ExpertDynamics::True) {
      result.converged = true;
      break;
    }
  }
  result.controller = std::move(ctrl);
  result.trajectory = std::move(nominal);
  result.eval_cost = eval_cost(result.trajectory, spec.goal);
  return result;
}

DemoSet record_demos(const LinearGaussianController& expert, const EnvSpec& spec, int count,
                     Rng& rng) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "record_demos: count must be >= 1");
  DemoSet demos;
  demos.env = spec;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = rng.next_u64();
    Rng stream(seed);
    Trajectory tr = env::rollout(spec, expert, true, stream);
    tr.actions.clear();
    tr.seed = seed;
    demos.trajectories.push_back(std::move(tr));
    demos.goals.push_back(spec.goal);
  }
  Rng quiet(0);
  demos.expert_cost = eval_cost(env::rollout(spec, expert, false, quiet), spec.goal);
  return demos;
}

DemoSet merge_demos(const std::vector<DemoSet>& sets) {
  if (sets.empty()) throw Error(ErrorKind::InvalidArgument, "merge_demos: nothing to merge");
  DemoSet out;
  out.env = sets.front().env;
  out.expert_cost = sets.front().expert_cost;
  for (const auto& set : sets) {
    if (set.env.kind != out.env.kind || set.env.state_dim() != out.env.state_dim()) {
      throw Error(ErrorKind::InvalidArgument, "merge_demos: state layouts differ");
    }
    out.trajectories.insert(out.trajectories.end(), set.trajectories.begin(),
                            set.trajectories.end());
    out.goals.insert(out.goals.end(), set.goals.begin(), set.goals.end());
  }
  return out;
}

void save_demos(const std::string& path, const DemoSet& demos) {
  demos.validate();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < demos.trajectories.size(); ++i) {
    Trajectory tr = demos.trajectories[i];
    tr.env.goal = demos.goals[i];
    std::vector<Config::Entry> extra;
    if (demos.expert_cost) extra.emplace_back("expert_cost", text::format_double(*demos.expert_cost));
    io::write_trajectory(out, tr, extra);
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

DemoSet load_demos(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  DemoSet demos;
  Trajectory tr;
  Header header;
  while (io::read_trajectory(in, tr, &header)) {
    if (demos.trajectories.empty()) {
      demos.env = tr.env;
      if (const std::string* c = header.find("expert_cost")) {
        try {
          demos.expert_cost = text::parse_double(*c, "expert_cost");
        } catch (const Error& e) {
          throw Error(ErrorKind::Io, std::string("demo header: ") + e.what());
        }
      }
    }
    tr.actions.clear();
    demos.goals.push_back(tr.env.goal);
    demos.trajectories.push_back(std::move(tr));
  }
  if (demos.trajectories.empty()) throw Error(ErrorKind::Io, "'" + path + "' holds no demos");
  demos.validate();
  return demos;
}

double eval_cost(const Trajectory& traj, const Eigen::Vector2d& goal) {
  const int n = traj.horizon();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "eval_cost: empty trajectory");
  const int joints = traj.env.joint_count();
  auto distance = [&](int i) {
    const Vector angles = traj.states[i].head(joints);
    return (goal - env::forward_kinematics(traj.env, angles)).norm();
  };
  double total = distance(n);
  for (int i = 0; i <= n; ++i) total += static_cast<double>(i) / n * distance(i);
  return total;
}

double normalized_score(double cost, double random_cost, double expert_cost) {
  const double span = random_cost - expert_cost;
  if (std::abs(span) < 1e-9) {
    throw Error(ErrorKind::DegenerateBaseline,
                "normalized_score: random and expert costs coincide");
  }
  return (random_cost - cost) / span;
}

double random_policy_cost(const EnvSpec& spec, int rollouts, double noise_variance, Rng& rng) {
  if (rollouts < 1) throw Error(ErrorKind::InvalidArgument, "random_policy_cost: no rollouts");
  const auto ctrl = LinearGaussianController::zero(spec.state_dim(), spec.action_dim(),
                                                   spec.horizon, noise_variance);
  std::vector<double> costs;
  for (int i = 0; i < rollouts; ++i) {
    Rng stream = rng.split();
    costs.push_back(eval_cost(env::rollout(spec, ctrl, true, stream), spec.goal));
  }
  return mean_of(costs);
}

RunResult run_lqr_gaifo(const ExperimentConfig& config, const DemoSet& demos,
                        std::uint64_t seed, const IterationObserver& observer) {
  config.validate();
  demos.validate();
  const EnvSpec& spec = config.env;
  if (demos.env.state_dim() != spec.state_dim()) {
    throw Error(ErrorKind::InvalidArgument, "demos do not match the configured environment");
  }
  const int d = spec.state_dim();
  const int m = spec.action_dim();

  RunResult run;
  Rng baseline_rng(kBaselineSeed);
  run.random_cost =
      random_policy_cost(spec, config.baseline_rollouts, config.initial_noise, baseline_rng);
  if (config.expert_cost) {
    run.expert_cost = *config.expert_cost;
  } else if (demos.expert_cost) {
    run.expert_cost = *demos.expert_cost;
  } else {
    throw Error(ErrorKind::Config, "expert cost unknown: set expert_cost or use recorded demos");
  }
  // Fails early on a degenerate baseline.
  normalized_score(run.expert_cost, run.random_cost, run.expert_cost);

  Rng rng(seed);
  Rng critic_rng = rng.split();
  run.critic = DiscriminatorParams::create(2 * d, config.disc_hidden, critic_rng);
  const std::vector<Vector> expert_pool = transition_pairs(demos.trajectories);
  for (const auto& x : expert_pool) run.critic.normalizer.observe(x);
  critic::AdamState adam;

  LinearGaussianController ctrl =
      LinearGaussianController::zero(d, m, spec.horizon, config.initial_noise);
  control::KlStepOptions kl_options;
  kl_options.covariance_floor = config.covariance_floor;
  kl_options.keep_covariance = config.covariance_mode == CovarianceMode::Fixed;
  costs::QuadratizeOptions quad_options;
  quad_options.scale = -1.0;
  quad_options.direct = config.direct_cost;

  Rng quiet(0);
  std::vector<Trajectory> previous;
  for (int it = 1; it <= config.num_iterations; ++it) {
    const auto start = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.iteration = it;
    std::vector<Trajectory> samples;
    try {
      for (int i = 0; i < config.rollouts_per_iteration; ++i) {
        Rng stream = rng.split();
        samples.push_back(env::rollout(spec, ctrl, true, stream));
      }
      std::vector<double> costs;
      for (const auto& tr : samples) costs.push_back(eval_cost(tr, spec.goal));
      rec.mean_cost = mean_of(costs);

      const TimeVaryingLinearDynamics dyn =
          fit_from_samples(samples, config.gmm_include_previous ? previous : std::vector<Trajectory>{},
                           config.gmm_components, config.prior_strength, rng);

      const std::vector<Vector> imitator_pool = transition_pairs(samples);
      for (const auto& x : imitator_pool) run.critic.normalizer.observe(x);
      for (int k = 0; k < config.disc_steps; ++k) {
        const TransitionBatch imitator =
            minibatch(imitator_pool, config.disc_batch, TransitionSource::Imitator, rng);
        const TransitionBatch expert =
            minibatch(expert_pool, config.disc_batch, TransitionSource::Expert, rng);
        critic::TrainStep step = critic::train_step(run.critic, imitator, expert,
                                                    config.disc_lambda, config.disc_step_size,
                                                    adam, rng);
        run.critic = std::move(step.params);
        rec.disc_loss = step.loss;
      }
      rec.wasserstein_gap = mean_score(run.critic, expert_pool) - mean_score(run.critic, imitator_pool);

      const Trajectory nominal = env::rollout(spec, ctrl, false, quiet);
      const QuadraticCost cost = costs::quadratize(run.critic, dyn, nominal, quad_options);
      control::KlStepResult stepped =
          control::kl_bounded_improve(dyn, cost, ctrl, config.kl_epsilon, kl_options);
      const Trajectory check = env::rollout(spec, stepped.controller, false, quiet);
      ctrl = std::move(stepped.controller);
      rec.kl = stepped.kl;
      if (stepped.status == control::KlStatus::BracketExhausted) rec.note = "kl bracket exhausted";
      rec.eval_cost = eval_cost(check, spec.goal);
    } catch (const Error& e) {
      if (!e.numerical()) throw;
      rec.aborted = true;
      rec.kl = 0.0;
      rec.note = e.what();
      rec.eval_cost = eval_cost(env::rollout(spec, ctrl, false, quiet), spec.goal);
      if (samples.size() != static_cast<std::size_t>(config.rollouts_per_iteration)) {
        rec.mean_cost = rec.eval_cost;
      }
    }
    rec.norm_score = normalized_score(rec.eval_cost, run.random_cost, run.expert_cost);
    if (config.log_wall_clock) {
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    previous = std::move(samples);
    run.records.push_back(rec);
    if (observer) observer(rec);
  }
  run.controller = std::move(ctrl);
  return run;
}

namespace runlog {

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const IterationRecord& r) {
  out << r.iteration << ',' << text::format_double(r.mean_cost) << ','
      << text::format_double(r.eval_cost) << ',' << text::format_double(r.norm_score) << ','
      << text::format_double(r.kl) << ',' << text::format_double(r.disc_loss) << ','
      << text::format_double(r.seconds) << '\n';
}

void write_csv(std::ostream& out, const std::vector<IterationRecord>& records) {
  write_csv_header(out);
  for (const auto& r : records) write_csv_row(out, r);
}

std::vector<IterationRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != kCsvHeader) {
    throw Error(ErrorKind::Io, "run log lacks the expected CSV header");
  }
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != 7) throw Error(ErrorKind::Io, "run log row must have 7 fields");
    IterationRecord r;
    try {
      r.iteration = static_cast<int>(text::parse_int(f[0], "iteration"));
      r.mean_cost = text::parse_double(f[1], "mean_cost");
      r.eval_cost = text::parse_double(f[2], "eval_cost");
      r.norm_score = text::parse_double(f[3], "norm_score");
      r.kl = text::parse_double(f[4], "kl");
      r.disc_loss = text::parse_double(f[5], "disc_loss");
      r.seconds = text::parse_double(f[6], "seconds");
    } catch (const Error& e) {
      throw Error(ErrorKind::Io, std::string("run log: ") + e.what());
    }
    out.push_back(r);
  }
  return out;
}

std::vector<IterationRecord> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_csv(in);
}

std::vector<SummaryRow> summarize(const std::vector<std::vector<IterationRecord>>& runs) {
  int last = 0;
  for (const auto& run : runs) {
    for (const auto& r : run) last = std::max(last, r.iteration);
  }
  std::vector<SummaryRow> rows;
  for (int it = 1; it <= last; ++it) {
    std::vector<double> scores, costs;
    for (const auto& run : runs) {
      for (const auto& r : run) {
        if (r.iteration == it) {
          scores.push_back(r.norm_score);
          costs.push_back(r.eval_cost);
        }
      }
    }
    if (scores.empty()) continue;
    auto sem = [](const std::vector<double>& v, double mean) {
      if (v.size() < 2) return 0.0;
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    };
    SummaryRow row;
    row.iteration = it;
    row.runs = static_cast<int>(scores.size());
    row.mean_score = mean_of(scores);
    row.stderr_score = sem(scores, row.mean_score);
    row.mean_eval_cost = mean_of(costs);
    row.stderr_eval_cost = sem(costs, row.mean_eval_cost);
    rows.push_back(row);
  }
  return rows;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "iteration,runs,mean_norm_score,stderr_norm_score,mean_eval_cost,stderr_eval_cost\n";
  for (const auto& r : rows) {
    out << r.iteration << ',' << r.runs << ',' << text::format_double(r.mean_score) << ','
        << text::format_double(r.stderr_score) << ',' << text::format_double(r.mean_eval_cost)
        << ',' << text::format_double(r.stderr_eval_cost) << '\n';
  }
}

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || text::trim(line).rfind("iteration,runs,", 0) != 0) {
    throw Error(ErrorKind::Io, "summary lacks the expected CSV header");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != 6) throw Error(ErrorKind::Io, "summary row must have 6 fields");
    SummaryRow r;
    try {
      r.iteration = static_cast<int>(text::parse_int(f[0], "iteration"));
      r.runs = static_cast<int>(text::parse_int(f[1], "runs"));
      r.mean_score = text::parse_double(f[2], "mean_norm_score");
      r.stderr_score = text::parse_double(f[3], "stderr_norm_score");
      r.mean_eval_cost = text::parse_double(f[4], "mean_eval_cost");
      r.stderr_eval_cost = text::parse_double(f[5], "stderr_eval_cost");
    } catch (const Error& e) {
      throw Error(ErrorKind::Io, std::string("summary: ") + e.what());
    }
    rows.push_back(r);
  }
  return rows;
}

void write_plot_script(std::ostream& out, const std::vector<std::string>& summary_paths,
                       const std::vector<std::string>& titles, const std::string& image_path) {
  if (summary_paths.empty()) throw Error(ErrorKind::InvalidArgument, "plot: no summary files");
  out << "# gnuplot script: normalized score vs iteration, error bars are the\n"
         "# standard error of the mean across seeds.\n"
         "set datafile separator ','\n"
         "set terminal pngcairo size 800,500\n"
         "set output '"
      << image_path
      << "'\n"
         "set xlabel 'iteration'\n"
         "set ylabel 'normalized score'\n"
         "set key bottom right\n"
         "set grid\n"
         "plot \\\n";
  for (std::size_t i = 0; i < summary_paths.size(); ++i) {
    const std::string title = i < titles.size() ? titles[i] : summary_paths[i];
    out << "  '" << summary_paths[i] << "' every ::1 using 1:3:4 with yerrorbars title '" << title
        << "', \\\n  '" << summary_paths[i] << "' every ::1 using 1:3 with lines notitle"
        << (i + 1 < summary_paths.size() ? ", \\\n" : "\n");
  }
}

}  // namespace runlog
}  // namespace lqrgaifo
