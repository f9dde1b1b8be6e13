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

// The imitation loop and everything around it: the analytic reaching cost,
// expert training, demonstration sets, evaluation and run logs.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lqrgaifo/config.hpp"
#include "lqrgaifo/controller.hpp"
#include "lqrgaifo/discriminator.hpp"
#include "lqrgaifo/environment.hpp"

namespace lqrgaifo {

// State-only expert trajectories, each tagged with the goal it was recorded
// for.
struct DemoSet {
  std::vector<Trajectory> trajectories;
  std::vector<Eigen::Vector2d> goals;
  EnvSpec env;
  // Noiseless cost of the expert that produced the demos, when known.
  std::optional<double> expert_cost;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double mean_cost = 0.0;   // mean eval_cost of the noisy samples
  double eval_cost = 0.0;   // noiseless rollout of the updated controller
  double norm_score = 0.0;
  double kl = 0.0;
  double disc_loss = 0.0;
  double seconds = 0.0;
  // Not logged to CSV.
  double wasserstein_gap = 0.0;  // mean expert score - mean imitator score
  bool aborted = false;
  std::string note;
};

struct ReachingCostOptions {
  ExpertCostKind kind = ExpertCostKind::Auto;
  double smoothing = 0.05;  // alpha of sqrt(|d|^2 + alpha^2) - alpha
  double terminal_weight = 2.0;
  double action_weight = 1e-3;
  double velocity_weight = 1e-3;
  double terminal_velocity_weight = 0.1;
};

// Distance-to-goal cost read off the goal_delta block of the state, weighted
// t / T per stage like eval_cost, plus small action and ee-velocity terms.
class ReachingCost final : public CostFunction {
 public:
  ReachingCost(const EnvSpec& spec, const ReachingCostOptions& options = {});

  double stage(int t, const Vector& s, const Vector& a) const override;
  void stage_derivatives(int t, const Vector& s, const Vector& a, Vector& gradient,
                         Matrix& hessian) const override;
  double terminal(const Vector& s) const override;
  void terminal_derivatives(const Vector& s, Vector& gradient, Matrix& hessian) const override;

  ExpertCostKind kind() const { return kind_; }

 private:
  double distance_term(const Vector& s, Vector* gradient, Matrix* hessian, double weight) const;

  int horizon_;
  int delta_offset_;
  int state_dim_;
  int action_dim_;
  ExpertCostKind kind_;
  ReachingCostOptions options_;
};

struct ExpertResult {
  LinearGaussianController controller;
  Trajectory trajectory;        // noiseless
  double eval_cost = 0.0;       // eval_cost of `trajectory`
  std::vector<double> objective_trace;  // reaching cost per iteration
  int iterations = 0;
  bool converged = false;
};

// Alternates rollouts, dynamics fitting (or exact linearization when
// expert_dynamics is true) and iLQR on the reaching cost. Stops when the
// objective improves by less than 1e-3 relative over three iterations.
ExpertResult train_expert(const ExperimentConfig& config, Rng& rng,
                          const LinearGaussianController* warm_start = nullptr);

// Noisy expert rollouts with the actions stripped.
DemoSet record_demos(const LinearGaussianController& expert, const EnvSpec& spec, int count,
                     Rng& rng);

// Pools several demo sets over a common state layout. The merged set keeps
// the first set's env and expert cost.
DemoSet merge_demos(const std::vector<DemoSet>& sets);

void save_demos(const std::string& path, const DemoSet& demos);
DemoSet load_demos(const std::string& path);

// C = d_T + sum_{i=0}^{T} (i / T) d_i with d_i the ee-to-goal distance.
double eval_cost(const Trajectory& traj, const Eigen::Vector2d& goal);

// (random - cost) / (random - expert).
// Throws Error(DegenerateBaseline) if |random - expert| < 1e-9.
double normalized_score(double cost, double random_cost, double expert_cost);

// Mean eval_cost of noisy rollouts of the zero-gain controller.
double random_policy_cost(const EnvSpec& spec, int rollouts, double noise_variance, Rng& rng);

// The seed used for the baseline rollouts, shared by all runs so that
// normalized scores of different seeds use the same anchor.
inline constexpr std::uint64_t kBaselineSeed = 0x6a09e667f3bcc908ULL;

struct RunResult {
  std::vector<IterationRecord> records;
  LinearGaussianController controller;
  DiscriminatorParams critic;
  double random_cost = 0.0;
  double expert_cost = 0.0;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

// The adversarial imitation loop for one seed. Numerical failures inside an
// iteration abort that iteration only; the previous controller is kept.
RunResult run_lqr_gaifo(const ExperimentConfig& config, const DemoSet& demos,
                        std::uint64_t seed, const IterationObserver& observer = {});

namespace runlog {

inline constexpr const char* kCsvHeader =
    "iteration,mean_cost,eval_cost,norm_score,kl,disc_loss,seconds";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const IterationRecord& record);
void write_csv(std::ostream& out, const std::vector<IterationRecord>& records);
std::vector<IterationRecord> read_csv(std::istream& in);
std::vector<IterationRecord> load_csv(const std::string& path);

struct SummaryRow {
  int iteration = 0;
  int runs = 0;
  double mean_score = 0.0;
  double stderr_score = 0.0;
  double mean_eval_cost = 0.0;
  double stderr_eval_cost = 0.0;
};

// Mean and standard error of the mean per iteration across runs. Iterations
// missing from some runs are summarized over the runs that have them.
std::vector<SummaryRow> summarize(const std::vector<std::vector<IterationRecord>>& runs);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary(std::istream& in);

// A gnuplot script drawing normalized score against iteration with
// standard-error bars, one curve per summary file.
void write_plot_script(std::ostream& out, const std::vector<std::string>& summary_paths,
                       const std::vector<std::string>& titles, const std::string& image_path);

}  // namespace runlog
}  // namespace lqrgaifo
