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

#include "lqrgaifo/lqrgaifo.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "lqrgaifo/config.hpp"
#include "lqrgaifo/errors.hpp"
#include "lqrgaifo/imitation.hpp"
#include "lqrgaifo/serialization.hpp"

struct lg_config {
  lqrgaifo::Config config;
};
struct lg_controller {
  lqrgaifo::LinearGaussianController controller;
};
struct lg_demos {
  lqrgaifo::DemoSet demos;
};
struct lg_run {
  lqrgaifo::RunResult result;
};

namespace {

using lqrgaifo::Error;
using lqrgaifo::ErrorKind;

thread_local std::string g_last_error;

lg_status fail(lg_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

lg_status status_of(const Error& e) {
  if (e.numerical()) return LG_ERR_NUMERICAL;
  switch (e.kind()) {
    case ErrorKind::Config:
      return LG_ERR_CONFIG;
    case ErrorKind::Io:
      return LG_ERR_IO;
    default:
      return LG_ERR_INVALID_ARGUMENT;
  }
}

// Runs body, translating exceptions into status codes.
template <typename F>
lg_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LG_OK;
  } catch (const Error& e) {
    return fail(status_of(e), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LG_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

lqrgaifo::ExperimentConfig experiment(const lg_config* config) {
  require(config != nullptr, "config handle is NULL");
  return lqrgaifo::ExperimentConfig::from(config->config);
}

double final_distance(const lqrgaifo::Trajectory& traj) {
  const int joints = traj.env.joint_count();
  return traj.states.back().segment(2 * joints, 2).norm();
}

}  // namespace

extern "C" {

const char* lg_last_error(void) { return g_last_error.c_str(); }

const char* lg_version(void) { return "0.1.0"; }

lg_status lg_config_new(lg_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new lg_config{};
  });
}

lg_status lg_config_load(const char* path, lg_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path or out is NULL");
    *out = new lg_config{lqrgaifo::Config::load(path)};
  });
}

lg_status lg_config_set(lg_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "NULL argument");
    config->config.set(key, value);
  });
}

lg_status lg_config_apply(lg_config* config, const char* assignment) {
  return guarded([&] {
    require(config && assignment, "NULL argument");
    config->config.apply_override(assignment);
  });
}

lg_status lg_config_get(const lg_config* config, const char* key, char* buf, size_t capacity,
                        size_t* needed) {
  return guarded([&] {
    require(config && key, "NULL argument");
    const std::string& v = config->config.get(key);
    if (needed) *needed = v.size() + 1;
    if (buf && capacity > v.size()) std::memcpy(buf, v.c_str(), v.size() + 1);
  });
}

lg_status lg_config_validate(const lg_config* config) {
  return guarded([&] { experiment(config); });
}

lg_status lg_config_save(const lg_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "NULL argument");
    config->config.save(path);
  });
}

void lg_config_free(lg_config* config) { delete config; }

lg_status lg_train_expert(const lg_config* config, uint64_t seed, lg_controller** out,
                          lg_expert_info* info) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const auto cfg = experiment(config);
    lqrgaifo::Rng rng(seed);
    auto result = lqrgaifo::train_expert(cfg, rng);
    if (info) {
      info->eval_cost = result.eval_cost;
      info->final_distance = final_distance(result.trajectory);
      info->iterations = result.iterations;
      info->converged = result.converged ? 1 : 0;
    }
    *out = new lg_controller{std::move(result.controller)};
  });
}

lg_status lg_controller_load(const char* path, lg_controller** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = new lg_controller{lqrgaifo::io::load_controller(path)};
  });
}

lg_status lg_controller_save(const lg_controller* controller, const char* path) {
  return guarded([&] {
    require(controller && path, "NULL argument");
    lqrgaifo::io::save_controller(path, controller->controller);
  });
}

int lg_controller_horizon(const lg_controller* controller) {
  return controller ? controller->controller.horizon() : 0;
}

void lg_controller_free(lg_controller* controller) { delete controller; }

lg_status lg_record_demos(const lg_controller* controller, const lg_config* config, int count,
                          uint64_t seed, lg_demos** out) {
  return guarded([&] {
    require(controller && out, "NULL argument");
    const auto cfg = experiment(config);
    require(controller->controller.horizon() == cfg.env.horizon &&
                controller->controller.state_dim() == cfg.env.state_dim(),
            "controller does not fit the configured environment");
    lqrgaifo::Rng rng(seed);
    *out = new lg_demos{lqrgaifo::record_demos(controller->controller, cfg.env, count, rng)};
  });
}

lg_status lg_demos_load(const char* path, lg_demos** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = new lg_demos{lqrgaifo::load_demos(path)};
  });
}

lg_status lg_demos_save(const lg_demos* demos, const char* path) {
  return guarded([&] {
    require(demos && path, "NULL argument");
    lqrgaifo::save_demos(path, demos->demos);
  });
}

lg_status lg_demos_merge(lg_demos* into, const lg_demos* other) {
  return guarded([&] {
    require(into && other, "NULL argument");
    into->demos = lqrgaifo::merge_demos({into->demos, other->demos});
  });
}

size_t lg_demos_count(const lg_demos* demos) {
  return demos ? demos->demos.trajectories.size() : 0;
}

void lg_demos_free(lg_demos* demos) { delete demos; }

lg_status lg_imitate(const lg_config* config, const lg_demos* demos, uint64_t seed,
                     const char* csv_path, lg_run** out) {
  return guarded([&] {
    require(demos && out, "NULL argument");
    const auto cfg = experiment(config);
    std::ofstream csv;
    lqrgaifo::IterationObserver observer;
    if (csv_path) {
      csv.open(csv_path);
      if (!csv) throw Error(ErrorKind::Io, std::string("cannot write '") + csv_path + "'");
      lqrgaifo::runlog::write_csv_header(csv);
      csv.flush();
      observer = [&csv](const lqrgaifo::IterationRecord& r) {
        lqrgaifo::runlog::write_csv_row(csv, r);
        csv.flush();
      };
    }
    auto result = lqrgaifo::run_lqr_gaifo(cfg, demos->demos, seed, observer);
    if (csv_path && !csv) throw Error(ErrorKind::Io, std::string("failed writing '") + csv_path + "'");
    *out = new lg_run{std::move(result)};
  });
}

size_t lg_run_size(const lg_run* run) { return run ? run->result.records.size() : 0; }

lg_status lg_run_record(const lg_run* run, size_t index, lg_iteration_record* out) {
  return guarded([&] {
    require(run && out, "NULL argument");
    require(index < run->result.records.size(), "record index out of range");
    const auto& r = run->result.records[index];
    *out = lg_iteration_record{r.iteration, r.mean_cost,  r.eval_cost,       r.norm_score, r.kl,
                               r.disc_loss, r.seconds,    r.wasserstein_gap, r.aborted ? 1 : 0};
  });
}

lg_status lg_run_write_csv(const lg_run* run, const char* path) {
  return guarded([&] {
    require(run && path, "NULL argument");
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, std::string("cannot write '") + path + "'");
    lqrgaifo::runlog::write_csv(out, run->result.records);
    if (!out) throw Error(ErrorKind::Io, std::string("failed writing '") + path + "'");
  });
}

lg_status lg_run_controller(const lg_run* run, lg_controller** out) {
  return guarded([&] {
    require(run && out, "NULL argument");
    *out = new lg_controller{run->result.controller};
  });
}

void lg_run_free(lg_run* run) { delete run; }

lg_status lg_evaluate(const lg_controller* controller, const lg_config* config,
                      const lg_demos* demos, lg_evaluation* out) {
  return guarded([&] {
    require(controller && out, "NULL argument");
    const auto cfg = experiment(config);
    require(controller->controller.horizon() == cfg.env.horizon &&
                controller->controller.state_dim() == cfg.env.state_dim(),
            "controller does not fit the configured environment");
    lqrgaifo::Rng quiet(0);
    const auto traj = lqrgaifo::env::rollout(cfg.env, controller->controller, false, quiet);
    lg_evaluation e{};
    e.eval_cost = lqrgaifo::eval_cost(traj, cfg.env.goal);
    e.final_distance = final_distance(traj);
    lqrgaifo::Rng baseline(lqrgaifo::kBaselineSeed);
    e.random_cost = lqrgaifo::random_policy_cost(cfg.env, cfg.baseline_rollouts,
                                                 cfg.initial_noise, baseline);
    e.expert_cost = std::numeric_limits<double>::quiet_NaN();
    e.norm_score = std::numeric_limits<double>::quiet_NaN();
    if (cfg.expert_cost) {
      e.expert_cost = *cfg.expert_cost;
    } else if (demos && demos->demos.expert_cost) {
      e.expert_cost = *demos->demos.expert_cost;
    }
    if (!std::isnan(e.expert_cost)) {
      e.norm_score = lqrgaifo::normalized_score(e.eval_cost, e.random_cost, e.expert_cost);
    }
    *out = e;
  });
}

lg_status lg_summarize_csvs(const char* const* csv_paths, size_t count,
                            const char* summary_path) {
  return guarded([&] {
    require(csv_paths && summary_path && count > 0, "no run logs given");
    std::vector<std::vector<lqrgaifo::IterationRecord>> runs;
    for (size_t i = 0; i < count; ++i) {
      require(csv_paths[i] != nullptr, "NULL path");
      runs.push_back(lqrgaifo::runlog::load_csv(csv_paths[i]));
    }
    std::ofstream out(summary_path);
    if (!out) throw Error(ErrorKind::Io, std::string("cannot write '") + summary_path + "'");
    lqrgaifo::runlog::write_summary(out, lqrgaifo::runlog::summarize(runs));
    if (!out) throw Error(ErrorKind::Io, std::string("failed writing '") + summary_path + "'");
  });
}

lg_status lg_write_plot_script(const char* const* summary_paths, const char* const* titles,
                               size_t count, const char* script_path, const char* image_path) {
  return guarded([&] {
    require(summary_paths && script_path && image_path && count > 0, "NULL argument");
    std::vector<std::string> paths, names;
    for (size_t i = 0; i < count; ++i) {
      require(summary_paths[i] != nullptr, "NULL path");
      paths.emplace_back(summary_paths[i]);
      names.emplace_back(titles && titles[i] ? titles[i] : summary_paths[i]);
    }
    std::ofstream out(script_path);
    if (!out) throw Error(ErrorKind::Io, std::string("cannot write '") + script_path + "'");
    lqrgaifo::runlog::write_plot_script(out, paths, names, image_path);
    if (!out) throw Error(ErrorKind::Io, std::string("failed writing '") + script_path + "'");
  });
}

}  // extern "C"
