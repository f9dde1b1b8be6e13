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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lqrgaifo/lqrgaifo.h"

namespace lqrgaifo_cli {

namespace fs = std::filesystem;

namespace {

// Carries a library status out of a verb implementation.
struct Failure {
  lg_status status;
  std::string message;
};

void check(lg_status status) {
  if (status != LG_OK) throw Failure{status, lg_last_error()};
}

int exit_code(lg_status status) {
  switch (status) {
    case LG_OK:
      return kExitOk;
    case LG_ERR_CONFIG:
    case LG_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    case LG_ERR_NUMERICAL:
      return kExitNumerical;
    case LG_ERR_IO:
      return kExitIo;
    default:
      return kExitInternal;
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<lg_config, Deleter<lg_config, lg_config_free>>;
using ControllerPtr = std::unique_ptr<lg_controller, Deleter<lg_controller, lg_controller_free>>;
using DemosPtr = std::unique_ptr<lg_demos, Deleter<lg_demos, lg_demos_free>>;
using RunPtr = std::unique_ptr<lg_run, Deleter<lg_run, lg_run_free>>;

std::string get(const lg_config* config, const char* key) {
  std::size_t needed = 0;
  check(lg_config_get(config, key, nullptr, 0, &needed));
  std::string value(needed, '\0');
  check(lg_config_get(config, key, value.data(), value.size(), &needed));
  value.resize(needed - 1);
  return value;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> config_seeds(const lg_config* config) {
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split_list(get(config, "seeds"))) seeds.push_back(std::stoull(s));
  return seeds;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

class Session {
 public:
  Session(const Command& cmd, std::ostream& out) : cmd_(cmd), out_(out) {
    lg_config* raw = nullptr;
    check(cmd.config_path ? lg_config_load(cmd.config_path->c_str(), &raw) : lg_config_new(&raw));
    config_.reset(raw);
    for (const auto& o : cmd.overrides) check(lg_config_apply(config_.get(), o.c_str()));
    if (!cmd.seeds.empty()) {
      std::vector<std::string> s;
      for (auto v : cmd.seeds) s.push_back(std::to_string(v));
      check(lg_config_set(config_.get(), "seeds", join(s).c_str()));
    }
    if (cmd.out_dir) check(lg_config_set(config_.get(), "output_dir", cmd.out_dir->c_str()));
    dir_ = get(config_.get(), "output_dir");
    if (dir_.empty()) dir_ = ".";
  }

  int dispatch() {
    const std::string& v = cmd_.verb;
    if (v == "train-expert") return train_expert();
    if (v == "record-demos") return record_demos();
    if (v == "imitate") return imitate(false);
    if (v == "seed-sweep") return imitate(true);
    if (v == "evaluate") return evaluate();
    if (v == "plot") return plot();
    throw UsageError("unknown verb '" + v + "'");
  }

 private:
  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void prepare() {
    check(lg_config_validate(config_.get()));
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Failure{LG_ERR_IO, "cannot create output directory '" + dir_ + "'"};
  }

  // Resolved config of this invocation; `--config` on it reproduces the run.
  void write_manifest() {
    check(lg_config_save(config_.get(), path("manifest-" + cmd_.verb + ".cfg").c_str()));
  }

  std::uint64_t first_seed() const { return config_seeds(config_.get()).front(); }

  ControllerPtr load_controller(const std::string& fallback) {
    lg_controller* raw = nullptr;
    check(lg_controller_load(cmd_.controller.value_or(fallback).c_str(), &raw));
    return ControllerPtr(raw);
  }

  // Demo files from --demos, else the config's demos key, else the default
  // recording location. The resolved list is written back for the manifest.
  DemosPtr load_demos(bool required) {
    std::vector<std::string> files = cmd_.demos;
    if (files.empty()) files = split_list(get(config_.get(), "demos"));
    if (files.empty()) {
      const std::string fallback = path("demos.traj");
      if (!required && !fs::exists(fallback)) return nullptr;
      files.push_back(fallback);
    }
    check(lg_config_set(config_.get(), "demos", join(files).c_str()));
    DemosPtr merged;
    for (const auto& f : files) {
      lg_demos* raw = nullptr;
      check(lg_demos_load(f.c_str(), &raw));
      DemosPtr d(raw);
      if (!merged) {
        merged = std::move(d);
      } else {
        check(lg_demos_merge(merged.get(), d.get()));
      }
    }
    return merged;
  }

  int train_expert() {
    prepare();
    write_manifest();
    lg_controller* raw = nullptr;
    lg_expert_info info{};
    check(lg_train_expert(config_.get(), first_seed(), &raw, &info));
    ControllerPtr ctrl(raw);
    const std::string file = path("expert.ctl");
    check(lg_controller_save(ctrl.get(), file.c_str()));
    out_ << "expert: eval_cost=" << fmt(info.eval_cost)
         << " final_distance=" << fmt(info.final_distance) << " iterations=" << info.iterations
         << (info.converged ? " converged" : " not-converged") << "\nwrote " << file << '\n';
    return kExitOk;
  }

  int record_demos() {
    prepare();
    int count = 0;
    if (cmd_.count) {
      count = *cmd_.count;
      check(lg_config_set(config_.get(), "demo_count", std::to_string(count).c_str()));
    } else {
      count = std::stoi(get(config_.get(), "demo_count"));
    }
    if (cmd_.controller) check(lg_config_set(config_.get(), "expert_controller", cmd_.controller->c_str()));
    std::string source = get(config_.get(), "expert_controller");
    if (source.empty()) source = path("expert.ctl");
    write_manifest();
    lg_controller* craw = nullptr;
    check(lg_controller_load(source.c_str(), &craw));
    ControllerPtr ctrl(craw);
    lg_demos* raw = nullptr;
    check(lg_record_demos(ctrl.get(), config_.get(), count, first_seed(), &raw));
    DemosPtr demos(raw);
    const std::string file = path("demos.traj");
    check(lg_demos_save(demos.get(), file.c_str()));
    out_ << "recorded " << lg_demos_count(demos.get()) << " demos\nwrote " << file << '\n';
    return kExitOk;
  }

  int imitate(bool sweep) {
    prepare();
    DemosPtr demos = load_demos(true);
    write_manifest();
    std::vector<std::string> logs;
    for (std::uint64_t seed : config_seeds(config_.get())) {
      const std::string csv = path("run_seed" + std::to_string(seed) + ".csv");
      lg_run* raw = nullptr;
      check(lg_imitate(config_.get(), demos.get(), seed, csv.c_str(), &raw));
      RunPtr run(raw);
      lg_controller* craw = nullptr;
      check(lg_run_controller(run.get(), &craw));
      ControllerPtr ctrl(craw);
      const std::string ctl = path("controller_seed" + std::to_string(seed) + ".ctl");
      check(lg_controller_save(ctrl.get(), ctl.c_str()));
      lg_iteration_record last{};
      const std::size_t n = lg_run_size(run.get());
      if (n > 0) check(lg_run_record(run.get(), n - 1, &last));
      out_ << "seed " << seed << ": iterations=" << n << " final norm_score=" << fmt(last.norm_score)
           << " eval_cost=" << fmt(last.eval_cost) << "\nwrote " << csv << "\nwrote " << ctl << '\n';
      logs.push_back(csv);
    }
    if (sweep) {
      std::vector<const char*> ptrs;
      for (const auto& l : logs) ptrs.push_back(l.c_str());
      const std::string summary = path("summary.csv");
      check(lg_summarize_csvs(ptrs.data(), ptrs.size(), summary.c_str()));
      out_ << "wrote " << summary << '\n';
    }
    return kExitOk;
  }

  int evaluate() {
    prepare();
    DemosPtr demos = load_demos(false);
    write_manifest();
    ControllerPtr ctrl = load_controller(path("expert.ctl"));
    lg_evaluation e{};
    check(lg_evaluate(ctrl.get(), config_.get(), demos.get(), &e));
    out_ << "eval_cost=" << fmt(e.eval_cost) << " final_distance=" << fmt(e.final_distance)
         << " random_cost=" << fmt(e.random_cost);
    if (std::isnan(e.norm_score)) {
      out_ << " norm_score=unknown (no expert cost: pass --demos or set expert_cost)\n";
    } else {
      out_ << " expert_cost=" << fmt(e.expert_cost) << " norm_score=" << fmt(e.norm_score) << '\n';
    }
    return kExitOk;
  }

  int plot() {
    prepare();
    write_manifest();
    std::vector<std::string> summaries = cmd_.inputs;
    if (summaries.empty()) {
      const std::string summary = path("summary.csv");
      if (!fs::exists(summary)) {
        std::vector<std::string> logs;
        for (const auto& entry : fs::directory_iterator(dir_)) {
          const std::string name = entry.path().filename().string();
          if (name.rfind("run_seed", 0) == 0 && entry.path().extension() == ".csv") {
            logs.push_back(entry.path().string());
          }
        }
        std::sort(logs.begin(), logs.end());
        if (logs.empty()) {
          throw Failure{LG_ERR_IO, "no summary.csv or run_seed*.csv in '" + dir_ + "'"};
        }
        std::vector<const char*> ptrs;
        for (const auto& l : logs) ptrs.push_back(l.c_str());
        check(lg_summarize_csvs(ptrs.data(), ptrs.size(), summary.c_str()));
        out_ << "wrote " << summary << '\n';
      }
      summaries.push_back(summary);
    }
    std::vector<std::string> titles;
    for (const auto& s : summaries) {
      const fs::path p = fs::absolute(s).parent_path();
      titles.push_back(p.filename().string());
    }
    std::vector<const char*> sp, tp;
    for (const auto& s : summaries) sp.push_back(s.c_str());
    for (const auto& t : titles) tp.push_back(t.c_str());
    const std::string script = path("plot.gp");
    check(lg_write_plot_script(sp.data(), tp.data(), sp.size(), script.c_str(),
                               path("score.png").c_str()));
    out_ << "wrote " << script << " (run: gnuplot " << script << ")\n";
    return kExitOk;
  }

  const Command& cmd_;
  std::ostream& out_;
  ConfigPtr config_;
  std::string dir_;
};

}  // namespace

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = {"train-expert", "record-demos", "imitate",
                                             "evaluate",     "plot",         "seed-sweep"};
  return v;
}

Command parse_args(int argc, const char* const* argv) {
  if (argc < 1) throw UsageError("empty argument vector");
  Command cmd;
  CLI::App app{"Adversarial imitation from observation with iLQR", "lqrgaifo"};
  app.set_help_flag("-h,--help", "Print this help message and exit");
  std::string verb;
  std::string config;
  std::string out;
  std::string controller;
  int count = 0;
  app.add_option("verb", verb, "One of: train-expert, record-demos, imitate, evaluate, plot, seed-sweep")
      ->required();
  auto* config_opt = app.add_option("-c,--config", config, "Config file (key = value lines)");
  app.add_option("--set", cmd.overrides, "Override a config entry: key=value (repeatable)")
      ->allow_extra_args(false);
  app.add_option("--seed", cmd.seeds, "Seed (repeatable); replaces the config seed list")
      ->allow_extra_args(false);
  auto* out_opt = app.add_option("-o,--out", out, "Output directory");
  auto* count_opt = app.add_option("--count", count, "Number of demos to record")
                        ->check(CLI::PositiveNumber);
  auto* ctrl_opt = app.add_option("--controller", controller, "Controller file");
  app.add_option("--demos", cmd.demos, "Demo file (repeatable)")->allow_extra_args(false);
  app.add_option("--input", cmd.inputs, "Summary CSV for plot (repeatable)")
      ->allow_extra_args(false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    cmd.help = true;
    cmd.help_text = app.help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (std::find(verbs().begin(), verbs().end(), verb) == verbs().end()) {
    throw UsageError("unknown verb '" + verb + "'");
  }
  for (const auto& o : cmd.overrides) {
    if (o.find('=') == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
  }
  cmd.verb = verb;
  if (*config_opt) cmd.config_path = config;
  if (*out_opt) cmd.out_dir = out;
  if (*count_opt) cmd.count = count;
  if (*ctrl_opt) cmd.controller = controller;
  return cmd;
}

int run(const Command& command, std::ostream& out, std::ostream& err) {
  if (command.help) {
    out << command.help_text;
    return kExitOk;
  }
  try {
    Session session(command, out);
    return session.dispatch();
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return exit_code(f.status);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(argc, argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun 'lqrgaifo --help' for usage\n";
    return kExitUsage;
  }
  return run(cmd, out, err);
}

}  // namespace lqrgaifo_cli
