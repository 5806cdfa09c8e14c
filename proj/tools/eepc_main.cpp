// Copyright 2026 The eepc Authors
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

// Command-line front end: feasibility tests, single solves, best-response
// runs, Monte-Carlo sweeps, and the invariant self-check battery.
//
// Exit codes: 0 success, 1 solver failures or failed checks, 2 config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eepc/centralized.hpp"
#include "eepc/errors.hpp"
#include "eepc/experiment.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/game.hpp"
#include "eepc/model_io.hpp"
#include "eepc/selfcheck.hpp"
#include "eepc/units.hpp"

namespace {

struct PointOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> pmax_dbw;
  std::optional<double> r_percent;
  std::string dump_model;
};

void add_point_options(CLI::App* cmd, PointOptions* opts) {
  cmd->add_option("--config", opts->config_path, "scenario/sweep configuration file")
      ->required();
  cmd->add_option("--seed", opts->seed, "override the master seed");
  cmd->add_option("--pmax-dbw", opts->pmax_dbw, "override the power budget (dBW)");
  cmd->add_option("--r-pct", opts->r_percent, "override the rate percentage");
  cmd->add_option("--dump-model", opts->dump_model, "write the generated model to a CSV file");
}

eepc::NetworkModel model_from_point(const PointOptions& opts, eepc::ExperimentConfig* cfg_out) {
  eepc::ExperimentConfig cfg = eepc::ExperimentConfig::from_file(opts.config_path);
  if (opts.seed) cfg.master_seed = *opts.seed;
  const double pmax = opts.pmax_dbw.value_or(cfg.max_power_dbw_grid.front());
  const double r = opts.r_percent.value_or(cfg.rate_percentage_grid.front());
  const std::uint64_t seed = eepc::derive_seed(cfg.master_seed, 0, 0);
  eepc::NetworkModel model = eepc::make_trial_model(cfg, pmax, r, seed);
  if (!opts.dump_model.empty()) {
    eepc::write_model_csv_file(model, opts.dump_model);
    std::cout << "model written to " << opts.dump_model << "\n";
  }
  if (cfg_out != nullptr) *cfg_out = cfg;
  return model;
}

int run_feas(const PointOptions& opts) {
  const eepc::NetworkModel model = model_from_point(opts, nullptr);
  bool any_target = false;
  for (double t : model.rate_target) any_target |= t > 0.0;
  std::cout << "users: " << model.num_users << ", blocks: " << model.num_blocks << "\n";
  if (!any_target) {
    std::cout << "feasible: yes (no rate targets)\n";
    return 0;
  }
  if (model.num_blocks == 1) {
    const eepc::FeasibilityReport report = eepc::check_feasible_single_block(model);
    std::cout << "test: exact single-block\n";
    std::cout << "coupling spectral radius: " << report.spectral_radius << "\n";
    std::cout << "feasible: " << (report.feasible ? "yes" : "no") << "\n";
    if (!report.min_power.empty()) {
      std::cout << "minimum power vector (W):";
      for (double p : report.min_power) std::cout << ' ' << p;
      std::cout << "\n";
    }
  } else {
    const eepc::BlockFeasibilityReport report = eepc::check_feasible_multi_block(model);
    std::cout << "test: sufficient convex multi-block\n";
    std::cout << "max-min scaled slack: " << report.slack << "\n";
    std::cout << "feasible: " << (report.feasible ? "yes (sufficient)" : "not proved") << "\n";
  }
  return 0;
}

int run_solve(const PointOptions& opts, const std::string& objective, const std::string& trace) {
  eepc::NetworkModel model = model_from_point(opts, nullptr);
  const eepc::Algorithm alg = eepc::algorithm_from_token(objective);

  bool relaxed = false;
  bool feasible = true;
  bool any_target = false;
  for (double t : model.rate_target) any_target |= t > 0.0;
  if (any_target) {
    feasible = model.num_blocks == 1 ? eepc::check_feasible_single_block(model).feasible
                                     : eepc::check_feasible_multi_block(model).feasible;
    if (!feasible) {
      std::fill(model.rate_target.begin(), model.rate_target.end(), 0.0);
      relaxed = true;
    }
  }

  const eepc::PowerAllocation start = eepc::default_start(model);
  eepc::CentralizedRun run;
  switch (alg) {
    case eepc::Algorithm::kCentralizedGee: run = eepc::solve_gee(model, start); break;
    case eepc::Algorithm::kCentralizedMinEe: run = eepc::solve_min_ee(model, start); break;
    case eepc::Algorithm::kSumRate: run = eepc::solve_sum_rate(model, start); break;
    case eepc::Algorithm::kMinRate: run = eepc::solve_min_rate(model, start); break;
    default:
      throw eepc::ConfigError("solve: objective must be gee, min-ee, sum-rate, or min-rate");
  }

  if (relaxed) std::cout << "note: rate targets infeasible, relaxed to zero\n";
  std::cout << "objective (" << eepc::to_string(run.objective_kind)
            << "): " << run.final_objective << "\n";
  std::cout << "outer iterations: " << run.outer_iterations << " ("
            << eepc::to_string(run.status) << ")\n";
  std::cout << "global EE (bit/J): " << eepc::gee(model, run.final_power) << "\n";
  std::cout << "powers (W):";
  for (double p : run.final_power.value) std::cout << ' ' << p;
  std::cout << "\n";
  if (!trace.empty()) {
    std::ofstream os(trace);
    run.write_csv(os);
    std::cout << "trace written to " << trace << "\n";
  }
  return run.status == eepc::Termination::kIterationCap ? 1 : 0;
}

int run_game(const PointOptions& opts, const std::string& schedule, const std::string& trace) {
  eepc::NetworkModel model = model_from_point(opts, nullptr);
  bool any_target = false;
  for (double t : model.rate_target) any_target |= t > 0.0;
  if (any_target) {
    const bool feasible = model.num_blocks == 1
                              ? eepc::check_feasible_single_block(model).feasible
                              : eepc::check_feasible_multi_block(model).feasible;
    if (!feasible) {
      std::fill(model.rate_target.begin(), model.rate_target.end(), 0.0);
      std::cout << "note: rate targets infeasible, relaxed to zero\n";
    }
  }
  eepc::GameOptions options;
  if (schedule == "simultaneous") {
    options.schedule = eepc::UpdateSchedule::kSimultaneous;
  } else if (schedule != "sequential") {
    throw eepc::ConfigError("game: schedule must be sequential or simultaneous");
  }
  const eepc::GameRun run = eepc::run_best_response(model, eepc::default_start(model), options);
  std::cout << "rounds: " << run.rounds << (run.converged ? " (converged)" : " (round cap)")
            << "\n";
  const eepc::PowerAllocation& final_power = run.final_state().power;
  std::cout << "global EE (bit/J): " << eepc::gee(model, final_power) << "\n";
  for (std::size_t k = 0; k < model.num_users; ++k) {
    std::cout << "user " << k << ": power " << final_power.user_total(k) << " W, EE "
              << eepc::user_ee(model, final_power, k) << " bit/J\n";
  }
  if (!trace.empty()) {
    std::ofstream os(trace);
    run.write_csv(os, model);
    std::cout << "trajectory written to " << trace << "\n";
  }
  return run.converged ? 0 : 1;
}

int run_sweep_cmd(const std::string& config_path, std::optional<std::uint64_t> seed,
                  const std::string& out_override, bool dry_run) {
  eepc::ExperimentConfig cfg = eepc::ExperimentConfig::from_file(config_path);
  if (seed) cfg.master_seed = *seed;
  if (!out_override.empty()) cfg.output_dir = out_override;

  if (dry_run) {
    std::cout << "planned sweep (" << cfg.max_power_dbw_grid.size() << " x "
              << cfg.rate_percentage_grid.size() << " grid, " << cfg.trials
              << " trials per point)\n";
    std::cout << "pmax_dbw:";
    for (double v : cfg.max_power_dbw_grid) std::cout << ' ' << v;
    std::cout << "\nr_percent:";
    for (double v : cfg.rate_percentage_grid) std::cout << ' ' << v;
    std::cout << "\nalgorithms:";
    for (eepc::Algorithm a : cfg.algorithms) std::cout << ' ' << eepc::to_string(a);
    std::cout << "\noutput: " << cfg.output_dir << "\n";
    return 0;
  }

  const eepc::SweepResult result = eepc::run_sweep_to_files(cfg, cfg.output_dir);
  std::cout << "trials: " << result.trials.size() << ", solver failures: "
            << result.solver_failures << "\n";
  std::cout << "outputs in " << cfg.output_dir << ": feasibility.csv gee.csv minee.csv "
            << "iterations.csv summary.txt\n";
  return result.solver_failures > 0 ? 1 : 0;
}

int run_validate(const std::string& config_path) {
  if (!config_path.empty()) {
    eepc::ExperimentConfig::from_file(config_path);  // throws ConfigError on schema problems
    std::cout << "config ok: " << config_path << "\n";
  }
  const std::vector<eepc::CheckResult> checks = eepc::run_self_checks();
  bool all_pass = true;
  for (const eepc::CheckResult& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
    all_pass &= c.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy-efficient power control for interference networks"};
  app.require_subcommand(1);

  PointOptions feas_opts;
  CLI::App* feas = app.add_subcommand("feas", "test feasibility of the rate targets");
  add_point_options(feas, &feas_opts);

  PointOptions solve_opts;
  std::string objective = "gee";
  std::string solve_trace;
  CLI::App* solve = app.add_subcommand("solve", "run a centralized solver on one scenario");
  add_point_options(solve, &solve_opts);
  solve->add_option("--objective", objective, "gee | min-ee | sum-rate | min-rate");
  solve->add_option("--trace", solve_trace, "write the iteration trace CSV here");

  PointOptions game_opts;
  std::string schedule = "sequential";
  std::string game_trace;
  CLI::App* game = app.add_subcommand("game", "run best-response dynamics on one scenario");
  add_point_options(game, &game_opts);
  game->add_option("--schedule", schedule, "sequential | simultaneous");
  game->add_option("--trace", game_trace, "write the trajectory CSV here");

  std::string sweep_config;
  std::optional<std::uint64_t> sweep_seed;
  std::string sweep_out;
  bool dry_run = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run a Monte-Carlo sweep from a config file");
  sweep->add_option("--config", sweep_config, "sweep configuration file")->required();
  sweep->add_option("--seed", sweep_seed, "override the master seed");
  sweep->add_option("--out", sweep_out, "override the output directory");
  sweep->add_flag("--dry-run", dry_run, "print the planned grid and exit");

  std::string validate_config;
  CLI::App* validate = app.add_subcommand("validate", "run the invariant self-checks");
  validate->add_option("--config", validate_config, "also validate this config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (feas->parsed()) return run_feas(feas_opts);
    if (solve->parsed()) return run_solve(solve_opts, objective, solve_trace);
    if (game->parsed()) return run_game(game_opts, schedule, game_trace);
    if (sweep->parsed()) return run_sweep_cmd(sweep_config, sweep_seed, sweep_out, dry_run);
    if (validate->parsed()) return run_validate(validate_config);
  } catch (const eepc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const eepc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
