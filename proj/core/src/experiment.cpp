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

#include "eepc/experiment.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "eepc/errors.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/units.hpp"

namespace eepc {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kCentralizedGee: return "centralized-gee";
    case Algorithm::kCentralizedMinEe: return "centralized-min-ee";
    case Algorithm::kGame: return "game";
    case Algorithm::kSumRate: return "sum-rate";
    case Algorithm::kMinRate: return "min-rate";
    case Algorithm::kMaxPower: return "max-power";
  }
  return "unknown";
}

Algorithm algorithm_from_token(const std::string& token) {
  if (token == "alg1-gee" || token == "alg3-gee" || token == "gee" || token == "centralized-gee") {
    return Algorithm::kCentralizedGee;
  }
  if (token == "alg1-minee" || token == "alg3-minee" || token == "min-ee" ||
      token == "centralized-min-ee" || token == "minee") {
    return Algorithm::kCentralizedMinEe;
  }
  if (token == "alg2" || token == "alg4" || token == "game") return Algorithm::kGame;
  if (token == "sum-rate" || token == "sumrate") return Algorithm::kSumRate;
  if (token == "min-rate" || token == "minrate") return Algorithm::kMinRate;
  if (token == "max-power" || token == "maxpower" || token == "baseline") {
    return Algorithm::kMaxPower;
  }
  throw ConfigError("unknown algorithm token '" + token + "'");
}

namespace {

ScenarioKind scenario_from_token(const std::string& token) {
  if (token == "massive-mimo" || token == "mimo") return ScenarioKind::kMassiveMimo;
  if (token == "relay-ofdma" || token == "relay") return ScenarioKind::kRelayOfdma;
  if (token == "synthetic") return ScenarioKind::kSynthetic;
  throw ConfigError("unknown scenario '" + token + "'");
}

PathLossModel path_loss_from(const KeyValues& kv) {
  PathLossModel pl;
  pl.exponent = kv.get_double("pathloss.exponent", pl.exponent);
  pl.reference_db = kv.get_double("pathloss.reference_db", pl.reference_db);
  return pl;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_keyvalues(const KeyValues& kv) {
  ExperimentConfig cfg;
  cfg.scenario_kind = scenario_from_token(kv.get_string("scenario", "massive-mimo"));

  const PathLossModel pl = path_loss_from(kv);
  cfg.mimo.path_loss = pl;
  cfg.relay.path_loss = pl;

  cfg.mimo.num_users = static_cast<std::size_t>(kv.get_int("mimo.users", 5));
  cfg.mimo.num_antennas = static_cast<std::size_t>(kv.get_int("mimo.antennas", 50));
  cfg.mimo.drop_radius_m = kv.get_double("mimo.drop_radius_m", cfg.mimo.drop_radius_m);
  cfg.mimo.min_distance_m = kv.get_double("mimo.min_distance_m", cfg.mimo.min_distance_m);
  cfg.mimo.bs_error_magnitude = kv.get_double("mimo.bs_error", cfg.mimo.bs_error_magnitude);
  cfg.mimo.pilot_parameter = kv.get_double("mimo.tau", cfg.mimo.pilot_parameter);
  cfg.mimo.bandwidth_hz = kv.get_double("mimo.bandwidth_hz", cfg.mimo.bandwidth_hz);
  cfg.mimo.noise_figure_db = kv.get_double("mimo.noise_figure_db", cfg.mimo.noise_figure_db);
  cfg.mimo.noise_density_dbm_hz =
      kv.get_double("mimo.noise_density_dbm_hz", cfg.mimo.noise_density_dbm_hz);
  cfg.mimo.circuit_power_dbm = kv.get_double("mimo.circuit_power_dbm", cfg.mimo.circuit_power_dbm);
  const std::string csi = kv.get_string("mimo.csi", "perfect");
  if (csi == "perfect") {
    cfg.mimo.csi_mode = MassiveMimoScenario::CsiMode::kPerfectCsiBsImpairments;
  } else if (csi == "estimated") {
    cfg.mimo.csi_mode = MassiveMimoScenario::CsiMode::kEstimatedCsi;
  } else {
    kv.fail("mimo.csi", "expected 'perfect' or 'estimated'");
  }

  cfg.relay.num_cells = static_cast<std::size_t>(kv.get_int("relay.cells", 3));
  cfg.relay.num_users = static_cast<std::size_t>(kv.get_int("relay.users", 3));
  cfg.relay.num_antennas = static_cast<std::size_t>(kv.get_int("relay.antennas", 3));
  cfg.relay.num_subcarriers = static_cast<std::size_t>(kv.get_int("relay.subcarriers", 16));
  cfg.relay.relay_power_w = kv.get_double("relay.relay_power_w", cfg.relay.relay_power_w);
  cfg.relay.user_relay_min_m = kv.get_double("relay.user_relay_min_m", cfg.relay.user_relay_min_m);
  cfg.relay.user_relay_max_m = kv.get_double("relay.user_relay_max_m", cfg.relay.user_relay_max_m);
  cfg.relay.relay_bs_distance_m =
      kv.get_double("relay.relay_bs_distance_m", cfg.relay.relay_bs_distance_m);
  cfg.relay.bandwidth_hz = kv.get_double("relay.bandwidth_hz", cfg.relay.bandwidth_hz);
  cfg.relay.noise_figure_db = kv.get_double("relay.noise_figure_db", cfg.relay.noise_figure_db);
  cfg.relay.noise_density_dbm_hz =
      kv.get_double("relay.noise_density_dbm_hz", cfg.relay.noise_density_dbm_hz);
  cfg.relay.circuit_power_dbm =
      kv.get_double("relay.circuit_power_dbm", cfg.relay.circuit_power_dbm);

  cfg.synthetic.num_users = static_cast<std::size_t>(kv.get_int("synthetic.users", 2));
  cfg.synthetic.num_blocks = static_cast<std::size_t>(kv.get_int("synthetic.blocks", 1));
  cfg.synthetic.rate_target_max =
      kv.get_double("synthetic.rate_target_max", cfg.synthetic.rate_target_max);

  cfg.max_power_dbw_grid = kv.get_grid("sweep.pmax_dbw", cfg.max_power_dbw_grid);
  cfg.rate_percentage_grid = kv.get_grid("sweep.r_percent", cfg.rate_percentage_grid);
  cfg.trials = static_cast<int>(kv.get_int("sweep.trials", cfg.trials));
  if (cfg.trials < 1) kv.fail("sweep.trials", "at least one trial required");
  if (cfg.max_power_dbw_grid.empty()) kv.fail("sweep.pmax_dbw", "empty grid");

  if (kv.has("sweep.algorithms")) {
    cfg.algorithms.clear();
    for (const std::string& token : kv.get_list("sweep.algorithms")) {
      cfg.algorithms.push_back(algorithm_from_token(token));
    }
  }
  if (cfg.algorithms.empty()) {
    throw ConfigError(kv.source() + ": sweep.algorithms resolves to an empty list");
  }
  cfg.master_seed = kv.get_seed("seed", cfg.master_seed);
  cfg.output_dir = kv.get_string("out", cfg.output_dir);

  const std::vector<std::string> unused = kv.unused_keys();
  if (!unused.empty()) {
    std::string joined;
    for (const std::string& key : unused) joined += (joined.empty() ? "" : ", ") + key;
    throw ConfigError(kv.source() + ": unknown keys: " + joined);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_keyvalues(parse_key_values_file(path));
}

NetworkModel make_trial_model(const ExperimentConfig& config, double max_power_dbw,
                              double rate_percentage, std::uint64_t seed) {
  switch (config.scenario_kind) {
    case ScenarioKind::kMassiveMimo: {
      MassiveMimoScenario sc = config.mimo;
      sc.max_power_dbw = max_power_dbw;
      sc.rate_percentage = rate_percentage;
      sc.seed = seed;
      return generate(sc);
    }
    case ScenarioKind::kRelayOfdma: {
      RelayOfdmaScenario sc = config.relay;
      sc.max_power_dbw = max_power_dbw;
      sc.rate_percentage = rate_percentage;
      sc.seed = seed;
      return generate(sc);
    }
    case ScenarioKind::kSynthetic: {
      SyntheticScenario sc = config.synthetic;
      sc.seed = seed;
      NetworkModel m = generate(sc);
      for (double& p : m.max_power) p = dbw_to_watts(max_power_dbw);
      if (rate_percentage > 0.0) set_rate_targets_from_percentage(m, rate_percentage);
      return m;
    }
  }
  throw ConfigError("unknown scenario kind");
}

namespace {

std::uint64_t point_stream(double max_power_dbw, double rate_percentage) {
  const auto a = std::bit_cast<std::uint64_t>(max_power_dbw);
  const auto b = std::bit_cast<std::uint64_t>(rate_percentage);
  return a ^ (b * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
}

struct Metrics {
  double gee = 0.0;
  double min_ee = 0.0;
  double min_rate = 0.0;
};

Metrics metrics_at(const NetworkModel& model, const PowerAllocation& p) {
  Metrics out;
  out.gee = gee(model, p);
  out.min_ee = min_weighted_ee(model, p);
  out.min_rate = kInfinity;
  for (std::size_t k = 0; k < model.num_users; ++k) {
    out.min_rate = std::min(out.min_rate, user_spectral_rate(model, p, k));
  }
  return out;
}

bool model_is_feasible(const NetworkModel& model) {
  bool any_target = false;
  for (double t : model.rate_target) any_target |= t > 0.0;
  if (!any_target) return true;
  if (model.num_blocks == 1) return check_feasible_single_block(model).feasible;
  return check_feasible_multi_block(model).feasible;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, double max_power_dbw,
                      double rate_percentage, int trial_index) {
  TrialResult trial;
  trial.max_power_dbw = max_power_dbw;
  trial.rate_percentage = rate_percentage;
  trial.trial = trial_index;
  trial.seed = derive_seed(config.master_seed, point_stream(max_power_dbw, rate_percentage),
                           static_cast<std::uint64_t>(trial_index));

  const NetworkModel model = make_trial_model(config, max_power_dbw, rate_percentage, trial.seed);
  trial.qos_feasible = model_is_feasible(model);

  // Usual reporting policy: when the constrained problem is infeasible, run
  // the algorithms with the targets relaxed to zero.
  NetworkModel work = model;
  if (!trial.qos_feasible) {
    std::fill(work.rate_target.begin(), work.rate_target.end(), 0.0);
    trial.relaxed = true;
  }

  for (Algorithm alg : config.algorithms) {
    AlgorithmOutcome outcome;
    outcome.algorithm = alg;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      PowerAllocation final_power;
      switch (alg) {
        case Algorithm::kCentralizedGee:
        case Algorithm::kCentralizedMinEe:
        case Algorithm::kSumRate:
        case Algorithm::kMinRate: {
          const PowerAllocation start = default_start(work);
          CentralizedRun run;
          if (alg == Algorithm::kCentralizedGee) {
            run = solve_gee(work, start);
          } else if (alg == Algorithm::kCentralizedMinEe) {
            run = solve_min_ee(work, start);
          } else if (alg == Algorithm::kSumRate) {
            run = solve_sum_rate(work, start);
          } else {
            run = solve_min_rate(work, start);
          }
          final_power = run.final_power;
          outcome.outer_iterations = run.outer_iterations;
          outcome.solved = true;
          break;
        }
        case Algorithm::kGame: {
          const PowerAllocation start = default_start(work);
          const GameRun run = run_best_response(work, start);
          final_power = run.final_state().power;
          outcome.outer_iterations = run.rounds;
          outcome.solved = run.converged;
          if (!run.converged) outcome.failure = "best-response dynamics hit the round cap";
          break;
        }
        case Algorithm::kMaxPower: {
          final_power = PowerAllocation::budget_fraction(work, 1.0);
          outcome.solved = true;
          break;
        }
      }
      const Metrics metrics = metrics_at(model, final_power);
      outcome.gee = metrics.gee;
      outcome.min_ee = metrics.min_ee;
      outcome.min_rate = metrics.min_rate;
      outcome.qos_met = is_feasible_point(model, final_power, 1e-6).feasible;
    } catch (const Error& e) {
      outcome.solved = false;
      outcome.failure = e.what();
    }
    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trial.outcomes.push_back(std::move(outcome));
  }
  return trial;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  SweepResult result;
  for (double pmax : config.max_power_dbw_grid) {
    for (double r : config.rate_percentage_grid) {
      for (int t = 0; t < config.trials; ++t) {
        result.trials.push_back(run_trial(config, pmax, r, t));
        for (const AlgorithmOutcome& o : result.trials.back().outcomes) {
          if (!o.solved) ++result.solver_failures;
        }
      }
    }
  }

  // Aggregate per (grid point, algorithm).
  for (double pmax : config.max_power_dbw_grid) {
    for (double r : config.rate_percentage_grid) {
      int point_trials = 0;
      int feasible = 0;
      for (const TrialResult& trial : result.trials) {
        if (trial.max_power_dbw != pmax || trial.rate_percentage != r) continue;
        ++point_trials;
        if (trial.qos_feasible) ++feasible;
      }
      for (Algorithm alg : config.algorithms) {
        SweepResult::Aggregate agg;
        agg.max_power_dbw = pmax;
        agg.rate_percentage = r;
        agg.algorithm = alg;
        agg.feasibility_fraction =
            point_trials == 0 ? 0.0 : static_cast<double>(feasible) / point_trials;
        double sum_gee = 0.0, sum_gee2 = 0.0;
        double sum_minee = 0.0, sum_minee2 = 0.0;
        double sum_rate = 0.0, sum_iters = 0.0, sum_wall = 0.0;
        int solved = 0;
        for (const TrialResult& trial : result.trials) {
          if (trial.max_power_dbw != pmax || trial.rate_percentage != r) continue;
          for (const AlgorithmOutcome& o : trial.outcomes) {
            if (o.algorithm != alg || !o.solved) continue;
            ++solved;
            sum_gee += o.gee;
            sum_gee2 += o.gee * o.gee;
            sum_minee += o.min_ee;
            sum_minee2 += o.min_ee * o.min_ee;
            sum_rate += o.min_rate;
            sum_iters += o.outer_iterations;
            sum_wall += o.wall_seconds;
          }
        }
        agg.trials = solved;
        if (solved > 0) {
          agg.mean_gee = sum_gee / solved;
          agg.std_gee = std::sqrt(std::max(0.0, sum_gee2 / solved - agg.mean_gee * agg.mean_gee));
          agg.mean_min_ee = sum_minee / solved;
          agg.std_min_ee =
              std::sqrt(std::max(0.0, sum_minee2 / solved - agg.mean_min_ee * agg.mean_min_ee));
          agg.mean_min_rate = sum_rate / solved;
          agg.mean_outer_iterations = sum_iters / solved;
          agg.mean_wall_seconds = sum_wall / solved;
        }
        result.aggregates.push_back(agg);
      }
    }
  }
  return result;
}

namespace {

std::ostream& csv_number(std::ostream& os, double v) {
  os << std::setprecision(12) << v;
  return os;
}

}  // namespace

void write_feasibility_csv(const SweepResult& result, std::ostream& os) {
  os << "max_power_dbw,rate_percent,trials,feasible_fraction\n";
  // One row per grid point; aggregates repeat the fraction per algorithm.
  std::string last_key;
  for (const auto& agg : result.aggregates) {
    std::ostringstream key;
    key << agg.max_power_dbw << '|' << agg.rate_percentage;
    if (key.str() == last_key) continue;
    last_key = key.str();
    int total = 0;
    for (const auto& trial : result.trials) {
      if (trial.max_power_dbw == agg.max_power_dbw &&
          trial.rate_percentage == agg.rate_percentage) {
        ++total;
      }
    }
    csv_number(os, agg.max_power_dbw) << ',';
    csv_number(os, agg.rate_percentage) << ',' << total << ',';
    csv_number(os, agg.feasibility_fraction) << '\n';
  }
}

void write_gee_csv(const SweepResult& result, std::ostream& os) {
  os << "max_power_dbw,rate_percent,algorithm,trials_solved,mean_gee_bit_per_joule,"
        "std_gee_bit_per_joule\n";
  for (const auto& agg : result.aggregates) {
    csv_number(os, agg.max_power_dbw) << ',';
    csv_number(os, agg.rate_percentage) << ',' << to_string(agg.algorithm) << ',' << agg.trials
                                        << ',';
    csv_number(os, agg.mean_gee) << ',';
    csv_number(os, agg.std_gee) << '\n';
  }
}

void write_min_ee_csv(const SweepResult& result, std::ostream& os) {
  os << "max_power_dbw,rate_percent,algorithm,trials_solved,mean_min_ee_bit_per_joule,"
        "std_min_ee_bit_per_joule,mean_min_rate_bit_per_s_per_hz\n";
  for (const auto& agg : result.aggregates) {
    csv_number(os, agg.max_power_dbw) << ',';
    csv_number(os, agg.rate_percentage) << ',' << to_string(agg.algorithm) << ',' << agg.trials
                                        << ',';
    csv_number(os, agg.mean_min_ee) << ',';
    csv_number(os, agg.std_min_ee) << ',';
    csv_number(os, agg.mean_min_rate) << '\n';
  }
}

void write_iterations_csv(const SweepResult& result, std::ostream& os) {
  os << "max_power_dbw,rate_percent,algorithm,trials_solved,mean_outer_iterations\n";
  for (const auto& agg : result.aggregates) {
    csv_number(os, agg.max_power_dbw) << ',';
    csv_number(os, agg.rate_percentage) << ',' << to_string(agg.algorithm) << ',' << agg.trials
                                        << ',';
    csv_number(os, agg.mean_outer_iterations) << '\n';
  }
}

void write_summary(const SweepResult& result, const ExperimentConfig& config, std::ostream& os) {
  os << "sweep summary\n";
  os << "=============\n";
  os << "scenario: "
     << (config.scenario_kind == ScenarioKind::kMassiveMimo
             ? "massive-mimo"
             : config.scenario_kind == ScenarioKind::kRelayOfdma ? "relay-ofdma" : "synthetic")
     << ", trials/point: " << config.trials << ", master seed: " << config.master_seed << "\n";
  os << "solver failures: " << result.solver_failures << "\n\n";
  os << std::left << std::setw(12) << "pmax_dbw" << std::setw(10) << "r_pct" << std::setw(22)
     << "algorithm" << std::setw(10) << "solved" << std::setw(16) << "mean_gee" << std::setw(16)
     << "mean_min_ee" << std::setw(14) << "mean_iters" << std::setw(14) << "mean_wall_s" << "\n";
  for (const auto& agg : result.aggregates) {
    os << std::left << std::setw(12) << agg.max_power_dbw << std::setw(10) << agg.rate_percentage
       << std::setw(22) << to_string(agg.algorithm) << std::setw(10) << agg.trials << std::setw(16)
       << std::setprecision(6) << agg.mean_gee << std::setw(16) << agg.mean_min_ee << std::setw(14)
       << agg.mean_outer_iterations << std::setw(14) << agg.mean_wall_seconds << "\n";
  }
}

SweepResult run_sweep_to_files(const ExperimentConfig& config, const std::string& output_dir) {
  SweepResult result = run_sweep(config);
  std::filesystem::create_directories(output_dir);
  const std::filesystem::path dir(output_dir);
  {
    std::ofstream os(dir / "feasibility.csv");
    write_feasibility_csv(result, os);
  }
  {
    std::ofstream os(dir / "gee.csv");
    write_gee_csv(result, os);
  }
  {
    std::ofstream os(dir / "minee.csv");
    write_min_ee_csv(result, os);
  }
  {
    std::ofstream os(dir / "iterations.csv");
    write_iterations_csv(result, os);
  }
  {
    std::ofstream os(dir / "summary.txt");
    write_summary(result, config, os);
  }
  return result;
}

}  // namespace eepc
