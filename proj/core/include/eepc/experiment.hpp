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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eepc/centralized.hpp"
#include "eepc/config.hpp"
#include "eepc/game.hpp"
#include "eepc/scenario.hpp"

// Config-driven Monte-Carlo harness: sweep the power budget (and rate
// percentage) over a grid, run the selected algorithms on independently
// seeded scenario draws, and aggregate into CSV files plus a text summary.
// Outputs are deterministic in (config, master seed); wall-clock timings go
// to the summary only so CSV bytes never depend on machine speed.

namespace eepc {

enum class Algorithm {
  kCentralizedGee,
  kCentralizedMinEe,
  kGame,
  kSumRate,
  kMinRate,
  kMaxPower,  // full-budget baseline
};

std::string to_string(Algorithm a);
Algorithm algorithm_from_token(const std::string& token);  // throws ConfigError

enum class ScenarioKind { kMassiveMimo, kRelayOfdma, kSynthetic };

struct ExperimentConfig {
  ScenarioKind scenario_kind = ScenarioKind::kMassiveMimo;
  MassiveMimoScenario mimo;
  RelayOfdmaScenario relay;
  SyntheticScenario synthetic;

  std::vector<double> max_power_dbw_grid = {-38, -34, -30, -26, -22, -18, -14, -10};
  std::vector<double> rate_percentage_grid = {0.0};
  int trials = 200;
  std::vector<Algorithm> algorithms = {Algorithm::kCentralizedGee};
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";

  static ExperimentConfig from_keyvalues(const KeyValues& kv);  // throws ConfigError
  static ExperimentConfig from_file(const std::string& path);
};

/// Builds the scenario model for one grid point and trial seed.
NetworkModel make_trial_model(const ExperimentConfig& config, double max_power_dbw,
                              double rate_percentage, std::uint64_t seed);

struct AlgorithmOutcome {
  Algorithm algorithm = Algorithm::kCentralizedGee;
  bool solved = false;       // solver ran to a usable result
  bool qos_met = false;      // final point satisfies the (original) targets
  double gee = 0.0;          // bit/joule
  double min_ee = 0.0;       // bit/joule (weighted minimum)
  double min_rate = 0.0;     // bit/s/Hz, worst user
  int outer_iterations = 0;
  double wall_seconds = 0.0;
  std::string failure;       // set when solved == false
};

struct TrialResult {
  double max_power_dbw = 0.0;
  double rate_percentage = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool qos_feasible = false;  // feasibility of the rate-constrained problem
  bool relaxed = false;       // targets dropped for the solver runs
  std::vector<AlgorithmOutcome> outcomes;
};

/// Runs every selected algorithm on one scenario draw. Infeasible targets
/// are relaxed to zero before solving, mirroring the usual reporting policy;
/// the original feasibility verdict is kept in `qos_feasible`.
TrialResult run_trial(const ExperimentConfig& config, double max_power_dbw,
                      double rate_percentage, int trial_index);

struct SweepResult {
  std::vector<TrialResult> trials;
  int solver_failures = 0;

  struct Aggregate {
    double max_power_dbw = 0.0;
    double rate_percentage = 0.0;
    Algorithm algorithm = Algorithm::kCentralizedGee;
    int trials = 0;
    double feasibility_fraction = 0.0;
    double mean_gee = 0.0, std_gee = 0.0;
    double mean_min_ee = 0.0, std_min_ee = 0.0;
    double mean_min_rate = 0.0;
    double mean_outer_iterations = 0.0;
    double mean_wall_seconds = 0.0;  // summary only, not in CSVs
  };
  std::vector<Aggregate> aggregates;
};

/// Runs the full sweep in memory.
SweepResult run_sweep(const ExperimentConfig& config);

/// Runs the sweep and writes feasibility.csv, gee.csv, minee.csv,
/// iterations.csv, and summary.txt under `output_dir`.
SweepResult run_sweep_to_files(const ExperimentConfig& config, const std::string& output_dir);

void write_feasibility_csv(const SweepResult& result, std::ostream& os);
void write_gee_csv(const SweepResult& result, std::ostream& os);
void write_min_ee_csv(const SweepResult& result, std::ostream& os);
void write_iterations_csv(const SweepResult& result, std::ostream& os);
void write_summary(const SweepResult& result, const ExperimentConfig& config, std::ostream& os);

}  // namespace eepc
