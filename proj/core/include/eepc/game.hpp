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
#include <string>
#include <vector>

#include "eepc/model.hpp"

// User-centric power control: every user maximizes its own energy efficiency
// under its power budget and rate target, treating the other users' powers
// as fixed. Best responses follow the closed-form price curves; the dynamics
// iterate them until a fixed point (the equilibrium) is reached. Each user
// only needs the SINR measured at its receiver: the equivalent channel gain
// is recovered from it, so the loop runs fully decentralized.

namespace eepc {

struct UserPrices {
  double ee_price = 0.0;      // price of the unconstrained EE maximizer
  double rate_price = 0.0;    // price meeting the rate target exactly (+inf when none)
  double budget_price = 0.0;  // price exhausting the power budget exactly
  double clipped_price = 0.0; // the price actually played
};

struct GameState {
  PowerAllocation power;
  std::vector<double> measured_sinr;  // [k*N + n]
  std::vector<UserPrices> prices;     // [k]
  int round = 0;
};

enum class UpdateSchedule {
  kSequential,    // users update one at a time within a round
  kSimultaneous,  // all users respond to the previous round's profile
};

struct GameOptions {
  UpdateSchedule schedule = UpdateSchedule::kSequential;
  double tolerance = 1e-6;  // on max |power change| / budget per round
  int max_rounds = 500;
  /// Verify the sufficient nonempty-strategy-set condition before running
  /// (single block only); violations throw EmptyStrategySetError.
  bool verify_condition = false;
};

struct GameRun {
  std::vector<GameState> trajectory;  // [0] is the start profile
  bool converged = false;
  int rounds = 0;

  const GameState& final_state() const { return trajectory.back(); }

  /// One row per (round, user, block): power, SINR, energy efficiency.
  void write_csv(std::ostream& os, const NetworkModel& model) const;
};

/// Per-link gains of user k given the other users' powers (row k ignored).
struct UserLink {
  std::vector<double> gain;     // equivalent channel gain per block
  std::vector<double> ceiling;  // SINR ceiling per block
};

UserLink user_link(const NetworkModel& model, const PowerAllocation& others, std::size_t k);

/// Minimum power meeting user k's rate target for fixed interference
/// (single block). Zero when the target is zero.
double min_power_single_block(const NetworkModel& model, const PowerAllocation& others,
                              std::size_t k);

/// Best response of user k for a single-block network: the unconstrained EE
/// maximizer clipped into [min power, budget].
/// Throws EmptyStrategySetError when no feasible power exists.
double best_response_single_block(const NetworkModel& model, const PowerAllocation& others,
                                  std::size_t k);

struct WaterLevel {
  double price = 0.0;
  std::vector<double> power;  // per block
};

/// Minimum-total-power allocation meeting user k's rate target: all blocks
/// share one price chosen so the rates sum to the target.
/// Throws InfeasibleError when the target exceeds the ceiling rate.
WaterLevel min_power_water_level(const NetworkModel& model, const PowerAllocation& others,
                                 std::size_t k);

/// Best response of user k across all blocks, via the clipped price
/// max(budget price, min(EE price, rate price)).
std::vector<double> best_response_multi_block(const NetworkModel& model,
                                              const PowerAllocation& others, std::size_t k);

/// Per-user prices behind the last best response (diagnostics).
UserPrices best_response_prices(const NetworkModel& model, const PowerAllocation& others,
                                std::size_t k);

/// Runs the best-response dynamics from `start` until the power profile
/// stops moving. Convergence is declared when every user's round-to-round
/// power change is below tolerance * budget.
GameRun run_best_response(const NetworkModel& model, const PowerAllocation& start,
                          const GameOptions& options = {});

struct StandardFunctionReport {
  bool nonnegative = true;
  bool monotone = true;
  bool scalable = true;
  int samples = 0;
  std::vector<std::string> violations;  // human-readable witnesses
};

/// Samples interference profiles and numerically checks that user k's best
/// response is nonnegative, monotone, and scalable.
StandardFunctionReport standard_function_probe(const NetworkModel& model, std::size_t k,
                                               int samples, std::uint64_t seed);

struct ContractionEstimate {
  double value = 0.0;  // heuristic sampled lower bound; < 1 suggests convergence
  int samples = 0;
};

/// Sampled estimate of the best-response contraction modulus for user k.
/// Heuristic: the supremum over gain profiles is approximated by sampling.
ContractionEstimate contraction_metric(const NetworkModel& model, std::size_t k, int samples,
                                       std::uint64_t seed);

}  // namespace eepc
