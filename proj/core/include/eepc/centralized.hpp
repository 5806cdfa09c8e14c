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

#include <iosfwd>
#include <vector>

#include "eepc/fractional.hpp"
#include "eepc/model.hpp"
#include "eepc/surrogate.hpp"

// Network-centric power control: sequential concave surrogates around the
// current iterate combined with (generalized) Dinkelbach solves of the
// resulting fractional problems. Each outer iteration can only improve the
// true objective, and the loop stops when the iterate movement
// ||q_i - q_{i-1}||^2 / ||q_i||^2 falls below the outer tolerance.

namespace eepc {

enum class CentralizedObjective {
  kGlobalEe,
  kMinWeightedEe,
  kSumRate,
  kMinRate,
};

std::string to_string(CentralizedObjective objective);

struct CentralizedOptions {
  double outer_tolerance = 1e-4;  // on the relative squared iterate step
  int max_outer_iterations = 60;
  double sinr_ref_floor = 1e-12;  // floor on surrogate reference SINRs
  double power_floor = 1e-20;     // watts
  double inner_tolerance = 1e-8;  // absolute Dinkelbach stop
  BarrierOptions barrier;
};

struct OuterIterate {
  PowerAllocation power;
  double objective = 0.0;  // true metric, not the surrogate
  std::vector<LogBoundParams> bounds;
  int dinkelbach_iterations = 0;
  int newton_iterations = 0;
  double inner_kkt_residual = 0.0;
};

struct CentralizedRun {
  CentralizedObjective objective_kind = CentralizedObjective::kGlobalEe;
  std::vector<OuterIterate> iterates;  // [0] is the start point
  Termination status = Termination::kIterationCap;
  double final_objective = 0.0;
  PowerAllocation final_power;
  int outer_iterations = 0;
  /// True when the objective trace never decreased beyond rounding slack.
  bool monotone_objective = true;

  /// One row per outer iteration: index, objective, inner statistics.
  void write_csv(std::ostream& os) const;
};

/// Maximizes the global energy efficiency from a feasible start.
/// Throws InfeasibleError when `start` violates the constraints.
CentralizedRun solve_gee(const NetworkModel& model, const PowerAllocation& start,
                         const CentralizedOptions& options = {});

/// Maximizes the minimum weighted per-user energy efficiency.
CentralizedRun solve_min_ee(const NetworkModel& model, const PowerAllocation& start,
                            const CentralizedOptions& options = {});

/// Same outer loop specialized to the sum rate (no fractional step needed).
CentralizedRun solve_sum_rate(const NetworkModel& model, const PowerAllocation& start,
                              const CentralizedOptions& options = {});

/// Same outer loop specialized to the minimum weighted rate.
CentralizedRun solve_min_rate(const NetworkModel& model, const PowerAllocation& start,
                              const CentralizedOptions& options = {});

/// Feasible start point: the exact minimum-power vector for single-block
/// models with rate targets, the max-slack witness for multi-block models
/// with targets, and a half-budget equal split otherwise.
/// Throws InfeasibleError when the model is (or cannot be proved) feasible.
PowerAllocation default_start(const NetworkModel& model);

/// First-order optimality residual of the true problem (objective gradient
/// against active constraint normals, scale-normalized) at `p`.
double centralized_kkt_residual(const NetworkModel& model, const PowerAllocation& p,
                                CentralizedObjective objective = CentralizedObjective::kGlobalEe);

/// Surrogate global energy efficiency at log-powers q (bit/joule).
double surrogate_gee(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                     std::span<const double> log_power);

/// Surrogate per-user energy efficiency at log-powers q (bit/joule).
double surrogate_user_ee(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                         std::span<const double> log_power, std::size_t k);

}  // namespace eepc
