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

#include <vector>

#include "eepc/linalg.hpp"
#include "eepc/model.hpp"

// Feasibility analysis of the rate-constrained power control problems. For a
// single resource block the test is exact: build the nonnegative coupling
// matrix of the minimum-SINR requirements, compare its spectral radius
// against one, and check the minimum power vector against the budgets. For
// multiple blocks only a sufficient convex test is available.

namespace eepc {

struct FeasibilitySystem {
  linalg::Matrix coupling;           // zero diagonal, nonnegative
  std::vector<double> base_power;    // watts; noise-driven per-user floor
  std::vector<double> required_sinr; // 2^rate_target - 1
};

/// Builds the single-block coupling system. Throws TargetExceedsMaxSinrError
/// when a user's required SINR is at or above its ceiling, and DimensionError
/// when the model has more than one block.
FeasibilitySystem build_feasibility_system(const NetworkModel& model);

struct SpectralRadiusResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Spectral radius of a square nonnegative matrix by power iteration, with a
/// diagonal-shift restart when the plain iteration cycles.
SpectralRadiusResult spectral_radius(const linalg::Matrix& a, double tol = 1e-10,
                                     int max_iterations = 10000);

/// Solves (I - coupling) x = base; the unique power vector meeting every
/// rate target with equality. Throws InfeasibleError when the spectral
/// radius is not below one.
std::vector<double> min_power_vector(const linalg::Matrix& coupling,
                                     std::vector<double> base_power);

struct FeasibilityReport {
  bool feasible = false;
  double spectral_radius = 0.0;
  std::vector<double> min_power;     // empty when no target is reachable
  std::vector<double> budget_margin; // max_power - min_power
};

/// Exact single-block feasibility test: spectral radius below one and the
/// minimum power vector within the budgets.
FeasibilityReport check_feasible_single_block(const NetworkModel& model);

/// Per-user sufficient condition for nonempty best-response strategy sets:
/// the budget covers the rate requirement even under worst-case interference.
std::vector<bool> strategy_set_condition(const NetworkModel& model);

struct BlockFeasibilityReport {
  bool feasible = false;
  double slack = 0.0;          // optimal scaled minimum slack
  PowerAllocation witness;     // max-slack point (meaningful when feasible)
};

/// Sufficient multi-block test: solves the convex max-slack program over the
/// power caps and the concave rate surrogates built at `expansion`.
BlockFeasibilityReport check_feasible_multi_block(const NetworkModel& model,
                                                  const PowerAllocation& expansion);

/// Same test expanded at the equal power split max_power/(num_blocks) point.
BlockFeasibilityReport check_feasible_multi_block(const NetworkModel& model);

}  // namespace eepc
