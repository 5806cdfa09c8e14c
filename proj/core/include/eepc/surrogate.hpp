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

#include <span>
#include <vector>

#include "eepc/linalg.hpp"
#include "eepc/model.hpp"

// Solver for the inner problems of the sequential convex outer loops in
// q = log2(power) variables: a concave surrogate objective under the
// exponential-sum power caps and concave rate constraints. The method is a
// log-barrier interior scheme with damped Newton steps; nonsmooth max-min
// objectives are lifted to an epigraph variable.

namespace eepc {

/// Parameters of the logarithmic lower bound
/// slope * log2(s) + offset <= log2(1 + s), tight at the reference SINR.
struct LogBoundParams {
  double slope = 1.0;
  double offset = 0.0;
};

/// Bound parameters tight (in value and slope) at `sinr_ref` > 0.
LogBoundParams log_bound_params(double sinr_ref);

/// Bound parameters for every link at the SINRs achieved by `reference`,
/// floored at `sinr_floor` to keep the logarithms finite.
std::vector<LogBoundParams> log_bound_params_at(const NetworkModel& model,
                                                const PowerAllocation& reference,
                                                double sinr_floor = 1e-12);

/// Smooth concave function of the optimization vector. `eval` returns the
/// value and, when the out-parameters are non-null, overwrites them with the
/// gradient and Hessian (buffers are pre-sized by the caller).
class SmoothFn {
 public:
  virtual ~SmoothFn() = default;
  virtual double eval(std::span<const double> x, std::vector<double>* grad,
                      linalg::Matrix* hess) const = 0;
};

struct BarrierOptions {
  double objective_weight0 = 1.0;  // initial barrier weight on the objective
  double weight_growth = 10.0;
  double gap_tolerance = 1e-8;     // target on (#constraints / final weight)
  int max_newton_steps = 60;       // per barrier stage
  double armijo_slope = 0.3;
  double armijo_backtrack = 0.5;
};

struct BarrierResult {
  std::vector<double> x;
  double objective = 0.0;      // raw objective value at x
  double kkt_residual = 0.0;   // scaled stationarity + complementarity gap
  int newton_iterations = 0;
  bool converged = false;
};

/// Maximizes `objective` subject to h_i(x) >= 0 for every constraint and
/// x_c >= box_floor[c] (entries of -inf disable the bound). `start` must be
/// strictly feasible. `objective_scale` normalizes the reported residuals.
BarrierResult maximize_with_barrier(const SmoothFn& objective, double objective_scale,
                                    std::span<const SmoothFn* const> constraints,
                                    std::span<const double> box_floor, std::vector<double> start,
                                    const BarrierOptions& opts = {});

struct PhaseOneResult {
  std::vector<double> x;      // the q part only
  double slack = 0.0;         // optimal scaled minimum slack
  bool feasible = false;      // slack >= 0
  int newton_iterations = 0;
};

/// Maximizes the minimum scaled constraint slack min_i h_i(q)/scales[i]
/// starting from an arbitrary box-interior point.
PhaseOneResult maximize_min_slack(std::span<const SmoothFn* const> constraints,
                                  std::span<const double> scales,
                                  std::span<const double> box_floor, std::vector<double> start,
                                  const BarrierOptions& opts = {});

enum class SurrogateObjective {
  kGeeShifted,        // bandwidth * sum_k R~_k - price * (circuit + total power)
  kSumRate,           // bandwidth * sum_k R~_k
  kMinShiftedRatios,  // min_k w_k * (bandwidth * R~_k - price * (circuit_k + power_k))
  kMinRate,           // min_k w_k * bandwidth * R~_k
  kFeasibilitySlack,  // max-min scaled slack of the constraint set
};

struct SurrogateProblem {
  const NetworkModel* model = nullptr;
  std::vector<LogBoundParams> bounds;  // [k*N + n]
  SurrogateObjective kind = SurrogateObjective::kGeeShifted;
  double price = 0.0;
  std::vector<double> weights;          // per user; empty -> model weights
  bool exact_rate_constraints = false;  // single-block exact convex form
  double power_floor = 1e-20;           // watts; lower box bound on powers
  BarrierOptions barrier;
};

struct SurrogateSolution {
  PowerAllocation power;
  std::vector<double> log_power;  // q = log2(power)
  double objective = 0.0;
  double kkt_residual = 0.0;
  int newton_iterations = 0;
  bool converged = false;
  bool used_phase_one = false;
  double phase_one_slack = 0.0;
};

/// Solves the surrogate problem from `start` (interior points converge
/// fastest; boundary or infeasible starts trigger a phase-one solve).
/// Throws InfeasibleError when the constraint set is empty, and
/// TargetExceedsMaxSinrError when a single-block rate target is unreachable.
SurrogateSolution maximize_surrogate(const SurrogateProblem& problem,
                                     const PowerAllocation& start);

/// First-order optimality diagnostic at an arbitrary point: norm of the
/// projected gradient plus complementarity and feasibility violations, in
/// objective-scale-normalized units.
double surrogate_kkt_residual(const SurrogateProblem& problem,
                              std::span<const double> log_power);

/// The concave surrogate rate R~_k(q) in bit/s/Hz.
double surrogate_spectral_rate(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                               std::span<const double> log_power, std::size_t k);

/// Gradient of R~_k with respect to every q coordinate.
std::vector<double> surrogate_spectral_rate_gradient(const NetworkModel& model,
                                                     std::span<const LogBoundParams> bounds,
                                                     std::span<const double> log_power,
                                                     std::size_t k);

}  // namespace eepc
