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

#include "eepc/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eepc/errors.hpp"
#include "eepc/surrogate.hpp"

namespace eepc {

FeasibilitySystem build_feasibility_system(const NetworkModel& model) {
  if (model.num_blocks != 1) {
    throw DimensionError("feasibility system is defined for a single resource block");
  }
  const std::size_t kk = model.num_users;
  FeasibilitySystem sys;
  sys.coupling = linalg::Matrix(kk, kk);
  sys.base_power.assign(kk, 0.0);
  sys.required_sinr.assign(kk, 0.0);
  for (std::size_t k = 0; k < kk; ++k) {
    const double s_min = std::exp2(model.rate_target[k]) - 1.0;
    sys.required_sinr[k] = s_min;
    if (s_min == 0.0) continue;
    const double margin = model.direct(k, 0) - model.self(k, 0) * s_min;
    if (!(margin > 0.0)) {
      throw TargetExceedsMaxSinrError("feasibility: required SINR at or above the ceiling");
    }
    sys.base_power[k] = model.noise(k, 0) * s_min / margin;
    for (std::size_t j = 0; j < kk; ++j) {
      if (j == k) continue;
      sys.coupling(k, j) = model.cross(k, j, 0) * s_min / margin;
    }
  }
  return sys;
}

namespace {

SpectralRadiusResult power_iteration(const linalg::Matrix& a, double shift, double tol,
                                     int max_iterations) {
  const std::size_t n = a.rows();
  SpectralRadiusResult out;
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  int stable = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    std::vector<double> y = linalg::multiply(a, x);
    if (shift != 0.0) {
      for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
    }
    double norm1 = 0.0;
    for (double v : y) norm1 += v;  // entries stay nonnegative
    out.iterations = it;
    if (norm1 <= 0.0) {
      out.value = 0.0;
      out.converged = true;
      return out;
    }
    const double next = norm1;  // x is 1-normalized
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm1;
    if (std::fabs(next - estimate) <= tol * std::max(1.0, next)) {
      ++stable;
      if (stable >= 4) {
        out.value = next - shift;
        out.converged = true;
        return out;
      }
    } else {
      stable = 0;
    }
    estimate = next;
  }
  out.value = estimate - shift;
  out.converged = false;
  return out;
}

}  // namespace

SpectralRadiusResult spectral_radius(const linalg::Matrix& a, double tol, int max_iterations) {
  if (a.rows() != a.cols()) throw DimensionError("spectral_radius: matrix not square");
  if (a.rows() == 0) return {0.0, 0, true};
  const double bound = linalg::max_row_sum(a);
  if (bound == 0.0) return {0.0, 0, true};

  SpectralRadiusResult plain = power_iteration(a, 0.0, tol, max_iterations / 2);
  if (plain.converged) return plain;
  // Plain iteration can cycle on periodic matrices; a positive diagonal
  // shift makes the iteration aperiodic and moves the radius by the shift.
  SpectralRadiusResult shifted = power_iteration(a, 0.1 * bound, tol, max_iterations);
  shifted.iterations += plain.iterations;
  return shifted;
}

std::vector<double> min_power_vector(const linalg::Matrix& coupling,
                                     std::vector<double> base_power) {
  const SpectralRadiusResult rho = spectral_radius(coupling);
  if (!(rho.value < 1.0)) {
    throw InfeasibleError("min_power_vector: coupling spectral radius is not below one");
  }
  const std::size_t n = coupling.rows();
  linalg::Matrix lhs = linalg::Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) lhs(i, j) -= coupling(i, j);
  }
  std::vector<double> x = linalg::solve(std::move(lhs), std::move(base_power));
  for (double& v : x) v = std::max(v, 0.0);
  return x;
}

FeasibilityReport check_feasible_single_block(const NetworkModel& model) {
  FeasibilityReport report;
  FeasibilitySystem sys;
  try {
    sys = build_feasibility_system(model);
  } catch (const TargetExceedsMaxSinrError&) {
    report.feasible = false;
    report.spectral_radius = std::numeric_limits<double>::infinity();
    return report;
  }
  const SpectralRadiusResult rho = spectral_radius(sys.coupling);
  report.spectral_radius = rho.value;
  if (!(rho.value < 1.0)) {
    report.feasible = false;
    return report;
  }
  report.min_power = min_power_vector(sys.coupling, sys.base_power);
  report.budget_margin.resize(model.num_users);
  report.feasible = true;
  for (std::size_t k = 0; k < model.num_users; ++k) {
    report.budget_margin[k] = model.max_power[k] - report.min_power[k];
    if (report.budget_margin[k] < 0.0) report.feasible = false;
  }
  return report;
}

std::vector<bool> strategy_set_condition(const NetworkModel& model) {
  if (model.num_blocks != 1) {
    throw DimensionError("strategy_set_condition is defined for a single resource block");
  }
  std::vector<bool> ok(model.num_users, true);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    const double s_min = std::exp2(model.rate_target[k]) - 1.0;
    if (s_min == 0.0) continue;
    const double margin = model.direct(k, 0) - model.self(k, 0) * s_min;
    if (!(margin > 0.0)) {
      ok[k] = false;
      continue;
    }
    double worst = model.noise(k, 0);
    for (std::size_t j = 0; j < model.num_users; ++j) {
      if (j != k) worst += model.cross(k, j, 0) * model.max_power[j];
    }
    ok[k] = model.max_power[k] >= s_min * worst / margin;
  }
  return ok;
}

BlockFeasibilityReport check_feasible_multi_block(const NetworkModel& model,
                                                  const PowerAllocation& expansion) {
  SurrogateProblem prob;
  prob.model = &model;
  prob.kind = SurrogateObjective::kFeasibilitySlack;
  prob.bounds = log_bound_params_at(model, expansion);
  SurrogateSolution sol = maximize_surrogate(prob, expansion);
  BlockFeasibilityReport report;
  report.slack = sol.phase_one_slack;
  report.feasible = report.slack >= 0.0;
  report.witness = sol.power;
  return report;
}

BlockFeasibilityReport check_feasible_multi_block(const NetworkModel& model) {
  return check_feasible_multi_block(model,
                                    PowerAllocation::budget_fraction(model, 1.0));
}

}  // namespace eepc
