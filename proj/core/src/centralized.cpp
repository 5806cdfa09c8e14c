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

#include "eepc/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "eepc/errors.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/linalg.hpp"

namespace eepc {

std::string to_string(CentralizedObjective objective) {
  switch (objective) {
    case CentralizedObjective::kGlobalEe: return "gee";
    case CentralizedObjective::kMinWeightedEe: return "min-ee";
    case CentralizedObjective::kSumRate: return "sum-rate";
    case CentralizedObjective::kMinRate: return "min-rate";
  }
  return "unknown";
}

namespace {

double true_metric(const NetworkModel& m, const PowerAllocation& p, CentralizedObjective kind) {
  switch (kind) {
    case CentralizedObjective::kGlobalEe:
      return gee(m, p);
    case CentralizedObjective::kMinWeightedEe:
      return min_weighted_ee(m, p);
    case CentralizedObjective::kSumRate: {
      double total = 0.0;
      for (std::size_t k = 0; k < m.num_users; ++k) total += user_rate(m, p, k);
      return total;
    }
    case CentralizedObjective::kMinRate: {
      double worst = kInfinity;
      for (std::size_t k = 0; k < m.num_users; ++k) {
        worst = std::min(worst, m.weight[k] * user_rate(m, p, k));
      }
      return worst;
    }
  }
  return 0.0;
}

std::vector<double> log_power_of(const PowerAllocation& p, double power_floor) {
  std::vector<double> q(p.value.size());
  const double q_floor = std::log2(power_floor);
  for (std::size_t c = 0; c < q.size(); ++c) {
    q[c] = p.value[c] > 0.0 ? std::max(std::log2(p.value[c]), q_floor + 0.5) : q_floor + 1.0;
  }
  return q;
}

PowerAllocation power_of_log(const NetworkModel& m, std::span<const double> q) {
  PowerAllocation p = PowerAllocation::zeros(m.num_users, m.num_blocks);
  for (std::size_t c = 0; c < p.value.size(); ++c) p.value[c] = std::exp2(q[c]);
  return p;
}

struct InnerStats {
  int dinkelbach_iterations = 0;
  int newton_iterations = 0;
  double kkt_residual = 0.0;
};

// One outer step: rebuild the fractional surrogate at the expansion point and
// solve it. Returns the new log-power vector.
std::vector<double> solve_inner(const NetworkModel& m, CentralizedObjective kind,
                                const std::vector<LogBoundParams>& bounds,
                                const std::vector<double>& q_prev,
                                const CentralizedOptions& options, InnerStats* stats) {
  SurrogateProblem prob;
  prob.model = &m;
  prob.bounds = bounds;
  prob.exact_rate_constraints = m.num_blocks == 1;
  prob.power_floor = options.power_floor;
  prob.barrier = options.barrier;

  const double circuit_total = m.total_circuit_power();

  auto total_power = [&m](std::span<const double> q) {
    double total = 0.0;
    for (double v : q) total += std::exp2(v);
    (void)m;
    return total;
  };
  auto surrogate_sum_rate = [&m, &bounds](std::span<const double> q) {
    double total = 0.0;
    for (std::size_t k = 0; k < m.num_users; ++k) {
      total += surrogate_spectral_rate(m, bounds, q, k);
    }
    return m.bandwidth_hz * total;
  };

  switch (kind) {
    case CentralizedObjective::kGlobalEe: {
      FractionalProblem fp;
      fp.numerator = surrogate_sum_rate;
      fp.denominator = [&](std::span<const double> q) { return circuit_total + total_power(q); };
      fp.tolerance = options.inner_tolerance;
      fp.maximize_shifted = [&](double price, const std::vector<double>& warm) {
        SurrogateProblem shifted = prob;
        shifted.kind = SurrogateObjective::kGeeShifted;
        shifted.price = price;
        SurrogateSolution sol = maximize_surrogate(shifted, power_of_log(m, warm));
        stats->newton_iterations += sol.newton_iterations;
        stats->kkt_residual = sol.kkt_residual;
        return sol.log_power;
      };
      const double price0 = fp.numerator(q_prev) / fp.denominator(q_prev);
      FractionalResult res = dinkelbach(fp, q_prev, price0);
      stats->dinkelbach_iterations = static_cast<int>(res.trace.size());
      return res.x;
    }
    case CentralizedObjective::kMinWeightedEe: {
      MultiRatioProblem mp;
      mp.tolerance = options.inner_tolerance;
      for (std::size_t k = 0; k < m.num_users; ++k) {
        mp.numerators.push_back([&m, &bounds, k](std::span<const double> q) {
          return m.weight[k] * m.bandwidth_hz * surrogate_spectral_rate(m, bounds, q, k);
        });
        mp.denominators.push_back([&m, k](std::span<const double> q) {
          double spent = m.circuit_power[k];
          for (std::size_t n = 0; n < m.num_blocks; ++n) {
            spent += std::exp2(q[k * m.num_blocks + n]);
          }
          return spent;
        });
      }
      mp.maximize_min_shifted = [&](double price, const std::vector<double>& warm) {
        SurrogateProblem shifted = prob;
        shifted.kind = SurrogateObjective::kMinShiftedRatios;
        shifted.price = price;
        SurrogateSolution sol = maximize_surrogate(shifted, power_of_log(m, warm));
        stats->newton_iterations += sol.newton_iterations;
        stats->kkt_residual = sol.kkt_residual;
        return sol.log_power;
      };
      double price0 = kInfinity;
      for (std::size_t k = 0; k < m.num_users; ++k) {
        price0 = std::min(price0, mp.numerators[k](q_prev) / mp.denominators[k](q_prev));
      }
      FractionalResult res = generalized_dinkelbach(mp, q_prev, price0);
      stats->dinkelbach_iterations = static_cast<int>(res.trace.size());
      return res.x;
    }
    case CentralizedObjective::kSumRate:
    case CentralizedObjective::kMinRate: {
      SurrogateProblem single = prob;
      single.kind = kind == CentralizedObjective::kSumRate ? SurrogateObjective::kSumRate
                                                           : SurrogateObjective::kMinRate;
      SurrogateSolution sol = maximize_surrogate(single, power_of_log(m, q_prev));
      stats->dinkelbach_iterations = 1;
      stats->newton_iterations = sol.newton_iterations;
      stats->kkt_residual = sol.kkt_residual;
      return sol.log_power;
    }
  }
  throw SolverError("solve_inner: unknown objective");
}

CentralizedRun solve_impl(const NetworkModel& m, const PowerAllocation& start,
                          CentralizedObjective kind, const CentralizedOptions& options) {
  m.validate();
  const FeasibilityCheck fc = is_feasible_point(m, start, 1e-6);
  if (!fc.feasible) throw InfeasibleError("centralized solve: start point is infeasible");

  CentralizedRun run;
  run.objective_kind = kind;

  std::vector<double> q_prev = log_power_of(start, options.power_floor);
  PowerAllocation p_prev = power_of_log(m, q_prev);
  double obj_prev = true_metric(m, p_prev, kind);
  run.iterates.push_back({p_prev, obj_prev, {}, 0, 0, 0.0});

  for (int outer = 1; outer <= options.max_outer_iterations; ++outer) {
    std::vector<LogBoundParams> bounds = log_bound_params_at(m, p_prev, options.sinr_ref_floor);

    InnerStats stats;
    std::vector<double> q_new = solve_inner(m, kind, bounds, q_prev, options, &stats);
    PowerAllocation p_new = power_of_log(m, q_new);
    const double obj_new = true_metric(m, p_new, kind);

    const double slack = 1e-9 * std::max(1.0, std::fabs(obj_prev));
    if (obj_new < obj_prev - slack) run.monotone_objective = false;
    if (obj_new < obj_prev) {
      // No provable progress left at the inner accuracy; keep the best point.
      run.status = Termination::kStalled;
      break;
    }

    run.iterates.push_back({p_new, obj_new, std::move(bounds), stats.dinkelbach_iterations,
                            stats.newton_iterations, stats.kkt_residual});

    double step = 0.0;
    double norm = 0.0;
    for (std::size_t c = 0; c < q_new.size(); ++c) {
      step += (q_new[c] - q_prev[c]) * (q_new[c] - q_prev[c]);
      norm += q_new[c] * q_new[c];
    }
    q_prev = std::move(q_new);
    p_prev = std::move(p_new);
    obj_prev = obj_new;

    if (step <= options.outer_tolerance * std::max(norm, 1e-300)) {
      run.status = Termination::kConverged;
      break;
    }
  }

  run.outer_iterations = static_cast<int>(run.iterates.size()) - 1;
  run.final_power = p_prev;
  run.final_objective = obj_prev;
  return run;
}

}  // namespace

void CentralizedRun::write_csv(std::ostream& os) const {
  os << "iteration,objective,dinkelbach_iterations,newton_iterations,inner_kkt_residual\n";
  for (std::size_t i = 0; i < iterates.size(); ++i) {
    const OuterIterate& it = iterates[i];
    os << i << ',' << it.objective << ',' << it.dinkelbach_iterations << ','
       << it.newton_iterations << ',' << it.inner_kkt_residual << '\n';
  }
}

CentralizedRun solve_gee(const NetworkModel& model, const PowerAllocation& start,
                         const CentralizedOptions& options) {
  return solve_impl(model, start, CentralizedObjective::kGlobalEe, options);
}

CentralizedRun solve_min_ee(const NetworkModel& model, const PowerAllocation& start,
                            const CentralizedOptions& options) {
  return solve_impl(model, start, CentralizedObjective::kMinWeightedEe, options);
}

CentralizedRun solve_sum_rate(const NetworkModel& model, const PowerAllocation& start,
                              const CentralizedOptions& options) {
  return solve_impl(model, start, CentralizedObjective::kSumRate, options);
}

CentralizedRun solve_min_rate(const NetworkModel& model, const PowerAllocation& start,
                              const CentralizedOptions& options) {
  return solve_impl(model, start, CentralizedObjective::kMinRate, options);
}

PowerAllocation default_start(const NetworkModel& model) {
  model.validate();
  bool any_target = false;
  for (double t : model.rate_target) any_target |= t > 0.0;
  if (!any_target) return PowerAllocation::budget_fraction(model, 0.5);

  if (model.num_blocks == 1) {
    const FeasibilityReport report = check_feasible_single_block(model);
    if (!report.feasible) {
      throw InfeasibleError("default_start: rate targets are infeasible (exact test)");
    }
    PowerAllocation p = PowerAllocation::zeros(model.num_users, 1);
    for (std::size_t k = 0; k < model.num_users; ++k) p.at(k, 0) = report.min_power[k];
    return p;
  }
  const BlockFeasibilityReport report = check_feasible_multi_block(model);
  if (!report.feasible) {
    throw InfeasibleError("default_start: rate targets are infeasible (sufficient test)");
  }
  return report.witness;
}

namespace {

// d log2(1 + sinr_k,n) / d q_(j,n) for every coordinate, in q = log2 p space.
void add_rate_gradient(const NetworkModel& m, const PowerAllocation& p, std::size_t k,
                       double factor, std::vector<double>& grad) {
  const std::size_t nn = m.num_blocks;
  for (std::size_t n = 0; n < nn; ++n) {
    double depth = m.noise(k, n) + m.self(k, n) * p.at(k, n);
    for (std::size_t j = 0; j < m.num_users; ++j) {
      if (j != k) depth += m.cross(k, j, n) * p.at(j, n);
    }
    const double s = m.direct(k, n) * p.at(k, n) / depth;
    const double own = m.direct(k, n) * (depth - m.self(k, n) * p.at(k, n)) / (depth * depth);
    grad[k * nn + n] += factor * p.at(k, n) * own / (1.0 + s);
    for (std::size_t j = 0; j < m.num_users; ++j) {
      if (j == k) continue;
      const double other = -m.direct(k, n) * p.at(k, n) * m.cross(k, j, n) / (depth * depth);
      grad[j * nn + n] += factor * p.at(j, n) * other / (1.0 + s);
    }
  }
}

}  // namespace

double centralized_kkt_residual(const NetworkModel& model, const PowerAllocation& p,
                                CentralizedObjective objective) {
  const std::size_t kk = model.num_users;
  const std::size_t nn = model.num_blocks;
  const std::size_t q_dim = kk * nn;

  // True-objective gradient in q space (epigraph lift for the min kinds).
  const bool epigraph = objective == CentralizedObjective::kMinWeightedEe ||
                        objective == CentralizedObjective::kMinRate;
  const std::size_t dim = epigraph ? q_dim + 1 : q_dim;
  std::vector<double> grad_obj(dim, 0.0);

  std::vector<double> ratios(kk, 0.0);
  if (objective == CentralizedObjective::kGlobalEe) {
    double rate_total = 0.0;
    std::vector<double> grad_rate(q_dim, 0.0);
    for (std::size_t k = 0; k < kk; ++k) {
      rate_total += user_rate(model, p, k);
      add_rate_gradient(model, p, k, model.bandwidth_hz, grad_rate);
    }
    const double cost = model.total_circuit_power() + p.total();
    for (std::size_t c = 0; c < q_dim; ++c) {
      const double dcost = std::numbers::ln2 * p.value[c];
      grad_obj[c] = (grad_rate[c] * cost - rate_total * dcost) / (cost * cost);
    }
  } else if (objective == CentralizedObjective::kSumRate) {
    for (std::size_t k = 0; k < kk; ++k) {
      add_rate_gradient(model, p, k, model.bandwidth_hz, grad_obj);
    }
  } else {
    grad_obj[q_dim] = 1.0;  // maximize the epigraph variable
    for (std::size_t k = 0; k < kk; ++k) {
      if (objective == CentralizedObjective::kMinWeightedEe) {
        ratios[k] = model.weight[k] * user_ee(model, p, k);
      } else {
        ratios[k] = model.weight[k] * user_rate(model, p, k);
      }
    }
  }

  double scale = std::max(1.0, linalg::norm_inf(grad_obj));
  for (double& v : grad_obj) v /= scale;

  // Active constraint normals: budgets, rate targets, epigraph ratios.
  std::vector<std::vector<double>> columns;
  double violation = 0.0;
  constexpr double kActive = 1e-5;
  for (std::size_t k = 0; k < kk; ++k) {
    const double slack = model.max_power[k] - p.user_total(k);
    violation += std::max(0.0, -slack / model.max_power[k]);
    if (slack / model.max_power[k] <= kActive) {
      std::vector<double> col(dim, 0.0);
      for (std::size_t n = 0; n < nn; ++n) {
        col[k * nn + n] = -std::numbers::ln2 * p.at(k, n);
      }
      const double cn = std::max(1.0, linalg::norm_inf(col));
      for (double& v : col) v /= cn;
      columns.push_back(std::move(col));
    }
  }
  for (std::size_t k = 0; k < kk; ++k) {
    if (!(model.rate_target[k] > 0.0)) continue;
    const double rate = user_spectral_rate(model, p, k);
    const double slack = rate - model.rate_target[k];
    const double sc = std::max(1.0, model.rate_target[k]);
    violation += std::max(0.0, -slack / sc);
    if (slack / sc <= kActive) {
      std::vector<double> col(dim, 0.0);
      add_rate_gradient(model, p, k, 1.0, col);
      const double cn = std::max(1.0, linalg::norm_inf(col));
      for (double& v : col) v /= cn;
      columns.push_back(std::move(col));
    }
  }
  if (epigraph) {
    double min_ratio = kInfinity;
    for (double r : ratios) min_ratio = std::min(min_ratio, r);
    const double sc = std::max(1.0, std::fabs(min_ratio));
    for (std::size_t k = 0; k < kk; ++k) {
      if ((ratios[k] - min_ratio) / sc > kActive) continue;
      std::vector<double> col(dim, 0.0);
      if (objective == CentralizedObjective::kMinWeightedEe) {
        const double cost = model.circuit_power[k] + p.user_total(k);
        std::vector<double> grad_rate(q_dim, 0.0);
        add_rate_gradient(model, p, k, model.weight[k] * model.bandwidth_hz, grad_rate);
        const double rate_k = model.weight[k] * user_rate(model, p, k);
        for (std::size_t n = 0; n < nn; ++n) {
          const std::size_t c = k * nn + n;
          const double dcost = std::numbers::ln2 * p.at(k, n);
          col[c] = (grad_rate[c] * cost - rate_k * dcost) / (cost * cost);
        }
        for (std::size_t j = 0; j < kk; ++j) {
          if (j == k) continue;
          for (std::size_t n = 0; n < nn; ++n) col[j * nn + n] = grad_rate[j * nn + n] / cost;
        }
      } else {
        add_rate_gradient(model, p, k, model.weight[k] * model.bandwidth_hz, col);
      }
      col[q_dim] = -1.0;
      const double cn = std::max(1.0, linalg::norm_inf(col));
      for (double& v : col) v /= cn;
      columns.push_back(std::move(col));
    }
  }

  std::vector<double> mult(columns.size(), 0.0);
  if (!columns.empty()) {
    const std::size_t na = columns.size();
    linalg::Matrix ata(na, na);
    std::vector<double> atb(na, 0.0);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < na; ++j) ata(i, j) = linalg::dot(columns[i], columns[j]);
      ata(i, i) += 1e-12;
      atb[i] = -linalg::dot(columns[i], grad_obj);
    }
    mult = linalg::solve(std::move(ata), std::move(atb));
    for (double& v : mult) v = std::max(0.0, v);
  }
  std::vector<double> residual = grad_obj;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) residual[c] += mult[i] * columns[i][c];
  }
  return linalg::norm_inf(residual) + violation;
}

double surrogate_gee(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                     std::span<const double> log_power) {
  double rate = 0.0;
  double cost = model.total_circuit_power();
  for (std::size_t k = 0; k < model.num_users; ++k) {
    rate += surrogate_spectral_rate(model, bounds, log_power, k);
  }
  for (double q : log_power) cost += std::exp2(q);
  return model.bandwidth_hz * rate / cost;
}

double surrogate_user_ee(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                         std::span<const double> log_power, std::size_t k) {
  double cost = model.circuit_power[k];
  for (std::size_t n = 0; n < model.num_blocks; ++n) {
    cost += std::exp2(log_power[k * model.num_blocks + n]);
  }
  return model.bandwidth_hz * surrogate_spectral_rate(model, bounds, log_power, k) / cost;
}

}  // namespace eepc
