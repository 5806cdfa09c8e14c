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

#include "eepc/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Shared evaluation of the surrogate rate
//   R~_k(q) = sum_n [offset + slope * (log2(direct) + q_kn - log2 D_kn(q))]
// where D_kn is the SINR denominator with powers 2^q. Derivatives are
// accumulated (scaled by `factor`) so several terms can share buffers.
class SurrogateRateEval {
 public:
  SurrogateRateEval(const NetworkModel& model, std::span<const LogBoundParams> bounds)
      : model_(model), bounds_(bounds) {}

  double add_user(std::span<const double> q, std::size_t k, double factor,
                  std::vector<double>* grad, linalg::Matrix* hess) const {
    const NetworkModel& m = model_;
    const std::size_t kk = m.num_users;
    const std::size_t nn = m.num_blocks;
    double value = 0.0;
    std::vector<double> u(kk, 0.0);
    for (std::size_t n = 0; n < nn; ++n) {
      const LogBoundParams& bp = bounds_[k * nn + n];
      double depth = m.noise(k, n);
      for (std::size_t j = 0; j < kk; ++j) {
        const double coeff = (j == k) ? m.self(k, n) : m.cross(k, j, n);
        u[j] = coeff * std::exp2(q[j * nn + n]);
        depth += u[j];
      }
      value += bp.offset +
               bp.slope * (std::log2(m.direct(k, n)) + q[k * nn + n] - std::log2(depth));
      if (grad != nullptr) {
        for (std::size_t j = 0; j < kk; ++j) {
          double g = -u[j] / depth;
          if (j == k) g += 1.0;
          (*grad)[j * nn + n] += factor * bp.slope * g;
        }
      }
      if (hess != nullptr) {
        const double c = -factor * bp.slope * kLn2;
        for (std::size_t i = 0; i < kk; ++i) {
          if (u[i] == 0.0) continue;
          for (std::size_t j = 0; j < kk; ++j) {
            if (u[j] == 0.0) continue;
            double hij = -u[i] * u[j] / (depth * depth);
            if (i == j) hij += u[i] / depth;
            (*hess)(i * nn + n, j * nn + n) += c * hij;
          }
        }
      }
    }
    return factor * value;
  }

 private:
  const NetworkModel& model_;
  std::span<const LogBoundParams> bounds_;
};

void clear(std::vector<double>* grad, linalg::Matrix* hess) {
  if (grad != nullptr) std::fill(grad->begin(), grad->end(), 0.0);
  if (hess != nullptr) hess->fill(0.0);
}

// h_k(q) = max_power_k - sum_n 2^{q_kn}.
class BudgetSlackFn final : public SmoothFn {
 public:
  BudgetSlackFn(const NetworkModel& model, std::size_t k) : model_(model), k_(k) {}

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    clear(grad, hess);
    const std::size_t nn = model_.num_blocks;
    double spent = 0.0;
    for (std::size_t n = 0; n < nn; ++n) {
      const double p = std::exp2(x[k_ * nn + n]);
      spent += p;
      if (grad != nullptr) (*grad)[k_ * nn + n] = -kLn2 * p;
      if (hess != nullptr) (*hess)(k_ * nn + n, k_ * nn + n) = -kLn2 * kLn2 * p;
    }
    return model_.max_power[k_] - spent;
  }

 private:
  const NetworkModel& model_;
  std::size_t k_;
};

// Single-block rate constraint in exact convex form:
//   h_k(q) = q_k + log2((direct - s_min * self) / s_min)
//            - log2(noise + sum_{j != k} cross * 2^{q_j}) >= 0
// with s_min = 2^target - 1; requires direct > s_min * self.
class ExactRateSlackFn final : public SmoothFn {
 public:
  ExactRateSlackFn(const NetworkModel& model, std::size_t k) : model_(model), k_(k) {
    const double s_min = std::exp2(model.rate_target[k]) - 1.0;
    const double margin = model.direct(k, 0) - s_min * model.self(k, 0);
    if (!(margin > 0.0)) {
      throw TargetExceedsMaxSinrError("rate target implies an SINR above the ceiling");
    }
    log_margin_ = std::log2(margin / s_min);
  }

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    clear(grad, hess);
    const std::size_t kk = model_.num_users;
    std::vector<double> v(kk, 0.0);
    double interf = model_.noise(k_, 0);
    for (std::size_t j = 0; j < kk; ++j) {
      if (j == k_) continue;
      v[j] = model_.cross(k_, j, 0) * std::exp2(x[j]);
      interf += v[j];
    }
    if (grad != nullptr) {
      (*grad)[k_] = 1.0;
      for (std::size_t j = 0; j < kk; ++j) {
        if (j != k_) (*grad)[j] = -v[j] / interf;
      }
    }
    if (hess != nullptr) {
      for (std::size_t i = 0; i < kk; ++i) {
        if (v[i] == 0.0) continue;
        for (std::size_t j = 0; j < kk; ++j) {
          if (v[j] == 0.0) continue;
          double hij = -v[i] * v[j] / (interf * interf);
          if (i == j) hij += v[i] / interf;
          (*hess)(i, j) = -kLn2 * hij;
        }
      }
    }
    return x[k_] + log_margin_ - std::log2(interf);
  }

 private:
  const NetworkModel& model_;
  std::size_t k_;
  double log_margin_ = 0.0;
};

// h_k(q) = R~_k(q) - rate_target_k.
class SurrogateRateSlackFn final : public SmoothFn {
 public:
  SurrogateRateSlackFn(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                       std::size_t k)
      : eval_(model, bounds), target_(model.rate_target[k]), k_(k) {}

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    clear(grad, hess);
    return eval_.add_user(x, k_, 1.0, grad, hess) - target_;
  }

 private:
  SurrogateRateEval eval_;
  double target_;
  std::size_t k_;
};

// f(q) = bandwidth * sum_k R~_k(q) - price * (total circuit + sum 2^q).
class GeeShiftedFn final : public SmoothFn {
 public:
  GeeShiftedFn(const NetworkModel& model, std::span<const LogBoundParams> bounds, double price)
      : model_(model), eval_(model, bounds), price_(price) {}

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    clear(grad, hess);
    double value = 0.0;
    for (std::size_t k = 0; k < model_.num_users; ++k) {
      value += eval_.add_user(x, k, model_.bandwidth_hz, grad, hess);
    }
    double cost = model_.total_circuit_power();
    const std::size_t dim = model_.num_users * model_.num_blocks;
    for (std::size_t c = 0; c < dim; ++c) {
      const double p = std::exp2(x[c]);
      cost += p;
      if (grad != nullptr) (*grad)[c] -= price_ * kLn2 * p;
      if (hess != nullptr) (*hess)(c, c) -= price_ * kLn2 * kLn2 * p;
    }
    return value - price_ * cost;
  }

 private:
  const NetworkModel& model_;
  SurrogateRateEval eval_;
  double price_;
};

// Per-user shifted ratio minus the scaled epigraph variable:
//   h_k(q, t) = w_k * bandwidth * R~_k - price * (circuit_k + power_k) - t_scale * t.
// The weight scales the numerator only; the price multiplies the raw cost so
// the generalized ratio update price = min_k w_k f_k / g_k stays consistent.
class RatioEpigraphFn final : public SmoothFn {
 public:
  RatioEpigraphFn(const NetworkModel& model, std::span<const LogBoundParams> bounds, std::size_t k,
                  double price, double weight, std::size_t t_index, double t_scale)
      : model_(model),
        eval_(model, bounds),
        k_(k),
        price_(price),
        weight_(weight),
        t_index_(t_index),
        t_scale_(t_scale) {}

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    clear(grad, hess);
    double value = eval_.add_user(x, k_, weight_ * model_.bandwidth_hz, grad, hess);
    double cost = model_.circuit_power[k_];
    const std::size_t nn = model_.num_blocks;
    for (std::size_t n = 0; n < nn; ++n) {
      const double p = std::exp2(x[k_ * nn + n]);
      cost += p;
      if (grad != nullptr) (*grad)[k_ * nn + n] -= price_ * kLn2 * p;
      if (hess != nullptr) (*hess)(k_ * nn + n, k_ * nn + n) -= price_ * kLn2 * kLn2 * p;
    }
    value -= price_ * cost;
    if (grad != nullptr) (*grad)[t_index_] = -t_scale_;
    return value - t_scale_ * x[t_index_];
  }

  /// Raw shifted ratio value without the epigraph term.
  double ratio(std::span<const double> q) const {
    double value = eval_.add_user(q, k_, weight_ * model_.bandwidth_hz, nullptr, nullptr);
    double cost = model_.circuit_power[k_];
    for (std::size_t n = 0; n < model_.num_blocks; ++n) cost += std::exp2(q[k_ * model_.num_blocks + n]);
    return value - price_ * cost;
  }

 private:
  const NetworkModel& model_;
  SurrogateRateEval eval_;
  std::size_t k_;
  double price_;
  double weight_;
  std::size_t t_index_;
  double t_scale_;
};

// Objective x[t] for epigraph formulations.
class EpigraphVarFn final : public SmoothFn {
 public:
  explicit EpigraphVarFn(std::size_t t_index) : t_index_(t_index) {}

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    clear(grad, hess);
    if (grad != nullptr) (*grad)[t_index_] = 1.0;
    return x[t_index_];
  }

 private:
  std::size_t t_index_;
};

// h_i(q) - scale_i * t >= 0 for the phase-one problem.
class SlackedFn final : public SmoothFn {
 public:
  SlackedFn(const SmoothFn& base, double scale, std::size_t t_index, std::size_t q_dim)
      : base_(base), scale_(scale), t_index_(t_index), q_dim_(q_dim) {}

  double eval(std::span<const double> x, std::vector<double>* grad,
              linalg::Matrix* hess) const override {
    // The base function only reads the q prefix.
    const double h = base_.eval(x.first(q_dim_), grad, hess);
    if (grad != nullptr) (*grad)[t_index_] = -scale_;
    return h - scale_ * x[t_index_];
  }

 private:
  const SmoothFn& base_;
  double scale_;
  std::size_t t_index_;
  std::size_t q_dim_;
};

struct BarrierWork {
  std::vector<double> grad_f;
  std::vector<double> grad_h;
  std::vector<double> grad_phi;
  linalg::Matrix hess_f;
  linalg::Matrix hess_h;
  linalg::Matrix hess_phi;
};

bool strictly_inside(std::span<const SmoothFn* const> constraints,
                     std::span<const double> box_floor, std::span<const double> x) {
  for (std::size_t c = 0; c < box_floor.size(); ++c) {
    if (std::isfinite(box_floor[c]) && !(x[c] > box_floor[c])) return false;
  }
  for (const SmoothFn* fn : constraints) {
    if (!(fn->eval(x, nullptr, nullptr) > 0.0)) return false;
  }
  return true;
}

double barrier_value(const SmoothFn& objective, double inv_scale, double weight,
                     std::span<const SmoothFn* const> constraints,
                     std::span<const double> box_floor, std::span<const double> x,
                     bool* feasible) {
  *feasible = true;
  double phi = weight * inv_scale * objective.eval(x, nullptr, nullptr);
  for (const SmoothFn* fn : constraints) {
    const double h = fn->eval(x, nullptr, nullptr);
    if (!(h > 0.0)) {
      *feasible = false;
      return -std::numeric_limits<double>::infinity();
    }
    phi += std::log(h);
  }
  for (std::size_t c = 0; c < box_floor.size(); ++c) {
    if (!std::isfinite(box_floor[c])) continue;
    const double h = x[c] - box_floor[c];
    if (!(h > 0.0)) {
      *feasible = false;
      return -std::numeric_limits<double>::infinity();
    }
    phi += std::log(h);
  }
  return phi;
}

}  // namespace

BarrierResult maximize_with_barrier(const SmoothFn& objective, double objective_scale,
                                    std::span<const SmoothFn* const> constraints,
                                    std::span<const double> box_floor, std::vector<double> start,
                                    const BarrierOptions& opts) {
  const std::size_t dim = start.size();
  if (box_floor.size() != dim) throw DimensionError("barrier: box size mismatch");
  if (!strictly_inside(constraints, box_floor, start)) {
    throw SolverError("barrier: start point is not strictly feasible");
  }
  const double inv_scale = 1.0 / std::max(objective_scale, 1e-300);

  std::size_t barrier_terms = constraints.size();
  for (double f : box_floor) {
    if (std::isfinite(f)) ++barrier_terms;
  }

  BarrierResult result;
  result.x = std::move(start);

  BarrierWork w;
  w.grad_f.assign(dim, 0.0);
  w.grad_h.assign(dim, 0.0);
  w.grad_phi.assign(dim, 0.0);
  w.hess_f = linalg::Matrix(dim, dim);
  w.hess_h = linalg::Matrix(dim, dim);
  w.hess_phi = linalg::Matrix(dim, dim);

  double weight = opts.objective_weight0;
  double stationarity = std::numeric_limits<double>::infinity();
  // Normalized stationarity each stage is driven below this; the barrier
  // weight schedule then controls the complementarity gap.
  const double stage_tolerance = std::min(1e-8, opts.gap_tolerance);

  while (true) {
    // Newton stage at the current barrier weight.
    for (int step = 0; step < opts.max_newton_steps; ++step) {
      const double f = objective.eval(result.x, &w.grad_f, &w.hess_f);
      result.objective = f;
      for (std::size_t c = 0; c < dim; ++c) w.grad_phi[c] = weight * inv_scale * w.grad_f[c];
      for (std::size_t c = 0; c < dim * dim; ++c) {
        w.hess_phi.data()[c] = weight * inv_scale * w.hess_f.data()[c];
      }
      for (const SmoothFn* fn : constraints) {
        const double h = fn->eval(result.x, &w.grad_h, &w.hess_h);
        if (!(h > 0.0)) throw SolverError("barrier: iterate left the feasible region");
        const double ih = 1.0 / h;
        for (std::size_t c = 0; c < dim; ++c) w.grad_phi[c] += ih * w.grad_h[c];
        for (std::size_t r = 0; r < dim; ++r) {
          const double gr = w.grad_h[r];
          for (std::size_t c = 0; c < dim; ++c) {
            w.hess_phi(r, c) += ih * w.hess_h(r, c) - ih * ih * gr * w.grad_h[c];
          }
        }
      }
      for (std::size_t c = 0; c < dim; ++c) {
        if (!std::isfinite(box_floor[c])) continue;
        const double h = result.x[c] - box_floor[c];
        w.grad_phi[c] += 1.0 / h;
        w.hess_phi(c, c) -= 1.0 / (h * h);
      }

      stationarity = linalg::norm_inf(w.grad_phi) / weight;
      if (stationarity <= stage_tolerance) break;

      // Newton direction for the concave barrier objective.
      linalg::Matrix neg_h = w.hess_phi;
      for (double& v : neg_h.data()) v = -v;
      std::vector<double> dir;
      double tau = 0.0;
      for (int attempt = 0; attempt < 12; ++attempt) {
        try {
          linalg::Matrix reg = neg_h;
          if (tau > 0.0) linalg::add_diagonal(reg, tau);
          dir = linalg::solve(std::move(reg), w.grad_phi);
        } catch (const SingularMatrixError&) {
          dir.clear();
        }
        if (!dir.empty() && std::isfinite(linalg::norm2(dir)) &&
            linalg::dot(w.grad_phi, dir) > 0.0) {
          break;
        }
        dir.clear();
        tau = (tau == 0.0) ? 1e-8 * (1.0 + linalg::norm_inf(w.grad_phi)) : tau * 100.0;
      }
      if (dir.empty()) throw SolverError("barrier: could not produce an ascent direction");

      const double decrement = linalg::dot(w.grad_phi, dir);
      bool feasible = false;
      const double phi0 = barrier_value(objective, inv_scale, weight, constraints, box_floor,
                                        result.x, &feasible);
      // Below this the Armijo test compares rounding noise; inside the
      // quadratic convergence region the pure Newton step is taken instead.
      const double value_noise = 1e-14 * (1.0 + std::fabs(phi0));
      const bool verify = 0.5 * decrement > value_noise;

      double alpha = 1.0;
      std::vector<double> trial(dim);
      bool accepted = false;
      for (int bt = 0; bt < 70; ++bt) {
        for (std::size_t c = 0; c < dim; ++c) trial[c] = result.x[c] + alpha * dir[c];
        const double phi1 =
            barrier_value(objective, inv_scale, weight, constraints, box_floor, trial, &feasible);
        if (feasible &&
            (!verify || phi1 >= phi0 + opts.armijo_slope * alpha * decrement)) {
          result.x = trial;
          accepted = true;
          break;
        }
        alpha *= opts.armijo_backtrack;
      }
      ++result.newton_iterations;
      if (!accepted) break;  // line search exhausted at this stage
    }

    const double gap = barrier_terms == 0 ? 0.0 : static_cast<double>(barrier_terms) / weight;
    if (gap <= opts.gap_tolerance) {
      result.kkt_residual = std::max(stationarity, gap);
      result.converged = stationarity <= 1e-6;
      result.objective = objective.eval(result.x, nullptr, nullptr);
      return result;
    }
    weight *= opts.weight_growth;
  }
}

PhaseOneResult maximize_min_slack(std::span<const SmoothFn* const> constraints,
                                  std::span<const double> scales,
                                  std::span<const double> box_floor, std::vector<double> start,
                                  const BarrierOptions& opts) {
  const std::size_t q_dim = start.size();
  const std::size_t t_index = q_dim;
  if (scales.size() != constraints.size()) throw DimensionError("phase one: scale list mismatch");

  std::vector<SlackedFn> slacked;
  slacked.reserve(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    slacked.emplace_back(*constraints[i], scales[i], t_index, q_dim);
  }
  std::vector<const SmoothFn*> cons;
  for (const SlackedFn& fn : slacked) cons.push_back(&fn);

  // t0 one unit below the current scaled minimum slack keeps every slacked
  // constraint strictly positive.
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    min_slack = std::min(min_slack, constraints[i]->eval(start, nullptr, nullptr) / scales[i]);
  }
  std::vector<double> x = std::move(start);
  x.push_back(min_slack - 1.0);

  std::vector<double> box(box_floor.begin(), box_floor.end());
  box.push_back(-std::numeric_limits<double>::infinity());

  EpigraphVarFn objective(t_index);
  BarrierResult r = maximize_with_barrier(objective, 1.0, cons, box, std::move(x), opts);

  PhaseOneResult out;
  out.slack = r.x[t_index];
  out.feasible = out.slack >= 0.0;
  out.newton_iterations = r.newton_iterations;
  r.x.pop_back();
  out.x = std::move(r.x);
  return out;
}

namespace {

struct ProblemParts {
  std::vector<const SmoothFn*> hard;          // budget + rate constraints
  std::vector<double> hard_scales;
  std::vector<std::unique_ptr<SmoothFn>> own;  // storage
};

ProblemParts build_hard_constraints(const SurrogateProblem& prob) {
  const NetworkModel& m = *prob.model;
  ProblemParts parts;
  for (std::size_t k = 0; k < m.num_users; ++k) {
    parts.own.push_back(std::make_unique<BudgetSlackFn>(m, k));
    parts.hard.push_back(parts.own.back().get());
    parts.hard_scales.push_back(m.max_power[k]);
  }
  for (std::size_t k = 0; k < m.num_users; ++k) {
    if (!(m.rate_target[k] > 0.0)) continue;
    if (prob.exact_rate_constraints && m.num_blocks == 1) {
      parts.own.push_back(std::make_unique<ExactRateSlackFn>(m, k));
    } else {
      parts.own.push_back(std::make_unique<SurrogateRateSlackFn>(m, prob.bounds, k));
    }
    parts.hard.push_back(parts.own.back().get());
    parts.hard_scales.push_back(std::max(1.0, m.rate_target[k]));
  }
  return parts;
}

std::vector<double> weights_of(const SurrogateProblem& prob) {
  if (!prob.weights.empty()) return prob.weights;
  return prob.model->weight;
}

std::vector<double> clamp_log_power(const SurrogateProblem& prob, const PowerAllocation& start,
                                    double q_floor) {
  const std::size_t dim = prob.model->num_users * prob.model->num_blocks;
  std::vector<double> q(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const double p = start.value[c];
    q[c] = (p > 0.0) ? std::max(std::log2(p), q_floor + 0.5) : q_floor + 1.0;
  }
  return q;
}

PowerAllocation power_from_log(const NetworkModel& m, std::span<const double> q) {
  PowerAllocation p = PowerAllocation::zeros(m.num_users, m.num_blocks);
  for (std::size_t c = 0; c < p.value.size(); ++c) p.value[c] = std::exp2(q[c]);
  return p;
}

double gradient_scale(const SmoothFn& fn, std::span<const double> x) {
  std::vector<double> g(x.size(), 0.0);
  fn.eval(x, &g, nullptr);
  return std::max(1.0, linalg::norm_inf(g));
}

}  // namespace

SurrogateSolution maximize_surrogate(const SurrogateProblem& prob, const PowerAllocation& start) {
  const NetworkModel& m = *prob.model;
  const std::size_t q_dim = m.num_users * m.num_blocks;
  if (prob.bounds.size() != q_dim) throw DimensionError("surrogate: bound params size mismatch");
  const double q_floor = std::log2(prob.power_floor);

  ProblemParts parts = build_hard_constraints(prob);
  std::vector<double> q0 = clamp_log_power(prob, start, q_floor);
  std::vector<double> box(q_dim, q_floor);

  SurrogateSolution sol;

  if (prob.kind == SurrogateObjective::kFeasibilitySlack) {
    PhaseOneResult p1 = maximize_min_slack(parts.hard, parts.hard_scales, box, q0, prob.barrier);
    sol.log_power = p1.x;
    sol.power = power_from_log(m, p1.x);
    sol.objective = p1.slack;
    sol.phase_one_slack = p1.slack;
    sol.used_phase_one = true;
    sol.newton_iterations = p1.newton_iterations;
    sol.converged = true;
    return sol;
  }

  // Interior start: run phase one when any slack is not strictly positive.
  bool interior = true;
  for (std::size_t i = 0; i < parts.hard.size(); ++i) {
    const double h = parts.hard[i]->eval(q0, nullptr, nullptr);
    if (!(h > 1e-9 * parts.hard_scales[i])) {
      interior = false;
      break;
    }
  }
  if (!interior) {
    PhaseOneResult p1 = maximize_min_slack(parts.hard, parts.hard_scales, box, q0, prob.barrier);
    if (!p1.feasible || !(p1.slack > 0.0)) {
      throw InfeasibleError("surrogate: constraint set has no interior point");
    }
    q0 = std::move(p1.x);
    sol.used_phase_one = true;
    sol.phase_one_slack = p1.slack;
    sol.newton_iterations += p1.newton_iterations;
  }

  BarrierResult r;
  if (prob.kind == SurrogateObjective::kGeeShifted || prob.kind == SurrogateObjective::kSumRate) {
    const double price = prob.kind == SurrogateObjective::kGeeShifted ? prob.price : 0.0;
    GeeShiftedFn objective(m, prob.bounds, price);
    const double scale = gradient_scale(objective, q0);
    r = maximize_with_barrier(objective, scale, parts.hard, box, std::move(q0), prob.barrier);
    sol.objective = r.objective;
  } else {
    // Epigraph lift for the max-min objectives.
    const std::vector<double> w = weights_of(prob);
    const double price = prob.kind == SurrogateObjective::kMinShiftedRatios ? prob.price : 0.0;
    std::vector<std::unique_ptr<RatioEpigraphFn>> ratios;
    double t_scale = 1.0;
    {
      // Probe ratio magnitudes at the start point to normalize t.
      for (std::size_t k = 0; k < m.num_users; ++k) {
        RatioEpigraphFn probe(m, prob.bounds, k, price, w[k], q_dim, 1.0);
        t_scale = std::max(t_scale, std::fabs(probe.ratio(q0)));
        std::vector<double> x_probe(q0);
        x_probe.push_back(0.0);
        std::vector<double> g(q_dim + 1, 0.0);
        probe.eval(x_probe, &g, nullptr);
        g[q_dim] = 0.0;
        t_scale = std::max(t_scale, linalg::norm_inf(g));
      }
    }
    std::vector<const SmoothFn*> cons = parts.hard;
    for (std::size_t k = 0; k < m.num_users; ++k) {
      ratios.push_back(std::make_unique<RatioEpigraphFn>(m, prob.bounds, k, price, w[k], q_dim,
                                                         t_scale));
      cons.push_back(ratios.back().get());
    }
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& fn : ratios) min_ratio = std::min(min_ratio, fn->ratio(q0));

    std::vector<double> x = std::move(q0);
    x.push_back(min_ratio / t_scale - 1.0);
    std::vector<double> box_t = box;
    box_t.push_back(-std::numeric_limits<double>::infinity());

    EpigraphVarFn objective(q_dim);
    r = maximize_with_barrier(objective, 1.0, cons, box_t, std::move(x), prob.barrier);
    r.x.pop_back();
    double final_min = std::numeric_limits<double>::infinity();
    for (const auto& fn : ratios) final_min = std::min(final_min, fn->ratio(r.x));
    sol.objective = final_min;
  }

  sol.log_power = r.x;
  sol.power = power_from_log(m, r.x);
  sol.kkt_residual = r.kkt_residual;
  sol.newton_iterations += r.newton_iterations;
  sol.converged = r.converged;
  return sol;
}

double surrogate_kkt_residual(const SurrogateProblem& prob, std::span<const double> log_power) {
  const NetworkModel& m = *prob.model;
  const std::size_t q_dim = m.num_users * m.num_blocks;
  const double q_floor = std::log2(prob.power_floor);

  ProblemParts parts = build_hard_constraints(prob);

  // Lift max-min kinds so one stationarity test covers every objective.
  std::vector<std::unique_ptr<RatioEpigraphFn>> ratios;
  std::vector<const SmoothFn*> cons = parts.hard;
  std::vector<double> scales = parts.hard_scales;
  std::vector<double> x(log_power.begin(), log_power.end());
  std::unique_ptr<SmoothFn> objective;
  double obj_scale = 1.0;
  std::size_t dim = q_dim;

  const bool epigraph = prob.kind == SurrogateObjective::kMinShiftedRatios ||
                        prob.kind == SurrogateObjective::kMinRate;
  if (epigraph) {
    const std::vector<double> w = weights_of(prob);
    const double price = prob.kind == SurrogateObjective::kMinShiftedRatios ? prob.price : 0.0;
    double t_scale = 1.0;
    for (std::size_t k = 0; k < m.num_users; ++k) {
      RatioEpigraphFn probe(m, prob.bounds, k, price, w[k], q_dim, 1.0);
      t_scale = std::max(t_scale, std::fabs(probe.ratio(x)));
    }
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.num_users; ++k) {
      ratios.push_back(std::make_unique<RatioEpigraphFn>(m, prob.bounds, k, price, w[k], q_dim,
                                                         t_scale));
      min_ratio = std::min(min_ratio, ratios.back()->ratio(x));
      cons.push_back(ratios.back().get());
      scales.push_back(t_scale);
    }
    x.push_back(min_ratio / t_scale);
    objective = std::make_unique<EpigraphVarFn>(q_dim);
    dim = q_dim + 1;
  } else {
    const double price = prob.kind == SurrogateObjective::kGeeShifted ? prob.price : 0.0;
    objective = std::make_unique<GeeShiftedFn>(m, prob.bounds, price);
    obj_scale = gradient_scale(*objective, x);
  }

  std::vector<double> g0(dim, 0.0);
  objective->eval(x, &g0, nullptr);
  for (double& v : g0) v /= obj_scale;

  // Active constraints (including box coordinates near the floor).
  std::vector<std::vector<double>> columns;
  std::vector<double> h_values, h_scales;
  std::vector<double> gh(dim, 0.0);
  double violation = 0.0;
  constexpr double kActive = 1e-5;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const double h = cons[i]->eval(x, &gh, nullptr);
    violation += std::max(0.0, -h / scales[i]);
    if (h / scales[i] <= kActive) {
      columns.push_back(gh);
      h_values.push_back(h);
      h_scales.push_back(scales[i]);
    }
  }
  for (std::size_t c = 0; c < q_dim; ++c) {
    const double h = x[c] - q_floor;
    if (h <= kActive * std::max(1.0, std::fabs(q_floor))) {
      std::vector<double> e(dim, 0.0);
      e[c] = 1.0;
      columns.push_back(e);
      h_values.push_back(h);
      h_scales.push_back(1.0);
    }
  }

  std::vector<double> mult(columns.size(), 0.0);
  if (!columns.empty()) {
    // Least-squares multipliers: minimize ||g0 + A mult||.
    const std::size_t na = columns.size();
    linalg::Matrix ata(na, na);
    std::vector<double> atb(na, 0.0);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < na; ++j) ata(i, j) = linalg::dot(columns[i], columns[j]);
      ata(i, i) += 1e-12;
      atb[i] = -linalg::dot(columns[i], g0);
    }
    mult = linalg::solve(std::move(ata), std::move(atb));
    for (double& v : mult) v = std::max(0.0, v);
  }

  std::vector<double> residual = g0;
  double complementarity = 0.0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) residual[c] += mult[i] * columns[i][c];
    complementarity += mult[i] * std::max(0.0, h_values[i]) / h_scales[i];
  }
  return linalg::norm_inf(residual) + complementarity + violation;
}

LogBoundParams log_bound_params(double sinr_ref) {
  if (!(sinr_ref > 0.0)) throw SolverError("log_bound_params: reference SINR must be positive");
  const double slope = sinr_ref / (1.0 + sinr_ref);
  return {slope, std::log2(1.0 + sinr_ref) - slope * std::log2(sinr_ref)};
}

std::vector<LogBoundParams> log_bound_params_at(const NetworkModel& model,
                                                const PowerAllocation& reference,
                                                double sinr_floor) {
  std::vector<LogBoundParams> bounds(model.num_users * model.num_blocks);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    for (std::size_t n = 0; n < model.num_blocks; ++n) {
      bounds[k * model.num_blocks + n] =
          log_bound_params(std::max(sinr(model, reference, k, n), sinr_floor));
    }
  }
  return bounds;
}

double surrogate_spectral_rate(const NetworkModel& model, std::span<const LogBoundParams> bounds,
                               std::span<const double> log_power, std::size_t k) {
  SurrogateRateEval eval(model, bounds);
  return eval.add_user(log_power, k, 1.0, nullptr, nullptr);
}

std::vector<double> surrogate_spectral_rate_gradient(const NetworkModel& model,
                                                     std::span<const LogBoundParams> bounds,
                                                     std::span<const double> log_power,
                                                     std::size_t k) {
  SurrogateRateEval eval(model, bounds);
  std::vector<double> grad(log_power.size(), 0.0);
  eval.add_user(log_power, k, 1.0, &grad, nullptr);
  return grad;
}

}  // namespace eepc
