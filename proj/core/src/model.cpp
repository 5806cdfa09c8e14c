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

#include "eepc/model.hpp"

#include <algorithm>
#include <cmath>

#include "eepc/errors.hpp"

namespace eepc {

double NetworkModel::total_circuit_power() const {
  double total = 0.0;
  for (double p : circuit_power) total += p;
  return total;
}

NetworkModel NetworkModel::sized(std::size_t num_users, std::size_t num_blocks) {
  NetworkModel m;
  m.num_users = num_users;
  m.num_blocks = num_blocks;
  m.direct_gain.assign(num_users * num_blocks, 1.0);
  m.self_gain.assign(num_users * num_blocks, 0.0);
  m.cross_gain.assign(num_users * num_users * num_blocks, 0.0);
  m.noise_power.assign(num_users * num_blocks, 1.0);
  m.max_power.assign(num_users, 1.0);
  m.circuit_power.assign(num_users, 1.0);
  m.rate_target.assign(num_users, 0.0);
  m.weight.assign(num_users, 1.0);
  return m;
}

void NetworkModel::validate() const {
  const std::size_t kn = num_users * num_blocks;
  if (num_users == 0 || num_blocks == 0) throw DimensionError("model: empty dimensions");
  if (direct_gain.size() != kn || self_gain.size() != kn || noise_power.size() != kn ||
      cross_gain.size() != num_users * kn) {
    throw DimensionError("model: coefficient array sizes disagree with K, N");
  }
  if (max_power.size() != num_users || circuit_power.size() != num_users ||
      rate_target.size() != num_users || weight.size() != num_users) {
    throw DimensionError("model: per-user array sizes disagree with K");
  }
  if (!(bandwidth_hz > 0.0)) throw Error("model: bandwidth must be positive");
  for (std::size_t i = 0; i < kn; ++i) {
    if (!(direct_gain[i] > 0.0) || !std::isfinite(direct_gain[i]))
      throw Error("model: direct gains must be strictly positive");
    if (!(self_gain[i] >= 0.0) || !std::isfinite(self_gain[i]))
      throw Error("model: self gains must be nonnegative");
    if (!(noise_power[i] > 0.0) || !std::isfinite(noise_power[i]))
      throw Error("model: noise powers must be strictly positive");
  }
  for (std::size_t k = 0; k < num_users; ++k) {
    for (std::size_t j = 0; j < num_users; ++j) {
      if (j == k) continue;
      for (std::size_t n = 0; n < num_blocks; ++n) {
        if (!(cross(k, j, n) >= 0.0) || !std::isfinite(cross(k, j, n)))
          throw Error("model: cross gains must be nonnegative");
      }
    }
    if (!(max_power[k] > 0.0)) throw Error("model: power budgets must be positive");
    if (!(circuit_power[k] > 0.0)) throw Error("model: circuit powers must be positive");
    if (!(rate_target[k] >= 0.0)) throw Error("model: rate targets must be nonnegative");
    if (!(weight[k] > 0.0)) throw Error("model: weights must be positive");
  }
}

double PowerAllocation::user_total(std::size_t k) const {
  double total = 0.0;
  for (std::size_t n = 0; n < num_blocks; ++n) total += at(k, n);
  return total;
}

double PowerAllocation::total() const {
  double total = 0.0;
  for (double v : value) total += v;
  return total;
}

PowerAllocation PowerAllocation::zeros(std::size_t num_users, std::size_t num_blocks) {
  PowerAllocation p;
  p.num_users = num_users;
  p.num_blocks = num_blocks;
  p.value.assign(num_users * num_blocks, 0.0);
  return p;
}

PowerAllocation PowerAllocation::budget_fraction(const NetworkModel& model, double fraction) {
  PowerAllocation p = zeros(model.num_users, model.num_blocks);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    const double per_block = fraction * model.max_power[k] / static_cast<double>(model.num_blocks);
    for (std::size_t n = 0; n < model.num_blocks; ++n) p.at(k, n) = per_block;
  }
  return p;
}

namespace {

void check_dims(const NetworkModel& model, const PowerAllocation& p) {
  if (p.num_users != model.num_users || p.num_blocks != model.num_blocks ||
      p.value.size() != model.num_users * model.num_blocks) {
    throw DimensionError("power allocation does not match model dimensions");
  }
}

}  // namespace

double sinr(const NetworkModel& model, const PowerAllocation& p, std::size_t k, std::size_t n) {
  check_dims(model, p);
  double denom = model.noise(k, n) + model.self(k, n) * p.at(k, n);
  for (std::size_t j = 0; j < model.num_users; ++j) {
    if (j == k) continue;
    denom += model.cross(k, j, n) * p.at(j, n);
  }
  return model.direct(k, n) * p.at(k, n) / denom;
}

double equivalent_gain(const NetworkModel& model, const PowerAllocation& p, std::size_t k,
                       std::size_t n) {
  check_dims(model, p);
  double denom = model.noise(k, n);
  for (std::size_t j = 0; j < model.num_users; ++j) {
    if (j == k) continue;
    denom += model.cross(k, j, n) * p.at(j, n);
  }
  return model.direct(k, n) / denom;
}

double sinr_ceiling(const NetworkModel& model, std::size_t k, std::size_t n) {
  const double self = model.self(k, n);
  if (self == 0.0) return kInfinity;
  return model.direct(k, n) / self;
}

double sinr_from_gain(double gain, double ceiling, double power) {
  if (std::isinf(ceiling)) return gain * power;
  return ceiling * gain * power / (ceiling + gain * power);
}

double power_for_sinr(double gain, double ceiling, double target) {
  if (target < 0.0) throw UnreachableSinrError("power_for_sinr: negative SINR target");
  if (target == 0.0) return 0.0;
  if (!(target < ceiling)) {
    throw UnreachableSinrError("power_for_sinr: target at or above the SINR ceiling");
  }
  if (std::isinf(ceiling)) return target / gain;
  return (target / gain) / (1.0 - target / ceiling);
}

LinkState link_state(const NetworkModel& model, const PowerAllocation& p) {
  check_dims(model, p);
  LinkState s;
  s.num_users = model.num_users;
  s.num_blocks = model.num_blocks;
  const std::size_t kn = model.num_users * model.num_blocks;
  s.equivalent_gain.resize(kn);
  s.sinr_ceiling.resize(kn);
  s.sinr.resize(kn);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    for (std::size_t n = 0; n < model.num_blocks; ++n) {
      const std::size_t idx = k * model.num_blocks + n;
      s.equivalent_gain[idx] = equivalent_gain(model, p, k, n);
      s.sinr_ceiling[idx] = sinr_ceiling(model, k, n);
      s.sinr[idx] = sinr(model, p, k, n);
    }
  }
  return s;
}

double user_spectral_rate(const NetworkModel& model, const PowerAllocation& p, std::size_t k) {
  double rate = 0.0;
  for (std::size_t n = 0; n < model.num_blocks; ++n) rate += std::log2(1.0 + sinr(model, p, k, n));
  return rate;
}

double user_rate(const NetworkModel& model, const PowerAllocation& p, std::size_t k) {
  return model.bandwidth_hz * user_spectral_rate(model, p, k);
}

double user_ee(const NetworkModel& model, const PowerAllocation& p, std::size_t k) {
  return user_rate(model, p, k) / (model.circuit_power[k] + p.user_total(k));
}

double gee(const NetworkModel& model, const PowerAllocation& p) {
  double sum_rate = 0.0;
  for (std::size_t k = 0; k < model.num_users; ++k) sum_rate += user_rate(model, p, k);
  return sum_rate / (model.total_circuit_power() + p.total());
}

double min_weighted_ee(const NetworkModel& model, const PowerAllocation& p) {
  double best = kInfinity;
  for (std::size_t k = 0; k < model.num_users; ++k) {
    best = std::min(best, model.weight[k] * user_ee(model, p, k));
  }
  return best;
}

FeasibilityCheck is_feasible_point(const NetworkModel& model, const PowerAllocation& p,
                                   double tol) {
  check_dims(model, p);
  FeasibilityCheck out;
  out.feasible = true;
  out.budget_slack.resize(model.num_users);
  out.rate_slack.resize(model.num_users);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    out.budget_slack[k] = model.max_power[k] - p.user_total(k);
    out.rate_slack[k] = user_spectral_rate(model, p, k) - model.rate_target[k];
    const double budget_tol = tol * std::max(1.0, model.max_power[k]);
    const double rate_tol = tol * std::max(1.0, model.rate_target[k]);
    if (out.budget_slack[k] < -budget_tol || out.rate_slack[k] < -rate_tol) out.feasible = false;
  }
  return out;
}

}  // namespace eepc
