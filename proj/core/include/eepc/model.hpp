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

#include <cstddef>
#include <limits>
#include <vector>

// Interference-network data model and energy-efficiency metrics.
//
// The SINR of user k on resource block n is
//
//     direct_gain * p_kn
//     --------------------------------------------------------------
//     noise_power + self_gain * p_kn + sum_{j != k} cross_gain * p_jn
//
// All powers are linear watts, rates are bit/s, per-user rate targets are
// spectral (bit/s/Hz). NetworkModel and PowerAllocation are immutable value
// types as far as the library is concerned; every function here is pure.

namespace eepc {

struct NetworkModel {
  std::size_t num_users = 0;
  std::size_t num_blocks = 0;
  double bandwidth_hz = 1.0;

  std::vector<double> direct_gain;    // [k*N + n], > 0
  std::vector<double> self_gain;      // [k*N + n], >= 0
  std::vector<double> cross_gain;     // [(k*K + j)*N + n], diagonal j == k unused
  std::vector<double> noise_power;    // [k*N + n], watts, > 0
  std::vector<double> max_power;      // [k], watts, > 0
  std::vector<double> circuit_power;  // [k], watts, > 0
  std::vector<double> rate_target;    // [k], bit/s/Hz, >= 0
  std::vector<double> weight;         // [k], > 0

  double direct(std::size_t k, std::size_t n) const { return direct_gain[k * num_blocks + n]; }
  double self(std::size_t k, std::size_t n) const { return self_gain[k * num_blocks + n]; }
  double cross(std::size_t k, std::size_t j, std::size_t n) const {
    return cross_gain[(k * num_users + j) * num_blocks + n];
  }
  double noise(std::size_t k, std::size_t n) const { return noise_power[k * num_blocks + n]; }

  double& direct(std::size_t k, std::size_t n) { return direct_gain[k * num_blocks + n]; }
  double& self(std::size_t k, std::size_t n) { return self_gain[k * num_blocks + n]; }
  double& cross(std::size_t k, std::size_t j, std::size_t n) {
    return cross_gain[(k * num_users + j) * num_blocks + n];
  }
  double& noise(std::size_t k, std::size_t n) { return noise_power[k * num_blocks + n]; }

  /// Sum of per-user circuit powers.
  double total_circuit_power() const;

  /// Model with all gains zeroed and unit bandwidth/noise scaffolding.
  static NetworkModel sized(std::size_t num_users, std::size_t num_blocks);

  /// Checks dimensions and sign constraints; throws DimensionError or
  /// std::invalid_argument via Error subclasses on violation.
  void validate() const;
};

struct PowerAllocation {
  std::size_t num_users = 0;
  std::size_t num_blocks = 0;
  std::vector<double> value;  // [k*N + n], watts, >= 0

  double at(std::size_t k, std::size_t n) const { return value[k * num_blocks + n]; }
  double& at(std::size_t k, std::size_t n) { return value[k * num_blocks + n]; }

  double user_total(std::size_t k) const;
  double total() const;

  static PowerAllocation zeros(std::size_t num_users, std::size_t num_blocks);

  /// Every user transmits fraction * max_power, split equally across blocks.
  static PowerAllocation budget_fraction(const NetworkModel& model, double fraction);
};

/// Per-link derived state: equivalent gain, SINR ceiling, and achieved SINR.
/// sinr_ceiling is +inf where self_gain is zero.
struct LinkState {
  std::size_t num_users = 0;
  std::size_t num_blocks = 0;
  std::vector<double> equivalent_gain;  // per watt
  std::vector<double> sinr_ceiling;
  std::vector<double> sinr;

  double gain(std::size_t k, std::size_t n) const { return equivalent_gain[k * num_blocks + n]; }
  double ceiling(std::size_t k, std::size_t n) const { return sinr_ceiling[k * num_blocks + n]; }
  double value(std::size_t k, std::size_t n) const { return sinr[k * num_blocks + n]; }
};

/// SINR of user k on block n under allocation p.
double sinr(const NetworkModel& model, const PowerAllocation& p, std::size_t k, std::size_t n);

/// Equivalent channel gain of user k on block n: the SINR slope at zero
/// self-interference, direct_gain / (noise + cross interference).
double equivalent_gain(const NetworkModel& model, const PowerAllocation& p, std::size_t k,
                       std::size_t n);

/// Maximum achievable SINR of user k on block n (+inf when self_gain == 0).
double sinr_ceiling(const NetworkModel& model, std::size_t k, std::size_t n);

/// SINR expressed through the equivalent gain and the ceiling.
double sinr_from_gain(double gain, double ceiling, double power);

/// Inverse of sinr_from_gain: the power that achieves `target`.
/// Throws UnreachableSinrError when target >= ceiling.
double power_for_sinr(double gain, double ceiling, double target);

LinkState link_state(const NetworkModel& model, const PowerAllocation& p);

/// Achievable rate of user k in bit/s.
double user_rate(const NetworkModel& model, const PowerAllocation& p, std::size_t k);

/// Achievable rate of user k in bit/s/Hz (the form rate targets are stated in).
double user_spectral_rate(const NetworkModel& model, const PowerAllocation& p, std::size_t k);

/// Energy efficiency of user k in bit/joule.
double user_ee(const NetworkModel& model, const PowerAllocation& p, std::size_t k);

/// Global energy efficiency: sum rate over total consumed power, bit/joule.
double gee(const NetworkModel& model, const PowerAllocation& p);

/// min_k weight_k * user_ee_k.
double min_weighted_ee(const NetworkModel& model, const PowerAllocation& p);

struct FeasibilityCheck {
  bool feasible = false;
  std::vector<double> budget_slack;  // max_power - spent, watts
  std::vector<double> rate_slack;    // achieved - target, bit/s/Hz
};

/// Checks power budgets and rate targets with relative tolerance `tol`.
FeasibilityCheck is_feasible_point(const NetworkModel& model, const PowerAllocation& p,
                                   double tol = 1e-9);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace eepc
