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

#include "eepc/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "eepc/errors.hpp"
#include "eepc/units.hpp"

namespace eepc {

double PathLossModel::gain(double distance_m) const {
  if (!(distance_m > 0.0)) throw Error("path loss: distance must be positive");
  const double loss_db = reference_db + 10.0 * exponent * std::log10(distance_m);
  return db_to_linear(-loss_db);
}

std::vector<std::complex<double>> rayleigh_channel(RandomStream& rng, std::size_t dims,
                                                   double distance_m, const PathLossModel& pl) {
  const double variance = pl.gain(distance_m);
  std::vector<std::complex<double>> h(dims);
  for (std::size_t i = 0; i < dims; ++i) h[i] = rng.complex_normal(variance);
  return h;
}

std::vector<std::complex<double>> rayleigh_channel(std::uint64_t seed, std::size_t dims,
                                                   double distance_m, const PathLossModel& pl) {
  RandomStream rng(seed);
  return rayleigh_channel(rng, dims, distance_m, pl);
}

namespace {

double norm_sq(std::span<const std::complex<double>> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

std::complex<double> inner(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

/// Uniform draw over an annulus (uniform in area).
double annulus_radius(RandomStream& rng, double r_min, double r_max) {
  const double u = rng.uniform();
  return std::sqrt(u * (r_max * r_max - r_min * r_min) + r_min * r_min);
}

}  // namespace

NetworkModel generate(const MassiveMimoScenario& sc) {
  if (sc.num_users == 0 || sc.num_antennas == 0) throw Error("massive mimo: empty dimensions");
  if (!(sc.bs_error_magnitude >= 0.0 && sc.bs_error_magnitude < 1.0)) {
    throw Error("massive mimo: receiver error magnitude must be in [0, 1)");
  }
  RandomStream rng(sc.seed);
  const std::size_t kk = sc.num_users;
  const std::size_t mm = sc.num_antennas;

  std::vector<double> distance(kk);
  for (std::size_t k = 0; k < kk; ++k) {
    distance[k] = annulus_radius(rng, sc.min_distance_m, sc.drop_radius_m);
  }
  std::vector<std::vector<std::complex<double>>> h(kk);
  for (std::size_t k = 0; k < kk; ++k) h[k] = rayleigh_channel(rng, mm, distance[k], sc.path_loss);

  const double noise = db_to_linear(sc.noise_figure_db) * sc.bandwidth_hz *
                       dbm_to_watts(sc.noise_density_dbm_hz);

  NetworkModel m = NetworkModel::sized(kk, 1);
  m.bandwidth_hz = sc.bandwidth_hz;
  for (std::size_t k = 0; k < kk; ++k) {
    m.max_power[k] = dbw_to_watts(sc.max_power_dbw);
    m.circuit_power[k] = dbm_to_watts(sc.circuit_power_dbm);
  }

  if (sc.csi_mode == MassiveMimoScenario::CsiMode::kPerfectCsiBsImpairments) {
    const double err_sq = sc.bs_error_magnitude * sc.bs_error_magnitude;
    for (std::size_t k = 0; k < kk; ++k) {
      const double hk_sq = norm_sq(h[k]);
      m.direct(k, 0) = hk_sq * hk_sq;
      double fourth = 0.0;
      for (std::size_t a = 0; a < mm; ++a) fourth += std::norm(h[k][a]) * std::norm(h[k][a]);
      m.self(k, 0) = err_sq * fourth;
      m.noise(k, 0) = noise * hk_sq;
      for (std::size_t j = 0; j < kk; ++j) {
        if (j == k) continue;
        double distorted = 0.0;
        for (std::size_t a = 0; a < mm; ++a) distorted += std::norm(h[j][a]) * std::norm(h[k][a]);
        m.cross(k, j, 0) = std::norm(inner(h[k], h[j])) + err_sq * distorted;
      }
    }
  } else {
    // Pilot-based channel estimates: coefficients follow the estimate
    // variance rho = d / (tau + d), with the estimation error feeding the
    // self term and the full gains feeding the cross terms.
    for (std::size_t k = 0; k < kk; ++k) {
      const double d_k = sc.path_loss.gain(distance[k]);
      const double rho_k = d_k / (sc.pilot_parameter + d_k);
      m.direct(k, 0) = rho_k * rho_k;
      m.self(k, 0) = d_k * rho_k;
      m.noise(k, 0) = noise * rho_k;
      for (std::size_t j = 0; j < kk; ++j) {
        if (j == k) continue;
        m.cross(k, j, 0) = sc.path_loss.gain(distance[j]) * rho_k;
      }
    }
  }
  set_rate_targets_from_percentage(m, sc.rate_percentage);
  m.validate();
  return m;
}

NetworkModel generate(const RelayOfdmaScenario& sc) {
  if (sc.num_users == 0 || sc.num_subcarriers == 0 || sc.num_cells == 0) {
    throw Error("relay ofdma: empty dimensions");
  }
  RandomStream rng(sc.seed);
  const std::size_t kk = sc.num_users;
  const std::size_t nn = sc.num_subcarriers;
  const std::size_t mm = sc.num_antennas;

  const double noise = db_to_linear(sc.noise_figure_db) * sc.bandwidth_hz *
                       dbm_to_watts(sc.noise_density_dbm_hz);
  const double relay_noise = noise;  // same receiver noise figure at the relay

  // User-to-relay scalar channels per subcarrier, and relay-to-BS vector
  // channels per (serving cell, subcarrier); user k is served by cell k mod S.
  std::vector<double> user_relay_gain(kk * nn);
  for (std::size_t k = 0; k < kk; ++k) {
    const double d = rng.uniform(sc.user_relay_min_m, sc.user_relay_max_m);
    for (std::size_t n = 0; n < nn; ++n) {
      const auto ch = rayleigh_channel(rng, 1, d, sc.path_loss);
      user_relay_gain[k * nn + n] = std::norm(ch[0]);
    }
  }
  std::vector<std::vector<std::complex<double>>> relay_bs(sc.num_cells * nn);
  for (std::size_t cell = 0; cell < sc.num_cells; ++cell) {
    for (std::size_t n = 0; n < nn; ++n) {
      relay_bs[cell * nn + n] = rayleigh_channel(rng, mm, sc.relay_bs_distance_m, sc.path_loss);
    }
  }

  NetworkModel m = NetworkModel::sized(kk, nn);
  m.bandwidth_hz = sc.bandwidth_hz;
  for (std::size_t k = 0; k < kk; ++k) {
    m.max_power[k] = dbw_to_watts(sc.max_power_dbw);
    m.circuit_power[k] = dbm_to_watts(sc.circuit_power_dbm);
  }

  for (std::size_t k = 0; k < kk; ++k) {
    const std::size_t cell = k % sc.num_cells;
    for (std::size_t n = 0; n < nn; ++n) {
      // Maximum-ratio combining on the relay-to-BS link: the filter equals
      // the channel, so |c^H h|^2 = ||h||^4 and ||c||^2 = ||h||^2.
      const double hop2 = norm_sq(relay_bs[cell * nn + n]);
      const double combined = sc.relay_power_w * hop2 * hop2;  // p_r |c^H h|^2
      const double leak = noise * hop2;                        // sigma_bs^2 ||c||^2
      const double g_k = user_relay_gain[k * nn + n];

      m.direct(k, n) = combined * g_k;
      m.self(k, n) = leak * g_k;
      m.noise(k, n) = relay_noise * (combined + leak);
      for (std::size_t j = 0; j < kk; ++j) {
        if (j == k) continue;
        m.cross(k, j, n) = (combined + leak) * user_relay_gain[j * nn + n];
      }
    }
  }
  set_rate_targets_from_percentage(m, sc.rate_percentage);
  // A silent relay yields zero direct gains: every SINR is zero. The model
  // is returned unvalidated as a degenerate diagnostic case.
  if (sc.relay_power_w > 0.0) m.validate();
  return m;
}

NetworkModel generate(const SyntheticScenario& sc) {
  RandomStream rng(sc.seed);
  NetworkModel m = NetworkModel::sized(sc.num_users, sc.num_blocks);
  m.bandwidth_hz = sc.bandwidth_hz;
  for (std::size_t k = 0; k < sc.num_users; ++k) {
    for (std::size_t n = 0; n < sc.num_blocks; ++n) {
      m.direct(k, n) = rng.log_uniform(sc.direct_gain_min, sc.direct_gain_max);
      m.self(k, n) = rng.log_uniform(sc.self_gain_min, sc.self_gain_max);
      m.noise(k, n) = rng.log_uniform(sc.noise_min, sc.noise_max);
      for (std::size_t j = 0; j < sc.num_users; ++j) {
        if (j != k) m.cross(k, j, n) = rng.log_uniform(sc.cross_gain_min, sc.cross_gain_max);
      }
    }
    m.max_power[k] = rng.log_uniform(sc.max_power_min, sc.max_power_max);
    m.circuit_power[k] = rng.log_uniform(sc.circuit_power_min, sc.circuit_power_max);
    m.rate_target[k] = sc.rate_target_max > 0.0 ? rng.uniform(0.0, sc.rate_target_max) : 0.0;
  }
  m.validate();
  return m;
}

std::vector<double> rate_targets_from_percentage(const NetworkModel& model,
                                                 std::span<const double> percentage) {
  if (percentage.size() != model.num_users) {
    throw DimensionError("rate_targets_from_percentage: one percentage per user expected");
  }
  std::vector<double> targets(model.num_users, 0.0);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    if (!(percentage[k] > 0.0)) continue;
    double ceiling_rate = 0.0;
    for (std::size_t n = 0; n < model.num_blocks; ++n) {
      const double c = sinr_ceiling(model, k, n);
      if (std::isinf(c)) {
        throw TargetUndefinedError(
            "rate_targets_from_percentage: infinite SINR ceiling, percentage target undefined");
      }
      ceiling_rate += std::log2(1.0 + c);
    }
    targets[k] = percentage[k] / 100.0 * ceiling_rate;
  }
  return targets;
}

void set_rate_targets_from_percentage(NetworkModel& model, double percentage) {
  std::vector<double> pct(model.num_users, percentage);
  model.rate_target = rate_targets_from_percentage(model, pct);
}

}  // namespace eepc
