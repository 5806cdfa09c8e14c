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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "eepc/model.hpp"
#include "eepc/rng.hpp"

// Scenario generators: every generator is a pure function of its
// configuration (seed included), producing bit-identical models on repeat
// calls. The synthetic generator draws abstract coefficients directly; the
// two 5G case studies draw Rayleigh-faded channels under a log-distance
// path-loss law and assemble the SINR coefficients from them.

namespace eepc {

struct PathLossModel {
  double exponent = 3.5;
  double reference_db = 35.0;  // loss at 1 m

  /// Linear power gain at `distance_m` > 0.
  double gain(double distance_m) const;
};

/// i.i.d. circularly-symmetric complex Gaussian channel vector with per-entry
/// variance equal to the path-loss gain. Throws on non-positive distance.
std::vector<std::complex<double>> rayleigh_channel(RandomStream& rng, std::size_t dims,
                                                   double distance_m,
                                                   const PathLossModel& pl = {});

/// Convenience overload drawing from a fresh stream seeded with `seed`.
std::vector<std::complex<double>> rayleigh_channel(std::uint64_t seed, std::size_t dims,
                                                   double distance_m,
                                                   const PathLossModel& pl = {});

struct MassiveMimoScenario {
  std::size_t num_users = 5;
  std::size_t num_antennas = 50;
  double drop_radius_m = 250.0;
  double min_distance_m = 35.0;
  double bs_error_magnitude = 0.1;  // receiver hardware error in [0, 1)
  double pilot_parameter = 1e-2;    // used by the estimated-CSI variant
  double bandwidth_hz = 1e6;
  double noise_figure_db = 3.0;
  double noise_density_dbm_hz = -174.0;
  double circuit_power_dbm = 10.0;
  double max_power_dbw = -20.0;
  double rate_percentage = 0.0;  // targets as % of each user's ceiling rate
  enum class CsiMode {
    kPerfectCsiBsImpairments,  // exact channels, hardware error at the receiver
    kEstimatedCsi,             // pilot-based estimates, no hardware error
  };
  CsiMode csi_mode = CsiMode::kPerfectCsiBsImpairments;
  PathLossModel path_loss;
  std::uint64_t seed = 1;
};

/// Single-cell uplink with maximum-ratio combining; one resource block.
NetworkModel generate(const MassiveMimoScenario& scenario);

struct RelayOfdmaScenario {
  std::size_t num_cells = 3;
  std::size_t num_users = 3;
  std::size_t num_antennas = 3;
  std::size_t num_subcarriers = 16;
  double relay_power_w = 0.1;  // per subcarrier
  double user_relay_min_m = 100.0;
  double user_relay_max_m = 300.0;
  double relay_bs_distance_m = 200.0;
  double bandwidth_hz = 180e3;
  double noise_figure_db = 3.0;
  double noise_density_dbm_hz = -174.0;
  double circuit_power_dbm = 10.0;
  double max_power_dbw = -20.0;
  double rate_percentage = 0.0;
  PathLossModel path_loss;
  std::uint64_t seed = 1;
};

/// Uplink through a shared normalize-and-forward relay to per-user base
/// stations with maximum-ratio combining; one block per subcarrier.
NetworkModel generate(const RelayOfdmaScenario& scenario);

struct SyntheticScenario {
  std::size_t num_users = 2;
  std::size_t num_blocks = 1;
  double direct_gain_min = 0.5, direct_gain_max = 2.0;
  double cross_gain_min = 0.005, cross_gain_max = 0.05;
  double self_gain_min = 0.005, self_gain_max = 0.05;
  double noise_min = 0.5, noise_max = 2.0;
  double max_power_min = 1.0, max_power_max = 10.0;
  double circuit_power_min = 0.2, circuit_power_max = 2.0;
  double rate_target_max = 1.0;  // bit/s/Hz, drawn uniformly from [0, max]
  double bandwidth_hz = 1.0;
  std::uint64_t seed = 1;
};

/// Abstract random instance with log-uniform coefficients; unit bandwidth.
NetworkModel generate(const SyntheticScenario& scenario);

/// Rate targets as a percentage of each user's ceiling rate
/// sum_n log2(1 + ceiling_kn). Percentages of zero give zero targets; a
/// positive percentage with an infinite ceiling throws TargetUndefinedError.
std::vector<double> rate_targets_from_percentage(const NetworkModel& model,
                                                 std::span<const double> percentage);

/// Applies a single percentage to every user and stores the targets.
void set_rate_targets_from_percentage(NetworkModel& model, double percentage);

}  // namespace eepc
