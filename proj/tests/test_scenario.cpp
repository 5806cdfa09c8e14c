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

#include <cmath>
#include <complex>

#include <doctest.h>

#include "eepc/errors.hpp"
#include "eepc/model.hpp"
#include "eepc/scenario.hpp"
#include "eepc/units.hpp"

using namespace eepc;

TEST_SUITE_BEGIN("scenario");

TEST_CASE("channel draws are deterministic per seed") {
  const auto a = rayleigh_channel(42, 8, 120.0);
  const auto b = rayleigh_channel(42, 8, 120.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  const auto c = rayleigh_channel(43, 8, 120.0);
  CHECK(a[0] != c[0]);
}

TEST_CASE("channel power matches the path-loss gain") {
  const PathLossModel pl;
  RandomStream rng(7);
  const double distance = 180.0;
  double acc = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) acc += std::norm(rng.complex_normal(pl.gain(distance)));
  const double mean = acc / draws;
  CHECK(mean == doctest::Approx(pl.gain(distance)).epsilon(0.03));
}

TEST_CASE("channel rejects non-positive distances") {
  CHECK_THROWS_AS(rayleigh_channel(1, 4, 0.0), Error);
  CHECK_THROWS_AS(rayleigh_channel(1, 4, -3.0), Error);
}

TEST_CASE("massive mimo generation is bit-deterministic") {
  MassiveMimoScenario sc;
  sc.num_users = 4;
  sc.num_antennas = 16;
  sc.rate_percentage = 20.0;
  sc.seed = 2024;
  const NetworkModel a = generate(sc);
  const NetworkModel b = generate(sc);
  CHECK(a.direct_gain == b.direct_gain);
  CHECK(a.self_gain == b.self_gain);
  CHECK(a.cross_gain == b.cross_gain);
  CHECK(a.noise_power == b.noise_power);
  CHECK(a.rate_target == b.rate_target);
  sc.seed = 2025;
  const NetworkModel c = generate(sc);
  CHECK(a.direct_gain != c.direct_gain);
}

TEST_CASE("single-antenna single-user coefficients reduce to closed algebra") {
  MassiveMimoScenario sc;
  sc.num_users = 1;
  sc.num_antennas = 1;
  sc.bs_error_magnitude = 0.2;
  sc.seed = 9;
  const NetworkModel m = generate(sc);
  // With one antenna: direct = |h|^4 and self = err^2 |h|^4, so the SINR
  // ceiling collapses to 1/err^2 whatever the channel draw was.
  CHECK(sinr_ceiling(m, 0, 0) == doctest::Approx(1.0 / (0.2 * 0.2)).epsilon(1e-12));
  const double h2 = std::sqrt(m.direct(0, 0));  // |h|^2
  CHECK(m.self(0, 0) == doctest::Approx(0.04 * h2 * h2).epsilon(1e-12));
}

TEST_CASE("receiver noise follows the configured density") {
  MassiveMimoScenario sc;
  sc.num_users = 2;
  sc.num_antennas = 4;
  sc.seed = 31;
  const NetworkModel m = generate(sc);
  // sigma^2 = figure * bandwidth * density before the channel-norm scaling;
  // 3 dB, 1 MHz, -174 dBm/Hz gives 7.94e-15 W.
  const double base = db_to_linear(3.0) * 1e6 * dbm_to_watts(-174.0);
  CHECK(base == doctest::Approx(7.94e-15).epsilon(1e-3));
  // Recover the channel norm from direct = |h^H h|^2.
  const double h2 = std::sqrt(m.direct(0, 0));
  CHECK(m.noise(0, 0) == doctest::Approx(base * h2).epsilon(1e-10));
}

TEST_CASE("no receiver error means no self-interference") {
  MassiveMimoScenario sc;
  sc.num_users = 3;
  sc.num_antennas = 8;
  sc.bs_error_magnitude = 0.0;
  sc.seed = 17;
  const NetworkModel m = generate(sc);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(m.self(k, 0) == 0.0);
    CHECK(std::isinf(sinr_ceiling(m, k, 0)));
  }
}

TEST_CASE("estimated-csi variant populates pilot-based coefficients") {
  MassiveMimoScenario sc;
  sc.num_users = 2;
  sc.num_antennas = 8;
  sc.csi_mode = MassiveMimoScenario::CsiMode::kEstimatedCsi;
  sc.rate_percentage = 10.0;
  sc.seed = 77;
  const NetworkModel m = generate(sc);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(m.self(k, 0) > 0.0);
    // direct = rho^2 and self = d * rho with rho = d / (tau + d), so the
    // estimate variance must be consistent with the recovered large-scale
    // gain and the ceiling must equal 1 / (tau + d).
    const double rho = std::sqrt(m.direct(k, 0));
    const double d = m.self(k, 0) / rho;
    CHECK(rho == doctest::Approx(d / (sc.pilot_parameter + d)).epsilon(1e-10));
    CHECK(sinr_ceiling(m, k, 0) ==
          doctest::Approx(1.0 / (sc.pilot_parameter + d)).epsilon(1e-10));
    CHECK(m.rate_target[k] > 0.0);
  }
}

TEST_CASE("relay generation determinism and structure") {
  RelayOfdmaScenario sc;
  sc.num_users = 3;
  sc.num_subcarriers = 4;
  sc.seed = 404;
  const NetworkModel a = generate(sc);
  const NetworkModel b = generate(sc);
  CHECK(a.direct_gain == b.direct_gain);
  CHECK(a.cross_gain == b.cross_gain);
  a.validate();
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(a.self(k, n) > 0.0);
      CHECK(a.noise(k, n) > 0.0);
    }
  }
}

TEST_CASE("silent relay zeroes every direct gain") {
  RelayOfdmaScenario sc;
  sc.num_users = 2;
  sc.num_subcarriers = 2;
  sc.relay_power_w = 0.0;
  sc.seed = 11;
  const NetworkModel m = generate(sc);
  PowerAllocation p = PowerAllocation::zeros(2, 2);
  for (double& v : p.value) v = 0.01;
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t n = 0; n < 2; ++n) {
      CHECK(m.direct(k, n) == 0.0);
      CHECK(sinr(m, p, k, n) == 0.0);
    }
  }
}

TEST_CASE("single-antenna relay coefficients satisfy the scalar reduction") {
  RelayOfdmaScenario sc;
  sc.num_cells = 1;
  sc.num_users = 1;
  sc.num_antennas = 1;
  sc.num_subcarriers = 3;
  sc.seed = 50;
  const NetworkModel m = generate(sc);
  const double bs_noise = db_to_linear(sc.noise_figure_db) * sc.bandwidth_hz *
                          dbm_to_watts(sc.noise_density_dbm_hz);
  const double relay_noise = bs_noise;
  for (std::size_t n = 0; n < 3; ++n) {
    // With one antenna the filter is the scalar channel: writing
    // y = |h_bs|^2 there must exist y > 0 and a user gain x > 0 with
    //   noise   = relay_noise * (p_r y^2 + bs_noise y)
    //   self    = bs_noise * y * x
    //   direct  = p_r * y^2 * x.
    // Solve y from the noise row, x from the self row, check the direct row.
    const double a = sc.relay_power_w;
    const double bq = bs_noise;
    const double cq = -m.noise(0, n) / relay_noise;
    const double y = (-bq + std::sqrt(bq * bq - 4.0 * a * cq)) / (2.0 * a);
    REQUIRE(y > 0.0);
    const double x = m.self(0, n) / (bs_noise * y);
    CHECK(m.direct(0, n) == doctest::Approx(sc.relay_power_w * y * y * x).epsilon(1e-9));
  }
}

TEST_CASE("percentage rate targets") {
  NetworkModel m = NetworkModel::sized(1, 1);
  m.direct(0, 0) = 3.0;
  m.self(0, 0) = 1.0;  // ceiling 3, ceiling rate 2 bit/s/Hz
  const std::vector<double> half = rate_targets_from_percentage(m, std::vector<double>{50.0});
  CHECK(half[0] == doctest::Approx(1.0));
  const std::vector<double> zero = rate_targets_from_percentage(m, std::vector<double>{0.0});
  CHECK(zero[0] == 0.0);

  NetworkModel no_ceiling = NetworkModel::sized(1, 1);
  CHECK_THROWS_AS(rate_targets_from_percentage(no_ceiling, std::vector<double>{10.0}),
                  TargetUndefinedError);
  // Zero percentage is well defined even without a ceiling.
  CHECK(rate_targets_from_percentage(no_ceiling, std::vector<double>{0.0})[0] == 0.0);
}

TEST_CASE("multi-block percentage targets sum the per-block ceiling rates") {
  NetworkModel m = NetworkModel::sized(1, 2);
  m.direct(0, 0) = 3.0;
  m.self(0, 0) = 1.0;  // log2(4) = 2
  m.direct(0, 1) = 1.0;
  m.self(0, 1) = 1.0;  // log2(2) = 1
  const std::vector<double> targets = rate_targets_from_percentage(m, std::vector<double>{50.0});
  CHECK(targets[0] == doctest::Approx(1.5));
}

TEST_CASE("synthetic models validate and are deterministic") {
  SyntheticScenario sc;
  sc.num_users = 4;
  sc.num_blocks = 2;
  sc.seed = 600;
  const NetworkModel a = generate(sc);
  const NetworkModel b = generate(sc);
  a.validate();
  CHECK(a.direct_gain == b.direct_gain);
  CHECK(a.max_power == b.max_power);
}

TEST_SUITE_END();
