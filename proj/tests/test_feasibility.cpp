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

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "eepc/errors.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/model.hpp"
#include "eepc/rng.hpp"
#include "eepc/scenario.hpp"
#include "oracles.hpp"

using namespace eepc;

TEST_SUITE_BEGIN("feasibility");

namespace {

// Dense eigenvalue oracle, independent of the power-iteration path.
double eigen_spectral_radius(const linalg::Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  }
  const Eigen::VectorXcd eigenvalues = Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    radius = std::max(radius, std::abs(eigenvalues[i]));
  }
  return radius;
}

NetworkModel symmetric_two_user(double coupling_ratio) {
  // Parameters chosen so cross * s_min / (direct - self * s_min) equals the
  // requested ratio with s_min = 1 (target rate 1 bit/s/Hz).
  NetworkModel m = NetworkModel::sized(2, 1);
  for (std::size_t k = 0; k < 2; ++k) {
    m.direct(k, 0) = 2.0;
    m.self(k, 0) = 1.0;
    m.noise(k, 0) = 1.0;
    m.rate_target[k] = 1.0;  // s_min = 1, margin = 1
    m.cross(k, 1 - k, 0) = coupling_ratio;
    m.max_power[k] = 100.0;
  }
  return m;
}

}  // namespace

TEST_CASE("coupling system entries") {
  // Single user: empty coupling, noise-driven base power.
  NetworkModel single = NetworkModel::sized(1, 1);
  single.direct(0, 0) = 2.0;
  single.self(0, 0) = 0.5;
  single.noise(0, 0) = 3.0;
  single.rate_target[0] = 1.0;  // s_min = 1
  const FeasibilitySystem sys1 = build_feasibility_system(single);
  CHECK(sys1.coupling(0, 0) == 0.0);
  CHECK(sys1.base_power[0] == doctest::Approx(3.0 * 1.0 / (2.0 - 0.5)));
  CHECK(sys1.required_sinr[0] == doctest::Approx(1.0));

  const FeasibilitySystem sys2 = build_feasibility_system(symmetric_two_user(0.5));
  CHECK(sys2.coupling(0, 1) == doctest::Approx(0.5));
  CHECK(sys2.coupling(1, 0) == doctest::Approx(0.5));
  CHECK(sys2.coupling(0, 0) == 0.0);
}

TEST_CASE("coupling system rejects targets at the SINR ceiling") {
  NetworkModel m = NetworkModel::sized(1, 1);
  m.direct(0, 0) = 2.0;
  m.self(0, 0) = 1.0;  // ceiling 2, max rate log2(3)
  m.rate_target[0] = std::log2(3.0) + 0.01;
  CHECK_THROWS_AS(build_feasibility_system(m), TargetExceedsMaxSinrError);
  // Just below the pole the entries blow up but stay finite.
  m.rate_target[0] = std::log2(3.0) - 1e-9;
  const FeasibilitySystem sys = build_feasibility_system(m);
  CHECK(sys.base_power[0] > 1e6);
}

TEST_CASE("spectral radius closed forms") {
  linalg::Matrix sym(2, 2);
  sym(0, 1) = 0.5;
  sym(1, 0) = 0.5;
  CHECK(spectral_radius(sym).value == doctest::Approx(0.5).epsilon(1e-9));

  const linalg::Matrix zero(3, 3);
  const SpectralRadiusResult z = spectral_radius(zero);
  CHECK(z.value == 0.0);
  CHECK(z.converged);

  // Asymmetric periodic pair: radius sqrt(0.25) = 0.5.
  linalg::Matrix per(2, 2);
  per(0, 1) = 1.0;
  per(1, 0) = 0.25;
  CHECK(spectral_radius(per).value == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("spectral radius matches the dense eigenvalue oracle") {
  RandomStream rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.next_u64() % 5;
    linalg::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.log_uniform(1e-3, 2.0);
      }
    }
    const SpectralRadiusResult mine = spectral_radius(a, 1e-12);
    const double oracle = eigen_spectral_radius(a);
    CHECK(mine.converged);
    CHECK(mine.value == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("minimum power vector") {
  linalg::Matrix f(2, 2);
  f(0, 1) = 0.5;
  f(1, 0) = 0.5;
  const std::vector<double> x = min_power_vector(f, {1.0, 1.0});
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(2.0));

  const linalg::Matrix zero(3, 3);
  const std::vector<double> same = min_power_vector(zero, {1.0, 2.0, 3.0});
  CHECK(same[0] == doctest::Approx(1.0));
  CHECK(same[2] == doctest::Approx(3.0));

  linalg::Matrix too_strong(2, 2);
  too_strong(0, 1) = 1.1;
  too_strong(1, 0) = 1.1;
  CHECK_THROWS_AS(min_power_vector(too_strong, {1.0, 1.0}), InfeasibleError);
}

TEST_CASE("minimum power vector agrees with fixed-point iteration") {
  RandomStream rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4;
    linalg::Matrix f(n, n);
    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = rng.log_uniform(0.1, 2.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) f(i, j) = rng.uniform(0.0, 0.2);
      }
    }
    if (!(spectral_radius(f).value < 1.0)) continue;
    const std::vector<double> direct = min_power_vector(f, base);
    std::vector<double> iter(n, 0.0);
    for (int it = 0; it < 20000; ++it) {
      std::vector<double> next = linalg::multiply(f, iter);
      for (std::size_t i = 0; i < n; ++i) next[i] += base[i];
      iter = std::move(next);
    }
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(direct[i] == doctest::Approx(iter[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("exact single-block verdicts") {
  // No targets: trivially feasible with zero minimum power.
  NetworkModel free = NetworkModel::sized(2, 1);
  const FeasibilityReport r0 = check_feasible_single_block(free);
  CHECK(r0.feasible);
  CHECK(r0.min_power[0] == 0.0);

  // Budget below the minimum power vector.
  NetworkModel tight = symmetric_two_user(0.5);
  const FeasibilityReport ok = check_feasible_single_block(tight);
  CHECK(ok.feasible);
  for (double& p : tight.max_power) p = 0.9 * ok.min_power[0];
  const FeasibilityReport no = check_feasible_single_block(tight);
  CHECK_FALSE(no.feasible);
  CHECK(no.spectral_radius < 1.0);

  // Unreachable target reported as infeasible rather than thrown.
  NetworkModel pole = NetworkModel::sized(1, 1);
  pole.direct(0, 0) = 2.0;
  pole.self(0, 0) = 1.0;
  pole.rate_target[0] = 5.0;
  CHECK_FALSE(check_feasible_single_block(pole).feasible);
}

TEST_CASE("minimum power meets every target with equality") {
  RandomStream rng(79);
  int feasible_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2 + rng.next_u64() % 3;
    sc.rate_target_max = 0.8;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    const FeasibilityReport report = check_feasible_single_block(m);
    if (!report.feasible) continue;
    ++feasible_count;
    PowerAllocation p = PowerAllocation::zeros(m.num_users, 1);
    for (std::size_t k = 0; k < m.num_users; ++k) p.at(k, 0) = report.min_power[k];
    for (std::size_t k = 0; k < m.num_users; ++k) {
      if (m.rate_target[k] > 0.0) {
        CHECK(user_spectral_rate(m, p, k) ==
              doctest::Approx(m.rate_target[k]).epsilon(1e-8));
      } else {
        CHECK(p.at(k, 0) == 0.0);
      }
    }
  }
  CHECK(feasible_count > 20);
}

TEST_CASE("exact verdict equals the clipped fixed-point oracle") {
  RandomStream rng(83);
  for (int trial = 0; trial < 300; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2 + rng.next_u64() % 3;
    sc.rate_target_max = 1.2;
    sc.cross_gain_max = 0.4;  // coupling strong enough to make some infeasible
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    CHECK(check_feasible_single_block(m).feasible == testing::fixed_point_feasible(m));
  }
}

TEST_CASE("exact verdict against a two-user brute-force power grid") {
  RandomStream rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2;
    sc.rate_target_max = 1.0;
    sc.cross_gain_max = 0.5;
    sc.max_power_min = 0.3;
    sc.max_power_max = 3.0;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);

    bool grid_feasible = false;
    PowerAllocation p = PowerAllocation::zeros(2, 1);
    for (int i = 0; i <= 400 && !grid_feasible; ++i) {
      p.at(0, 0) = m.max_power[0] * i / 400.0;
      for (int j = 0; j <= 400 && !grid_feasible; ++j) {
        p.at(1, 0) = m.max_power[1] * j / 400.0;
        grid_feasible = is_feasible_point(m, p, 1e-12).feasible;
      }
    }
    const bool exact = check_feasible_single_block(m).feasible;
    // The coarse grid can only under-approximate the feasible set.
    if (grid_feasible) CHECK(exact);
    if (!exact) CHECK_FALSE(grid_feasible);
  }
}

TEST_CASE("strategy-set condition") {
  NetworkModel free = NetworkModel::sized(3, 1);
  for (bool ok : strategy_set_condition(free)) CHECK(ok);

  // Single user: reduces to budget >= noise-driven minimum power.
  NetworkModel single = NetworkModel::sized(1, 1);
  single.direct(0, 0) = 2.0;
  single.self(0, 0) = 0.5;
  single.noise(0, 0) = 3.0;
  single.rate_target[0] = 1.0;
  single.max_power[0] = 3.0 / 1.5;  // exactly the base power
  CHECK(strategy_set_condition(single)[0]);
  single.max_power[0] *= 0.99;
  CHECK_FALSE(strategy_set_condition(single)[0]);
}

TEST_CASE("strategy-set condition implies exact feasibility") {
  RandomStream rng(97);
  int implied = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2 + rng.next_u64() % 3;
    sc.rate_target_max = 1.0;
    sc.cross_gain_max = 0.3;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    bool all_ok = true;
    for (bool ok : strategy_set_condition(m)) all_ok &= ok;
    if (!all_ok) continue;
    ++implied;
    CHECK(check_feasible_single_block(m).feasible);
  }
  CHECK(implied > 20);
}

TEST_CASE("multi-block sufficient test") {
  // No targets: always feasible.
  SyntheticScenario sc;
  sc.num_users = 2;
  sc.num_blocks = 3;
  sc.rate_target_max = 0.0;
  sc.seed = 5;
  NetworkModel m = generate(sc);
  CHECK(check_feasible_multi_block(m).feasible);

  // Unreachable targets under a tiny budget.
  m.rate_target = {3.0, 3.0};
  for (double& p : m.max_power) p = 1e-9;
  CHECK_FALSE(check_feasible_multi_block(m).feasible);
}

TEST_CASE("multi-block test is sufficient for the exact single-block one") {
  RandomStream rng(101);
  int agreed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2 + rng.next_u64() % 2;
    sc.rate_target_max = 1.0;
    sc.cross_gain_max = 0.3;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    const BlockFeasibilityReport convex = check_feasible_multi_block(m);
    if (convex.feasible) {
      CHECK(check_feasible_single_block(m).feasible);
      ++agreed;
      // The witness point itself satisfies the true constraints.
      CHECK(is_feasible_point(m, convex.witness, 1e-6).feasible);
    }
  }
  CHECK(agreed > 10);
}

TEST_SUITE_END();
