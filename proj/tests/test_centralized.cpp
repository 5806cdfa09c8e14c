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
#include <sstream>

#include <doctest.h>

#include "eepc/centralized.hpp"
#include "eepc/errors.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/model.hpp"
#include "eepc/rng.hpp"
#include "eepc/scenario.hpp"
#include "oracles.hpp"

using namespace eepc;

TEST_SUITE_BEGIN("centralized");

namespace {

NetworkModel symmetric_pair(double coupling, double target) {
  NetworkModel m = NetworkModel::sized(2, 1);
  for (std::size_t k = 0; k < 2; ++k) {
    m.direct(k, 0) = 1.5;
    m.self(k, 0) = 0.01;
    m.noise(k, 0) = 1.0;
    m.cross(k, 1 - k, 0) = coupling;
    m.max_power[k] = 6.0;
    m.circuit_power[k] = 0.8;
    m.rate_target[k] = target;
  }
  return m;
}

}  // namespace

TEST_CASE("surrogate metrics are tight at the expansion point and below elsewhere") {
  RandomStream rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 3;
    sc.num_blocks = 2;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    const PowerAllocation ref = PowerAllocation::budget_fraction(m, rng.uniform(0.2, 0.9));
    const std::vector<LogBoundParams> bounds = log_bound_params_at(m, ref);

    std::vector<double> q_ref(m.num_users * m.num_blocks);
    for (std::size_t c = 0; c < q_ref.size(); ++c) q_ref[c] = std::log2(ref.value[c]);

    // Tightness at the expansion point.
    CHECK(surrogate_gee(m, bounds, q_ref) == doctest::Approx(gee(m, ref)).epsilon(1e-10));
    for (std::size_t k = 0; k < m.num_users; ++k) {
      CHECK(surrogate_spectral_rate(m, bounds, q_ref, k) ==
            doctest::Approx(user_spectral_rate(m, ref, k)).epsilon(1e-10));
      CHECK(surrogate_user_ee(m, bounds, q_ref, k) ==
            doctest::Approx(user_ee(m, ref, k)).epsilon(1e-10));
    }

    // Global lower bound at random points.
    for (int probe = 0; probe < 100; ++probe) {
      std::vector<double> q = q_ref;
      PowerAllocation p = ref;
      for (std::size_t c = 0; c < q.size(); ++c) {
        q[c] += rng.uniform(-3.0, 1.5);
        p.value[c] = std::exp2(q[c]);
      }
      CHECK(surrogate_gee(m, bounds, q) <= gee(m, p) + 1e-9 * std::fabs(gee(m, p)));
      for (std::size_t k = 0; k < m.num_users; ++k) {
        CHECK(surrogate_spectral_rate(m, bounds, q, k) <=
              user_spectral_rate(m, p, k) + 1e-9);
      }
    }
  }
}

TEST_CASE("single-user solve matches a grid search on the true objective") {
  RandomStream rng(107);
  for (int trial = 0; trial < 8; ++trial) {
    NetworkModel m = NetworkModel::sized(1, 1);
    m.direct(0, 0) = rng.log_uniform(0.3, 3.0);
    m.self(0, 0) = 0.0;
    m.noise(0, 0) = rng.log_uniform(0.5, 2.0);
    m.max_power[0] = rng.log_uniform(2.0, 20.0);
    m.circuit_power[0] = rng.log_uniform(0.2, 2.0);
    const CentralizedRun run = solve_gee(m, default_start(m));
    CHECK(run.status == Termination::kConverged);

    auto objective = [&](double p) {
      PowerAllocation alloc = PowerAllocation::zeros(1, 1);
      alloc.at(0, 0) = p;
      return gee(m, alloc);
    };
    const double oracle_p = testing::refine_argmax(objective, 1e-9, m.max_power[0], 2000, 6);
    CHECK(run.final_objective == doctest::Approx(objective(oracle_p)).epsilon(1e-5));
  }
}

TEST_CASE("objective trace is nondecreasing and improves on the start") {
  RandomStream rng(109);
  int solved = 0;
  for (int trial = 0; trial < 10; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2;
    sc.rate_target_max = 0.6;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    if (!check_feasible_single_block(m).feasible) continue;
    ++solved;
    const CentralizedRun run = solve_gee(m, default_start(m));
    CHECK(run.monotone_objective);
    REQUIRE(run.iterates.size() >= 2);
    CHECK(run.final_objective >= run.iterates.front().objective - 1e-9);
    for (std::size_t i = 1; i < run.iterates.size(); ++i) {
      CHECK(run.iterates[i].objective >=
            run.iterates[i - 1].objective - 1e-9 * std::max(1.0, run.iterates[i - 1].objective));
    }
    // Final iterate satisfies the true constraints.
    CHECK(is_feasible_point(m, run.final_power, 1e-6).feasible);
  }
  CHECK(solved >= 3);
}

TEST_CASE("surrogate sandwich holds between consecutive iterates") {
  SyntheticScenario sc;
  sc.num_users = 3;
  sc.rate_target_max = 0.4;
  sc.seed = 1234;
  const NetworkModel m = generate(sc);
  if (!check_feasible_single_block(m).feasible) return;
  const CentralizedRun run = solve_gee(m, default_start(m));
  for (std::size_t i = 1; i < run.iterates.size(); ++i) {
    const OuterIterate& it = run.iterates[i];
    const PowerAllocation& prev = run.iterates[i - 1].power;
    std::vector<double> q_new(m.num_users), q_prev(m.num_users);
    for (std::size_t k = 0; k < m.num_users; ++k) {
      q_new[k] = std::log2(std::max(it.power.at(k, 0), 1e-300));
      q_prev[k] = std::log2(std::max(prev.at(k, 0), 1e-300));
    }
    const double true_new = gee(m, it.power);
    const double true_prev = gee(m, prev);
    const double surr_new = surrogate_gee(m, it.bounds, q_new);
    const double surr_prev = surrogate_gee(m, it.bounds, q_prev);
    const double slack = 1e-7 * std::max(1.0, std::fabs(true_new));
    CHECK(true_new >= surr_new - slack);
    CHECK(surr_new >= surr_prev - slack);
    CHECK(surr_prev == doctest::Approx(true_prev).epsilon(1e-9));
  }
}

TEST_CASE("energy-efficient optimum leaves budget slack in the large-budget regime") {
  RandomStream rng(113);
  for (int trial = 0; trial < 5; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2;
    sc.rate_target_max = 0.0;
    sc.max_power_min = 200.0;
    sc.max_power_max = 500.0;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    const CentralizedRun run = solve_gee(m, PowerAllocation::budget_fraction(m, 0.5));
    for (std::size_t k = 0; k < m.num_users; ++k) {
      CHECK(run.final_power.user_total(k) < 0.5 * m.max_power[k]);
    }
  }
}

TEST_CASE("min-EE solve reduces to the global solve for one user") {
  NetworkModel m = NetworkModel::sized(1, 1);
  m.direct(0, 0) = 1.2;
  m.self(0, 0) = 0.02;
  m.max_power[0] = 10.0;
  m.circuit_power[0] = 0.5;
  const CentralizedRun a = solve_gee(m, default_start(m));
  const CentralizedRun b = solve_min_ee(m, default_start(m));
  CHECK(a.final_objective == doctest::Approx(b.final_objective).epsilon(1e-6));
  CHECK(a.final_power.at(0, 0) == doctest::Approx(b.final_power.at(0, 0)).epsilon(1e-4));
}

TEST_CASE("min-EE equalizes users on a symmetric instance") {
  const NetworkModel m = symmetric_pair(0.05, 0.0);
  const CentralizedRun run = solve_min_ee(m, PowerAllocation::budget_fraction(m, 0.3));
  const double ee0 = user_ee(m, run.final_power, 0);
  const double ee1 = user_ee(m, run.final_power, 1);
  CHECK(ee0 == doctest::Approx(ee1).epsilon(0.01));
  CHECK(run.monotone_objective);
}

TEST_CASE("min-EE allocation is invariant to a common weight rescaling") {
  NetworkModel m = symmetric_pair(0.08, 0.0);
  m.weight = {1.0, 2.0};
  const CentralizedRun a = solve_min_ee(m, PowerAllocation::budget_fraction(m, 0.3));
  m.weight = {3.0, 6.0};
  const CentralizedRun b = solve_min_ee(m, PowerAllocation::budget_fraction(m, 0.3));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(a.final_power.at(k, 0) ==
          doctest::Approx(b.final_power.at(k, 0)).epsilon(1e-3));
  }
  CHECK(b.final_objective == doctest::Approx(3.0 * a.final_objective).epsilon(1e-6));
}

TEST_CASE("sum-rate solve uses the full budget for one user") {
  NetworkModel m = NetworkModel::sized(1, 1);
  m.direct(0, 0) = 0.8;
  m.self(0, 0) = 0.0;
  m.max_power[0] = 4.0;
  const CentralizedRun run = solve_sum_rate(m, default_start(m));
  CHECK(run.final_power.at(0, 0) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("sum-rate maximization costs energy efficiency at large budgets") {
  SyntheticScenario sc;
  sc.num_users = 2;
  sc.rate_target_max = 0.0;
  sc.max_power_min = 100.0;
  sc.max_power_max = 200.0;
  sc.seed = 31415;
  const NetworkModel m = generate(sc);
  const PowerAllocation start = PowerAllocation::budget_fraction(m, 0.4);
  const CentralizedRun ee_run = solve_gee(m, start);
  const CentralizedRun rate_run = solve_sum_rate(m, start);
  CHECK(gee(m, rate_run.final_power) < ee_run.final_objective);
}

TEST_CASE("min-rate solve equalizes rates on a symmetric instance") {
  const NetworkModel m = symmetric_pair(0.05, 0.0);
  const CentralizedRun run = solve_min_rate(m, PowerAllocation::budget_fraction(m, 0.3));
  CHECK(user_spectral_rate(m, run.final_power, 0) ==
        doctest::Approx(user_spectral_rate(m, run.final_power, 1)).epsilon(0.01));
}

TEST_CASE("rate targets are honored") {
  const NetworkModel m = symmetric_pair(0.05, 0.8);
  REQUIRE(check_feasible_single_block(m).feasible);
  const CentralizedRun run = solve_gee(m, default_start(m));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(user_spectral_rate(m, run.final_power, k) >= 0.8 - 1e-6);
  }
}

TEST_CASE("infeasible start is rejected") {
  NetworkModel m = symmetric_pair(0.05, 1.0);
  PowerAllocation zero = PowerAllocation::zeros(2, 1);
  CHECK_THROWS_AS(solve_gee(m, zero), InfeasibleError);
}

TEST_CASE("default start policies") {
  // No targets: half budget split.
  NetworkModel free = symmetric_pair(0.05, 0.0);
  const PowerAllocation p_free = default_start(free);
  CHECK(p_free.at(0, 0) == doctest::Approx(3.0));

  // Single block with targets: the exact minimum power vector.
  NetworkModel tight = symmetric_pair(0.05, 0.7);
  const PowerAllocation p_tight = default_start(tight);
  const FeasibilityReport report = check_feasible_single_block(tight);
  CHECK(p_tight.at(0, 0) == doctest::Approx(report.min_power[0]));

  // Multi-block with targets: a strictly feasible witness.
  SyntheticScenario sc;
  sc.num_users = 2;
  sc.num_blocks = 3;
  sc.rate_target_max = 0.5;
  sc.seed = 999;
  const NetworkModel multi = generate(sc);
  const PowerAllocation p_multi = default_start(multi);
  CHECK(is_feasible_point(multi, p_multi, 1e-9).feasible);
}

TEST_CASE("multi-block solve is monotone and feasible") {
  RandomStream rng(127);
  for (int trial = 0; trial < 3; ++trial) {
    SyntheticScenario sc;
    sc.num_users = 2;
    sc.num_blocks = 3;
    sc.rate_target_max = 0.8;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    PowerAllocation start;
    try {
      start = default_start(m);
    } catch (const InfeasibleError&) {
      continue;
    }
    const CentralizedRun run = solve_gee(m, start);
    CHECK(run.monotone_objective);
    CHECK(is_feasible_point(m, run.final_power, 1e-6).feasible);
    const CentralizedRun min_run = solve_min_ee(m, start);
    CHECK(min_run.monotone_objective);
    CHECK(is_feasible_point(m, min_run.final_power, 1e-6).feasible);
  }
}

TEST_CASE("kkt diagnostic is small at the solution and large away from it") {
  SyntheticScenario sc;
  sc.num_users = 2;
  sc.rate_target_max = 0.0;
  sc.seed = 2718;
  const NetworkModel m = generate(sc);
  // Tight outer tolerance so the returned point is a fixed point of the
  // expansion map, where surrogate and true optimality conditions coincide.
  CentralizedOptions options;
  options.outer_tolerance = 1e-12;
  const CentralizedRun run = solve_gee(m, PowerAllocation::budget_fraction(m, 0.5), options);
  CHECK(centralized_kkt_residual(m, run.final_power) < 1e-5);
  CHECK(centralized_kkt_residual(m, PowerAllocation::budget_fraction(m, 0.017)) > 1e-3);
}

TEST_CASE("run trace exports as CSV") {
  const NetworkModel m = symmetric_pair(0.05, 0.0);
  const CentralizedRun run = solve_gee(m, PowerAllocation::budget_fraction(m, 0.4));
  std::ostringstream os;
  run.write_csv(os);
  const std::string text = os.str();
  CHECK(text.find("iteration,objective") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(run.iterates.size()) + 1);
}

TEST_SUITE_END();
