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

#include "eepc/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "eepc/centralized.hpp"
#include "eepc/errors.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/fractional.hpp"
#include "eepc/game.hpp"
#include "eepc/model.hpp"
#include "eepc/rng.hpp"
#include "eepc/scenario.hpp"
#include "eepc/surrogate.hpp"

namespace eepc {

namespace {

CheckResult check(const std::string& name, bool pass, const std::string& detail = "") {
  return {name, pass, detail};
}

// Exact single-block fixed-point oracle: iterate the clipped interference
// map from the budgets; feasible iff the fixed point meets every target.
bool fixed_point_feasible(const NetworkModel& m) {
  const std::size_t kk = m.num_users;
  std::vector<double> p(m.max_power);
  for (int it = 0; it < 20000; ++it) {
    double step = 0.0;
    for (std::size_t k = 0; k < kk; ++k) {
      const double s_min = std::exp2(m.rate_target[k]) - 1.0;
      double next = 0.0;
      if (s_min > 0.0) {
        const double margin = m.direct(k, 0) - m.self(k, 0) * s_min;
        if (!(margin > 0.0)) return false;
        double interf = m.noise(k, 0);
        for (std::size_t j = 0; j < kk; ++j) {
          if (j != k) interf += m.cross(k, j, 0) * p[j];
        }
        next = std::min(s_min * interf / margin, m.max_power[k]);
      }
      step = std::max(step, std::fabs(next - p[k]));
      p[k] = next;
    }
    if (step <= 1e-13 * 1.0) break;
  }
  PowerAllocation alloc = PowerAllocation::zeros(kk, 1);
  for (std::size_t k = 0; k < kk; ++k) alloc.at(k, 0) = p[k];
  return is_feasible_point(m, alloc, 1e-8).feasible;
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed) {
  std::vector<CheckResult> results;
  RandomStream rng(seed);

  {  // Logarithmic lower bound validity and tightness.
    bool ok = true;
    for (int i = 0; i < 10000 && ok; ++i) {
      const double s = rng.log_uniform(1e-6, 1e6);
      const double ref = rng.log_uniform(1e-6, 1e6);
      const LogBoundParams bp = log_bound_params(ref);
      ok = bp.slope * std::log2(s) + bp.offset <= std::log2(1.0 + s) + 1e-9;
      if (ok && i % 100 == 0) {
        const double at_ref = bp.slope * std::log2(ref) + bp.offset;
        ok = std::fabs(at_ref - std::log2(1.0 + ref)) <= 1e-10 * std::max(1.0, at_ref);
      }
    }
    results.push_back(check("log-bound-validity", ok));
  }

  {  // SINR forms agree and the power inverse round-trips.
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      SyntheticScenario sc;
      sc.num_users = 3;
      sc.seed = rng.next_u64();
      const NetworkModel m = generate(sc);
      const PowerAllocation p = PowerAllocation::budget_fraction(m, rng.uniform(0.1, 1.0));
      for (std::size_t k = 0; k < 3 && ok; ++k) {
        const double direct = sinr(m, p, k, 0);
        const double via_gain = sinr_from_gain(equivalent_gain(m, p, k, 0),
                                               sinr_ceiling(m, k, 0), p.at(k, 0));
        ok = std::fabs(direct - via_gain) <= 1e-12 * std::max(1.0, direct);
        if (ok && direct > 0.0 && direct < sinr_ceiling(m, k, 0)) {
          const double back =
              power_for_sinr(equivalent_gain(m, p, k, 0), sinr_ceiling(m, k, 0), direct);
          ok = std::fabs(back - p.at(k, 0)) <= 1e-10 * std::max(1.0, p.at(k, 0));
        }
      }
    }
    results.push_back(check("sinr-identities", ok));
  }

  {  // Exact feasibility test against the fixed-point oracle.
    bool ok = true;
    int tested = 0;
    for (int i = 0; i < 100 && ok; ++i) {
      SyntheticScenario sc;
      sc.num_users = 2 + (rng.next_u64() % 3);
      sc.seed = rng.next_u64();
      const NetworkModel m = generate(sc);
      const bool exact = check_feasible_single_block(m).feasible;
      const bool oracle = fixed_point_feasible(m);
      ok = exact == oracle;
      ++tested;
    }
    std::ostringstream detail;
    detail << tested << " random instances";
    results.push_back(check("feasibility-oracle", ok, detail.str()));
  }

  {  // Scalar fractional solver against a 1-D refinement search.
    bool ok = true;
    for (int i = 0; i < 10 && ok; ++i) {
      const double gain = rng.log_uniform(0.1, 10.0);
      const double ceiling = rng.log_uniform(5.0, 500.0);
      const double circuit = rng.log_uniform(0.1, 2.0);
      const PriceSolution sol = ee_optimal_price(gain, ceiling, 1.0, circuit);
      auto ee = [&](double p) {
        return std::log2(1.0 + sinr_from_gain(gain, ceiling, p)) / (circuit + p);
      };
      double lo = 1e-6, hi = std::max(10.0 * sol.power, 1.0);
      double best = lo;
      for (int round = 0; round < 4; ++round) {
        double best_val = -1.0;
        for (int g = 0; g <= 400; ++g) {
          const double p = lo + (hi - lo) * g / 400.0;
          if (ee(p) > best_val) {
            best_val = ee(p);
            best = p;
          }
        }
        const double width = (hi - lo) / 400.0;
        lo = std::max(best - 2.0 * width, 1e-9);
        hi = best + 2.0 * width;
      }
      ok = std::fabs(sol.power - best) <= 1e-5 * std::max(1.0, best);
    }
    results.push_back(check("scalar-ee-price", ok));
  }

  {  // Best response equals a grid argmax of the user's energy efficiency.
    bool ok = true;
    for (int i = 0; i < 10 && ok; ++i) {
      SyntheticScenario sc;
      sc.num_users = 3;
      sc.seed = rng.next_u64();
      sc.rate_target_max = 0.5;
      const NetworkModel m = generate(sc);
      PowerAllocation others = PowerAllocation::budget_fraction(m, rng.uniform(0.2, 1.0));
      double response;
      try {
        response = best_response_single_block(m, others, 0);
      } catch (const EmptyStrategySetError&) {
        continue;
      }
      double lo = 0.0, hi = m.max_power[0], best = 0.0;
      double floor_p = 0.0;
      try {
        floor_p = min_power_single_block(m, others, 0);
      } catch (const EmptyStrategySetError&) {
        continue;
      }
      lo = floor_p;
      PowerAllocation probe = others;
      for (int round = 0; round < 5; ++round) {
        double best_val = -1.0;
        for (int g = 0; g <= 500; ++g) {
          const double p = lo + (hi - lo) * g / 500.0;
          probe.at(0, 0) = p;
          const double val = user_ee(m, probe, 0);
          if (val > best_val) {
            best_val = val;
            best = p;
          }
        }
        const double width = (hi - lo) / 500.0;
        lo = std::max(best - 2.0 * width, floor_p);
        hi = std::min(best + 2.0 * width, m.max_power[0]);
      }
      ok = std::fabs(response - best) <= 1e-5 * std::max(m.max_power[0], 1.0);
    }
    results.push_back(check("best-response-grid", ok));
  }

  {  // Surrogate gradients against central finite differences.
    bool ok = true;
    SyntheticScenario sc;
    sc.num_users = 3;
    sc.num_blocks = 2;
    sc.seed = rng.next_u64();
    const NetworkModel m = generate(sc);
    const PowerAllocation ref = PowerAllocation::budget_fraction(m, 0.4);
    const std::vector<LogBoundParams> bounds = log_bound_params_at(m, ref);
    std::vector<double> q(m.num_users * m.num_blocks);
    for (std::size_t c = 0; c < q.size(); ++c) q[c] = std::log2(ref.value[c]) + rng.uniform(-1, 1);
    for (std::size_t k = 0; k < m.num_users && ok; ++k) {
      const std::vector<double> grad = surrogate_spectral_rate_gradient(m, bounds, q, k);
      for (std::size_t c = 0; c < q.size() && ok; ++c) {
        const double h = 1e-6;
        std::vector<double> up = q, down = q;
        up[c] += h;
        down[c] -= h;
        const double fd = (surrogate_spectral_rate(m, bounds, up, k) -
                           surrogate_spectral_rate(m, bounds, down, k)) /
                          (2.0 * h);
        ok = std::fabs(fd - grad[c]) <= 1e-4 * std::max(1.0, std::fabs(fd));
      }
    }
    results.push_back(check("surrogate-gradients", ok));
  }

  {  // Centralized objective never decreases across outer iterations.
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i) {
      SyntheticScenario sc;
      sc.num_users = 2;
      sc.seed = rng.next_u64();
      const NetworkModel m = generate(sc);
      if (!check_feasible_single_block(m).feasible) continue;
      const CentralizedRun run = solve_gee(m, default_start(m));
      ok = run.monotone_objective;
    }
    results.push_back(check("centralized-monotone", ok));
  }

  return results;
}

}  // namespace eepc
