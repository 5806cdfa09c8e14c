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

#include "eepc/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "eepc/errors.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/fractional.hpp"
#include "eepc/price_curves.hpp"
#include "eepc/rng.hpp"

namespace eepc {

namespace {

constexpr double kTinyPower = 1e-280;

double rate_scale_of(const NetworkModel& m) { return m.bandwidth_hz / std::numbers::ln2; }

double spectral_rate_at_price(std::span<const double> gain, std::span<const double> ceiling,
                              double rate_scale, double price) {
  double rate = 0.0;
  for (std::size_t n = 0; n < gain.size(); ++n) {
    rate += std::log2(1.0 + sinr_at_price(price, gain[n], ceiling[n], rate_scale));
  }
  return rate;
}

double total_power_at_price(std::span<const double> gain, std::span<const double> ceiling,
                            double rate_scale, double price) {
  double total = 0.0;
  for (std::size_t n = 0; n < gain.size(); ++n) {
    total += power_at_price(price, gain[n], ceiling[n], rate_scale);
  }
  return total;
}

double max_cutoff_price(std::span<const double> gain, double rate_scale) {
  double cutoff = 0.0;
  for (double g : gain) cutoff = std::max(cutoff, rate_scale * g);
  return cutoff;
}

// Bisection on a strictly decreasing function of the price. `target` must be
// reachable: f(hi) <= target and f -> above target as price -> 0+.
template <typename Fn>
double price_for_level(Fn f, double target, double hi) {
  double lo = hi;
  for (int i = 0; i < 1200 && f(lo) < target; ++i) lo *= 0.5;
  if (f(lo) < target) return hi;  // target unreachable; caller pre-checks
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

// Dinkelbach over the closed-form water-filling: price of the unconstrained
// per-user energy-efficiency maximizer across blocks.
double ee_price_multi(std::span<const double> gain, std::span<const double> ceiling,
                      double rate_scale, double circuit_power) {
  const std::size_t nn = gain.size();
  double cost = circuit_power;
  double value = 0.0;
  for (std::size_t n = 0; n < nn; ++n) {
    const double p = 1.0 / gain[n];
    cost += p;
    value += rate_scale * std::log1p(sinr_from_gain(gain[n], ceiling[n], p));
  }
  double price = value / cost;
  for (int it = 0; it < 200; ++it) {
    value = 0.0;
    cost = circuit_power;
    for (std::size_t n = 0; n < nn; ++n) {
      value += rate_scale * std::log1p(sinr_at_price(price, gain[n], ceiling[n], rate_scale));
      cost += power_at_price(price, gain[n], ceiling[n], rate_scale);
    }
    const double shifted = value - price * cost;
    if (std::fabs(shifted) <= 1e-13 * (std::fabs(value) + price * cost + 1.0)) break;
    if (shifted <= 0.0) break;
    price = value / cost;
  }
  return price;
}

struct ResponseInputs {
  std::span<const double> gain;
  std::span<const double> ceiling;
  double rate_target = 0.0;    // bit/s/Hz
  double max_power = 0.0;      // watts
  double circuit_power = 0.0;  // watts
  double rate_scale = 0.0;     // bandwidth / ln 2
};

UserPrices response_prices(const ResponseInputs& in) {
  UserPrices prices;
  const double cutoff = max_cutoff_price(in.gain, in.rate_scale);
  auto rate_at = [&](double price) {
    return spectral_rate_at_price(in.gain, in.ceiling, in.rate_scale, price);
  };
  auto power_at = [&](double price) {
    return total_power_at_price(in.gain, in.ceiling, in.rate_scale, price);
  };

  if (in.rate_target > 0.0) {
    double ceiling_rate = 0.0;
    for (double c : in.ceiling) ceiling_rate += std::log2(1.0 + c);
    if (!(in.rate_target < ceiling_rate)) {
      throw EmptyStrategySetError("rate target exceeds the ceiling rate");
    }
    prices.rate_price = price_for_level(rate_at, in.rate_target, cutoff);
  } else {
    prices.rate_price = kInfinity;
  }

  prices.budget_price = price_for_level(power_at, in.max_power, cutoff);
  if (prices.budget_price > prices.rate_price * (1.0 + 1e-12)) {
    throw EmptyStrategySetError("rate target needs more power than the budget");
  }
  prices.ee_price = ee_price_multi(in.gain, in.ceiling, in.rate_scale, in.circuit_power);
  prices.clipped_price =
      std::max(prices.budget_price, std::min(prices.ee_price, prices.rate_price));
  return prices;
}

std::vector<double> response_powers(const ResponseInputs& in, const UserPrices& prices) {
  std::vector<double> out(in.gain.size(), 0.0);
  for (std::size_t n = 0; n < in.gain.size(); ++n) {
    out[n] = power_at_price(prices.clipped_price, in.gain[n], in.ceiling[n], in.rate_scale);
  }
  return out;
}

}  // namespace

UserLink user_link(const NetworkModel& model, const PowerAllocation& others, std::size_t k) {
  UserLink link;
  link.gain.resize(model.num_blocks);
  link.ceiling.resize(model.num_blocks);
  for (std::size_t n = 0; n < model.num_blocks; ++n) {
    link.gain[n] = equivalent_gain(model, others, k, n);
    link.ceiling[n] = sinr_ceiling(model, k, n);
  }
  return link;
}

double min_power_single_block(const NetworkModel& model, const PowerAllocation& others,
                              std::size_t k) {
  if (model.num_blocks != 1) throw DimensionError("min_power_single_block: one block expected");
  const double target = model.rate_target[k];
  if (!(target > 0.0)) return 0.0;
  const double required = std::exp2(target) - 1.0;
  const double ceiling = sinr_ceiling(model, k, 0);
  if (!(required < ceiling)) {
    throw EmptyStrategySetError("min_power_single_block: required SINR above the ceiling");
  }
  return power_for_sinr(equivalent_gain(model, others, k, 0), ceiling, required);
}

double best_response_single_block(const NetworkModel& model, const PowerAllocation& others,
                                  std::size_t k) {
  if (model.num_blocks != 1) throw DimensionError("best_response_single_block: one block expected");
  return best_response_multi_block(model, others, k)[0];
}

WaterLevel min_power_water_level(const NetworkModel& model, const PowerAllocation& others,
                                 std::size_t k) {
  const UserLink link = user_link(model, others, k);
  const double rate_scale = rate_scale_of(model);
  WaterLevel out;
  if (!(model.rate_target[k] > 0.0)) {
    out.price = kInfinity;
    out.power.assign(model.num_blocks, 0.0);
    return out;
  }
  double ceiling_rate = 0.0;
  for (double c : link.ceiling) ceiling_rate += std::log2(1.0 + c);
  if (!(model.rate_target[k] < ceiling_rate)) {
    throw InfeasibleError("min_power_water_level: target exceeds the ceiling rate");
  }
  auto rate_at = [&](double price) {
    return spectral_rate_at_price(link.gain, link.ceiling, rate_scale, price);
  };
  out.price = price_for_level(rate_at, model.rate_target[k], max_cutoff_price(link.gain, rate_scale));
  out.power.resize(model.num_blocks);
  for (std::size_t n = 0; n < model.num_blocks; ++n) {
    out.power[n] = power_at_price(out.price, link.gain[n], link.ceiling[n], rate_scale);
  }
  return out;
}

std::vector<double> best_response_multi_block(const NetworkModel& model,
                                              const PowerAllocation& others, std::size_t k) {
  const UserLink link = user_link(model, others, k);
  ResponseInputs in{link.gain,
                    link.ceiling,
                    model.rate_target[k],
                    model.max_power[k],
                    model.circuit_power[k],
                    rate_scale_of(model)};
  return response_powers(in, response_prices(in));
}

UserPrices best_response_prices(const NetworkModel& model, const PowerAllocation& others,
                                std::size_t k) {
  const UserLink link = user_link(model, others, k);
  ResponseInputs in{link.gain,
                    link.ceiling,
                    model.rate_target[k],
                    model.max_power[k],
                    model.circuit_power[k],
                    rate_scale_of(model)};
  return response_prices(in);
}

void GameRun::write_csv(std::ostream& os, const NetworkModel& model) const {
  os << "round,user,block,power_w,sinr,user_ee_bit_per_joule\n";
  for (const GameState& state : trajectory) {
    for (std::size_t k = 0; k < model.num_users; ++k) {
      const double ee = user_ee(model, state.power, k);
      for (std::size_t n = 0; n < model.num_blocks; ++n) {
        os << state.round << ',' << k << ',' << n << ',' << state.power.at(k, n) << ','
           << state.measured_sinr[k * model.num_blocks + n] << ',' << ee << '\n';
      }
    }
  }
}

namespace {

std::vector<double> measure_sinr(const NetworkModel& model, const PowerAllocation& p) {
  std::vector<double> out(model.num_users * model.num_blocks, 0.0);
  for (std::size_t k = 0; k < model.num_users; ++k) {
    for (std::size_t n = 0; n < model.num_blocks; ++n) {
      out[k * model.num_blocks + n] = sinr(model, p, k, n);
    }
  }
  return out;
}

// Equivalent gain recovered from the SINR measured at the receiver; falls
// back to the model value when the probe power is too small to divide by.
double recover_gain(const NetworkModel& model, const PowerAllocation& profile, std::size_t k,
                    std::size_t n) {
  const double p = profile.at(k, n);
  if (p <= kTinyPower) return equivalent_gain(model, profile, k, n);
  const double measured = sinr(model, profile, k, n);
  const double ceiling = sinr_ceiling(model, k, n);
  const double remainder = std::max(1.0 - measured / ceiling, 1e-300);
  return (measured / p) / remainder;
}

}  // namespace

GameRun run_best_response(const NetworkModel& model, const PowerAllocation& start,
                          const GameOptions& options) {
  model.validate();
  if (options.verify_condition && model.num_blocks == 1) {
    const std::vector<bool> ok = strategy_set_condition(model);
    for (std::size_t k = 0; k < model.num_users; ++k) {
      if (!ok[k]) {
        throw EmptyStrategySetError("run_best_response: sufficient condition fails for a user");
      }
    }
  }
  const double rate_scale = rate_scale_of(model);

  GameRun run;
  PowerAllocation profile = start;
  run.trajectory.push_back({profile, measure_sinr(model, profile), {}, 0});

  for (int round = 1; round <= options.max_rounds; ++round) {
    const PowerAllocation previous = profile;
    std::vector<UserPrices> prices(model.num_users);
    PowerAllocation next = profile;

    for (std::size_t k = 0; k < model.num_users; ++k) {
      const PowerAllocation& ref =
          options.schedule == UpdateSchedule::kSequential ? profile : previous;
      std::vector<double> gain(model.num_blocks), ceiling(model.num_blocks);
      for (std::size_t n = 0; n < model.num_blocks; ++n) {
        gain[n] = recover_gain(model, ref, k, n);
        ceiling[n] = sinr_ceiling(model, k, n);
      }
      ResponseInputs in{gain,          ceiling,
                        model.rate_target[k], model.max_power[k],
                        model.circuit_power[k], rate_scale};
      prices[k] = response_prices(in);
      const std::vector<double> response = response_powers(in, prices[k]);
      for (std::size_t n = 0; n < model.num_blocks; ++n) {
        if (options.schedule == UpdateSchedule::kSequential) {
          profile.at(k, n) = response[n];
        } else {
          next.at(k, n) = response[n];
        }
      }
    }
    if (options.schedule == UpdateSchedule::kSimultaneous) profile = next;

    double step = 0.0;
    for (std::size_t k = 0; k < model.num_users; ++k) {
      for (std::size_t n = 0; n < model.num_blocks; ++n) {
        step = std::max(step,
                        std::fabs(profile.at(k, n) - previous.at(k, n)) / model.max_power[k]);
      }
    }
    run.trajectory.push_back({profile, measure_sinr(model, profile), std::move(prices), round});
    run.rounds = round;
    if (step <= options.tolerance) {
      run.converged = true;
      break;
    }
  }
  return run;
}

StandardFunctionReport standard_function_probe(const NetworkModel& model, std::size_t k,
                                               int samples, std::uint64_t seed) {
  StandardFunctionReport report;
  report.samples = samples;
  RandomStream rng(seed);
  const double tol = 1e-9;

  auto respond_total = [&](const PowerAllocation& others) {
    const std::vector<double> r = best_response_multi_block(model, others, k);
    double total = 0.0;
    for (double v : r) total += v;
    return total;
  };

  for (int s = 0; s < samples; ++s) {
    PowerAllocation base = PowerAllocation::zeros(model.num_users, model.num_blocks);
    PowerAllocation larger = base;
    for (std::size_t j = 0; j < model.num_users; ++j) {
      if (j == k) continue;
      for (std::size_t n = 0; n < model.num_blocks; ++n) {
        const double p = rng.uniform(0.0, model.max_power[j] / model.num_blocks);
        base.at(j, n) = p;
        larger.at(j, n) = p + rng.uniform(0.0, model.max_power[j] / model.num_blocks - p);
      }
    }
    const double beta = 1.0 + rng.uniform(0.1, 1.0);
    PowerAllocation scaled = base;
    for (double& v : scaled.value) v *= beta;

    try {
      const double r_base = respond_total(base);
      const double r_larger = respond_total(larger);
      const double r_scaled = respond_total(scaled);
      if (r_base < 0.0) {
        report.nonnegative = false;
        report.violations.push_back("negative response at sample " + std::to_string(s));
      }
      if (r_larger < r_base * (1.0 - tol) - 1e-30) {
        report.monotone = false;
        std::ostringstream msg;
        msg << "monotonicity: response " << r_larger << " < " << r_base << " at sample " << s;
        report.violations.push_back(msg.str());
      }
      if (!(r_scaled < beta * r_base * (1.0 + tol) + 1e-30)) {
        report.scalable = false;
        std::ostringstream msg;
        msg << "scalability: response " << r_scaled << " !< " << beta * r_base << " at sample "
            << s;
        report.violations.push_back(msg.str());
      }
    } catch (const EmptyStrategySetError&) {
      // Sampled profile outside the admissible region; skip it.
    }
  }
  return report;
}

ContractionEstimate contraction_metric(const NetworkModel& model, std::size_t k, int samples,
                                       std::uint64_t seed) {
  ContractionEstimate estimate;
  estimate.samples = samples;
  const std::size_t nn = model.num_blocks;
  const double rate_scale = rate_scale_of(model);

  double cross_sq = 0.0;
  for (std::size_t j = 0; j < model.num_users; ++j) {
    if (j == k) continue;
    for (std::size_t n = 0; n < nn; ++n) cross_sq += model.cross(k, j, n) * model.cross(k, j, n);
  }
  if (cross_sq == 0.0) return estimate;

  std::vector<double> ceiling(nn);
  for (std::size_t n = 0; n < nn; ++n) ceiling[n] = sinr_ceiling(model, k, n);

  auto clipped_price = [&](const std::vector<double>& gain) {
    ResponseInputs in{gain,          ceiling,
                      model.rate_target[k], model.max_power[k],
                      model.circuit_power[k], rate_scale};
    return response_prices(in).clipped_price;
  };

  RandomStream rng(seed);
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> gain(nn);
    for (std::size_t n = 0; n < nn; ++n) {
      // Heuristic sampling domain (0, direct_gain], log-uniform.
      gain[n] = rng.log_uniform(1e-9 * model.direct(k, n), model.direct(k, n));
    }
    double price;
    try {
      price = clipped_price(gain);
    } catch (const EmptyStrategySetError&) {
      continue;
    }

    std::vector<std::size_t> active;
    for (std::size_t n = 0; n < nn; ++n) {
      if (rate_scale * gain[n] > price) active.push_back(n);
    }
    if (active.empty()) continue;

    // Sensitivity of 1/price to each gain, by central differences.
    std::vector<double> xi(nn, 0.0);
    for (std::size_t l : active) {
      const double h = 1e-6 * gain[l];
      std::vector<double> up = gain, down = gain;
      up[l] += h;
      down[l] -= h;
      try {
        const double inv_up = 1.0 / clipped_price(up);
        const double inv_down = 1.0 / clipped_price(down);
        xi[l] = gain[l] * gain[l] / model.direct(k, l) * (inv_up - inv_down) / (2.0 * h);
      } catch (const EmptyStrategySetError&) {
        xi[l] = 0.0;
      }
    }

    double bracket_sum = 0.0;
    for (std::size_t n : active) {
      double diag, ratio;
      if (std::isinf(ceiling[n])) {
        diag = -1.0 / model.direct(k, n);
        ratio = 1.0;
      } else {
        const double radical = price_radical(price, gain[n], ceiling[n], rate_scale);
        diag = ceiling[n] * (radical - (2.0 + ceiling[n])) /
                   (2.0 * model.direct(k, n) * (1.0 + ceiling[n])) -
               ceiling[n] * rate_scale * gain[n] / (price * model.direct(k, n) * radical);
        ratio = ceiling[n] / radical;
      }
      for (std::size_t l : active) {
        const double term = (n == l ? diag : 0.0) - rate_scale * ratio * xi[l];
        bracket_sum += term * term;
      }
    }
    sup = std::max(sup, bracket_sum);
  }
  estimate.value = cross_sq * sup;
  return estimate;
}

}  // namespace eepc
