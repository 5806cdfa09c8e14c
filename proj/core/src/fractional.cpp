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

#include "eepc/fractional.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eepc/errors.hpp"
#include "eepc/model.hpp"
#include "eepc/price_curves.hpp"

namespace eepc {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kIterationCap: return "iteration-cap";
    case Termination::kStalled: return "stalled";
  }
  return "unknown";
}

namespace {

// Shifted values carry the scale of f and price * g; below this times the
// relative floor they are indistinguishable from rounding noise.
double shift_scale(double f, double price, double g) {
  return std::fabs(f) + std::fabs(price) * std::fabs(g) + 1.0;
}

}  // namespace

FractionalResult dinkelbach(const FractionalProblem& problem, std::vector<double> start,
                            double price0) {
  FractionalResult result;
  result.x = std::move(start);
  double price = price0;
  double prev_shifted = std::numeric_limits<double>::infinity();

  for (int it = 0; it < problem.max_iterations; ++it) {
    result.x = problem.maximize_shifted(price, result.x);
    const double f = problem.numerator(result.x);
    const double g = problem.denominator(result.x);
    if (!(g > 0.0)) throw SolverError("dinkelbach: denominator not positive");
    const double shifted = f - price * g;
    result.trace.push_back({price, shifted});
    result.ratio = f / g;

    const double scale = shift_scale(f, price, g);
    if (shifted > prev_shifted + 1e-9 * scale) result.monotone_trace = false;
    if (result.ratio < price - 1e-9 * (std::fabs(price) + 1.0)) result.monotone_trace = false;

    if (shifted <= std::max(problem.tolerance, problem.relative_floor * scale)) {
      result.status = Termination::kConverged;
      return result;
    }
    // The next price is the achieved ratio; a non-improving price means the
    // inner solver's accuracy is exhausted.
    if (result.ratio <= price) {
      result.status = Termination::kStalled;
      return result;
    }
    price = result.ratio;
    prev_shifted = shifted;
  }
  result.status = Termination::kIterationCap;
  return result;
}

FractionalResult generalized_dinkelbach(const MultiRatioProblem& problem,
                                        std::vector<double> start, double price0) {
  if (problem.numerators.size() != problem.denominators.size() || problem.numerators.empty()) {
    throw DimensionError("generalized_dinkelbach: ratio lists disagree or empty");
  }
  FractionalResult result;
  result.x = std::move(start);
  double price = price0;
  double prev_shifted = std::numeric_limits<double>::infinity();

  for (int it = 0; it < problem.max_iterations; ++it) {
    result.x = problem.maximize_min_shifted(price, result.x);

    double min_shifted = std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (std::size_t i = 0; i < problem.numerators.size(); ++i) {
      const double f = problem.numerators[i](result.x);
      const double g = problem.denominators[i](result.x);
      if (!(g > 0.0)) throw SolverError("generalized_dinkelbach: denominator not positive");
      min_shifted = std::min(min_shifted, f - price * g);
      min_ratio = std::min(min_ratio, f / g);
      scale = std::max(scale, shift_scale(f, price, g));
    }
    result.trace.push_back({price, min_shifted});
    result.ratio = min_ratio;

    if (min_shifted > prev_shifted + 1e-9 * scale) result.monotone_trace = false;
    if (min_ratio < price - 1e-9 * (std::fabs(price) + 1.0)) result.monotone_trace = false;

    if (min_shifted <= std::max(problem.tolerance, problem.relative_floor * scale)) {
      result.status = Termination::kConverged;
      return result;
    }
    if (min_ratio <= price) {
      result.status = Termination::kStalled;
      return result;
    }
    price = min_ratio;
    prev_shifted = min_shifted;
  }
  result.status = Termination::kIterationCap;
  return result;
}

PriceSolution ee_optimal_price(double gain, double ceiling, double bandwidth_hz,
                               double circuit_power) {
  if (!(gain > 0.0)) throw SolverError("ee_optimal_price: gain must be positive");
  if (!(circuit_power > 0.0)) throw SolverError("ee_optimal_price: circuit power must be positive");
  const double rate_scale = bandwidth_hz / std::numbers::ln2;

  // Start from the ratio at a finite probe power; every subsequent price is a
  // ratio value and therefore stays strictly below rate_scale * gain, keeping
  // the inner maximizer finite.
  double power = 1.0 / gain;
  double s = sinr_from_gain(gain, ceiling, power);
  double price = rate_scale * std::log1p(s) / (circuit_power + power);

  PriceSolution out;
  constexpr int kMaxIterations = 200;
  for (int it = 1; it <= kMaxIterations; ++it) {
    power = power_at_price(price, gain, ceiling, rate_scale);
    s = sinr_at_price(price, gain, ceiling, rate_scale);
    const double value = rate_scale * std::log1p(s);
    const double cost = circuit_power + power;
    const double shifted = value - price * cost;
    out.iterations = it;
    out.price = price;
    out.power = power;
    out.sinr = s;
    out.residual = std::fabs(shifted) / (std::fabs(value) + price * cost + 1e-300);
    if (out.residual <= 1e-13 || shifted <= 0.0) break;
    price = value / cost;
  }
  return out;
}

}  // namespace eepc
