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
#include <functional>
#include <span>
#include <string>
#include <vector>

// Parametric solvers for fractional programs max f(x)/g(x) over a fixed
// convex set (g > 0 on it) and for max-min multi-ratio programs. Both work
// by driving the shifted value max { f - price * g } to zero in the price;
// the caller supplies the inner maximizer for the shifted problem.

namespace eepc {

enum class Termination {
  kConverged,
  kIterationCap,
  kStalled,
};

std::string to_string(Termination t);

struct FractionalTracePoint {
  double price = 0.0;     // ratio parameter before the inner solve
  double shifted = 0.0;   // max f - price * g at that parameter
};

struct FractionalResult {
  std::vector<double> x;
  double ratio = 0.0;  // f(x)/g(x) (min over ratios in the multi-ratio case)
  Termination status = Termination::kIterationCap;
  std::vector<FractionalTracePoint> trace;
  /// True when the price trace was nondecreasing and the shifted trace
  /// nonincreasing (up to floating-point slack).
  bool monotone_trace = true;
};

struct FractionalProblem {
  std::function<double(std::span<const double>)> numerator;
  std::function<double(std::span<const double>)> denominator;
  /// Returns argmax { numerator - price * denominator } over the feasible
  /// set; `warm` is the previous solution and may be used as a start point.
  std::function<std::vector<double>(double price, const std::vector<double>& warm)>
      maximize_shifted;

  double tolerance = 1e-8;        // absolute stop on the shifted value
  double relative_floor = 1e-11;  // scale-aware stop: shifted <= floor * scale
  int max_iterations = 100;
};

/// Requires max numerator >= 0 so the price stays nonnegative from price0 = 0.
FractionalResult dinkelbach(const FractionalProblem& problem, std::vector<double> start,
                            double price0 = 0.0);

struct MultiRatioProblem {
  std::vector<std::function<double(std::span<const double>)>> numerators;
  std::vector<std::function<double(std::span<const double>)>> denominators;
  /// Returns argmax min_i { numerator_i - price * denominator_i }.
  std::function<std::vector<double>(double price, const std::vector<double>& warm)>
      maximize_min_shifted;

  double tolerance = 1e-8;
  double relative_floor = 1e-11;
  int max_iterations = 200;
};

FractionalResult generalized_dinkelbach(const MultiRatioProblem& problem,
                                        std::vector<double> start, double price0 = 0.0);

struct PriceSolution {
  double price = 0.0;     // zero of rate(power(price)) - price * (circuit + power)
  double power = 0.0;     // watts; unconstrained energy-efficiency maximizer
  double sinr = 0.0;
  double residual = 0.0;  // |shifted value| / objective scale at the returned price
  int iterations = 0;
};

/// Closed-form Dinkelbach for the single-link energy efficiency
/// bandwidth_hz * log2(1 + sinr(p)) / (circuit_power + p); no box constraints.
PriceSolution ee_optimal_price(double gain, double ceiling, double bandwidth_hz,
                               double circuit_power);

}  // namespace eepc
