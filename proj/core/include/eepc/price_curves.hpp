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

// Closed-form solution of the single-link priced rate problem
//
//     max_{p >= 0}  rate_scale * ln(1 + sinr(p)) - price * p
//
// where sinr(p) = ceiling * gain * p / (ceiling + gain * p). The optimal
// SINR is the positive root of a quadratic in the SINR and the optimal power
// follows by inverting the SINR curve. These curves are the work-horse of
// the distributed best responses and of all water-level searches: sweeping
// the price from 0 to rate_scale * gain traces every power from +inf to 0.
//
// Callers that state rates in bit/s pass rate_scale = bandwidth_hz / ln(2).

namespace eepc {

/// sqrt(ceiling^2 + 4 * rate_scale * gain * (1 + ceiling) / price).
double price_radical(double price, double gain, double ceiling, double rate_scale);

/// SINR maximizing the priced rate; clamped at zero (zero whenever
/// price >= rate_scale * gain), strictly below `ceiling` otherwise.
double sinr_at_price(double price, double gain, double ceiling, double rate_scale);

/// Power achieving sinr_at_price; strictly decreasing in the price on the
/// region where it is positive.
double power_at_price(double price, double gain, double ceiling, double rate_scale);

}  // namespace eepc
