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

#include "eepc/price_curves.hpp"

#include <cmath>
#include <limits>

namespace eepc {

double price_radical(double price, double gain, double ceiling, double rate_scale) {
  return std::sqrt(ceiling * ceiling + 4.0 * rate_scale * gain * (1.0 + ceiling) / price);
}

double sinr_at_price(double price, double gain, double ceiling, double rate_scale) {
  if (price >= rate_scale * gain) return 0.0;
  if (std::isinf(ceiling)) {
    // Analytic limit of the quadratic root as the ceiling grows.
    return rate_scale * gain / price - 1.0;
  }
  // sinr = ceiling * [1 + price * (ceiling - radical) / (2 * rate_scale * gain)]
  // rewritten to avoid cancellation between ceiling and the radical.
  const double radical = price_radical(price, gain, ceiling, rate_scale);
  const double value = ceiling * (radical - (ceiling + 2.0)) / (radical + ceiling);
  return value > 0.0 ? value : 0.0;
}

double power_at_price(double price, double gain, double ceiling, double rate_scale) {
  const double s = sinr_at_price(price, gain, ceiling, rate_scale);
  if (s <= 0.0) return 0.0;
  if (std::isinf(ceiling)) return s / gain;
  return (s / gain) / (1.0 - s / ceiling);
}

}  // namespace eepc
