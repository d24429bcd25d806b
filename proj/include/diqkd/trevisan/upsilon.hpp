// Copyright 2026 The diqkd Authors
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

#ifndef DIQKD_TREVISAN_UPSILON_HPP_
#define DIQKD_TREVISAN_UPSILON_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diqkd/errors.hpp"

namespace diqkd {

inline constexpr double kUpsilonB = 4.0 / std::numbers::ln2;

// Inverse of y -> y + b ln y, for x >= 1. Safeguarded Newton.
inline double upsilon(double x, double b = kUpsilonB) {
  if (!(b > 0.0)) throw DomainError("upsilon: b must be positive");
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("upsilon: x must be >= 1");
  if (x == 1.0) return 1.0;
  auto f = [&](double y) { return y + b * std::log(y) - x; };
  double lo = std::max(1e-9, x - b * std::log(std::max(x, 2.0)));
  double hi = x;
  if (f(lo) > 0.0) lo = 1e-9;
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fy = f(y);
    if (fy == 0.0) return y;
    if (fy > 0.0) hi = y; else lo = y;
    double next = y - fy / (1.0 + b / y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-13 * y) return next;
    y = next;
  }
  return y;
}

}  // namespace diqkd

#endif  // DIQKD_TREVISAN_UPSILON_HPP_
