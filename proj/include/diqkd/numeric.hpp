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

#ifndef DIQKD_NUMERIC_HPP_
#define DIQKD_NUMERIC_HPP_

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

#include "diqkd/errors.hpp"

namespace diqkd {

// h(p) in bits. h(0) = h(1) = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("entropy argument outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Upper tail of the standard normal, Q(x) = P(Z > x).
inline double gaussian_tail(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// Q^{-1}(eps) for eps in (0, 1). Newton on log Q with a bisection fallback.
inline double inverse_gaussian_tail(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("tail probability outside (0,1)");
  if (eps > 0.5) return -inverse_gaussian_tail(1.0 - eps);
  if (eps == 0.5) return 0.0;
  const double target = std::log(eps);
  double lo = 0.0, hi = 40.0;
  double x = std::sqrt(-2.0 * target);
  for (int it = 0; it < 200; ++it) {
    const double q = gaussian_tail(x);
    const double f = std::log(q) - target;
    if (f > 0) lo = x; else hi = x;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    double next = x + f * q / pdf;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

struct ScalarMin {
  double x;
  double fx;
};

// Golden-section search for a minimum of f on [a, b].
inline ScalarMin golden_section_minimize(const std::function<double(double)>& f,
                                         double a, double b,
                                         double tol = 1e-12, int max_iter = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  return fc < fd ? ScalarMin{c, fc} : ScalarMin{d, fd};
}

}  // namespace diqkd

#endif  // DIQKD_NUMERIC_HPP_
