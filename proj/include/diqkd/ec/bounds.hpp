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

#ifndef DIQKD_EC_BOUNDS_HPP_
#define DIQKD_EC_BOUNDS_HPP_

#include <cmath>
#include <cstdint>

#include "diqkd/errors.hpp"
#include "diqkd/numeric.hpp"

namespace diqkd {

// Practical syndrome length: n((1-g)h(Q) + g h((4-S)/8)) + 50 sqrt(n), rounded up.
// S = 4 and Q = 0 is accepted as the noiseless limit.
inline std::uint64_t syndrome_length(double n, double gamma, double S, double Q) {
  if (!(n >= 1.0)) throw DomainError("n must be at least 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma outside (0, 1)");
  if (!(S > 2.0 && S <= 4.0)) throw DomainError("CHSH score outside (2, 4]");
  if (!(Q >= 0.0 && Q < 0.5)) throw DomainError("QBER outside [0, 1/2)");
  const double rate = (1.0 - gamma) * binary_entropy(Q) +
                      gamma * binary_entropy((4.0 - S) / 8.0);
  return static_cast<std::uint64_t>(std::ceil(n * rate + 50.0 * std::sqrt(n)));
}

struct BscBounds {
  double capacity;  // per channel use
  double m_bsc;     // bits
};

// Normal approximation to the finite-length BSC capacity.
inline BscBounds finite_bsc_bounds(double n, double delta, double epsilon) {
  if (!(n >= 1.0)) throw DomainError("n must be at least 1");
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta outside (0, 1/2)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon outside (0, 1)");
  const double nc = n * (1.0 - binary_entropy(delta)) -
                    std::sqrt(n * delta * (1.0 - delta)) *
                        std::log2((1.0 - delta) / delta) *
                        inverse_gaussian_tail(epsilon) +
                    0.5 * std::log2(n);
  const double c = nc / n;
  return {c, n * (1.0 - c)};
}

struct OverheadBounds {
  double eta_inf;    // asymptotic overhead, per bit
  double eta_est;    // finite-n estimate, per bit
  double m_afrv;     // bits
  double m_tsbsrsl;  // bits
  double delta_test;
  double delta_key;
};

namespace detail {

// min over e' in (0, eps) of f(e'), searched in log e'.
template <typename F>
double minimize_over_split(double eps, F&& f) {
  const double lo = std::log(eps) - 60.0, hi = std::log(eps * (1.0 - 1e-12));
  auto g = [&](double le) { return f(std::exp(le)); };
  double best_x = lo, best = g(lo);
  constexpr int kGrid = 400;
  for (int i = 1; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * i / kGrid;
    const double v = g(x);
    if (v < best) { best = v; best_x = x; }
  }
  const double step = (hi - lo) / kGrid;
  const auto r = golden_section_minimize(g, std::max(lo, best_x - step),
                                         std::min(hi, best_x + step), 1e-12);
  return std::min(best, r.fx);
}

}  // namespace detail

inline OverheadBounds overhead_bounds(double n, double gamma, double S, double Q,
                                      double epsilon) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma outside (0, 1)");
  if (!(S > 2.0 && S <= 4.0)) throw DomainError("CHSH score outside (2, 4]");
  if (!(Q > 0.0 && Q < 0.5)) throw DomainError("QBER outside (0, 1/2)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon outside (0, 1)");
  OverheadBounds out{};
  out.delta_test = (4.0 - S) / 8.0;
  out.delta_key = Q;
  out.eta_inf = gamma * binary_entropy(out.delta_test) +
                (1.0 - gamma) * binary_entropy(out.delta_key);
  out.eta_est = (finite_bsc_bounds(gamma * n, out.delta_test, epsilon).m_bsc +
                 finite_bsc_bounds((1.0 - gamma) * n, out.delta_key, epsilon).m_bsc) /
                n;
  const double base = n * out.eta_inf;
  out.m_afrv = base + detail::minimize_over_split(epsilon, [&](double e1) {
    const double l8 = std::log2(8.0 / (e1 * e1));
    return 4.0 * std::log2(2.0 * std::sqrt(2.0) + 1.0) * std::sqrt(2.0 * n * l8) +
           std::log2(8.0 / (e1 * e1) + 2.0 / (2.0 - e1)) +
           std::log2(1.0 / (epsilon - e1));
  });
  out.m_tsbsrsl = base + detail::minimize_over_split(epsilon, [&](double e1) {
    return 2.0 * std::log2(5.0) * std::sqrt(n * std::log2(2.0 / (e1 * e1))) +
           2.0 * std::log2(1.0 / (epsilon - e1)) + 4.0;
  });
  return out;
}

// Overhead of treating the whole string as one BSC with the averaged flip rate.
inline double global_bsc_overhead(double gamma, double S, double Q) {
  return binary_entropy(gamma * (4.0 - S) / 8.0 + (1.0 - gamma) * Q);
}

}  // namespace diqkd

#endif  // DIQKD_EC_BOUNDS_HPP_
