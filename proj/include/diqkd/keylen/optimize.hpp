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

#ifndef DIQKD_KEYLEN_OPTIMIZE_HPP_
#define DIQKD_KEYLEN_OPTIMIZE_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "diqkd/keylen/key_length.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

struct OptimizerConfig {
  int multistarts = 32;
  std::uint64_t seed = 1;
  int max_sweeps = 600;
  double eps_h = kHashEpsilon;
};

struct OptimizeResult {
  bool feasible = false;
  std::string violated_constraint;  // set when infeasible
  SecurityParams params;
  KeyLengthBreakdown breakdown;
};

namespace detail {

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// Unconstrained coordinates -> parameters. Every image satisfies the
// SecurityParams invariants and max(eps_ea, eps_pa + 2 eps_s) <= budget.
// Epsilon coordinates act on a log scale through the sigmoid tail.
inline constexpr int kDims = 8;
using Point = std::array<double, kDims>;

inline SecurityParams decode_point(const Point& x, double budget, double eps_h) {
  SecurityParams p;
  p.eps_h = eps_h;
  p.t = 0.75 + (kOmegaMax - 0.75) * sigmoid(x[0]);
  p.alpha1 = 1.0 + sigmoid(x[1]);
  p.alpha2 = 1.0 + sigmoid(x[2]) / std::log2(5.0);
  p.eps_ea = budget * sigmoid(x[3]);
  const double total = budget * sigmoid(x[4]);
  p.eps_pa = total * sigmoid(x[5]);
  p.eps_s = total * sigmoid(-x[5]) / 2.0;
  p.eps_s1 = p.eps_s * sigmoid(x[6]);
  p.eps_s2 = (p.eps_s - p.eps_s1) / 2.0 * sigmoid(x[7]);
  return p;
}

}  // namespace detail

// Heuristic maximization of pre_upsilon: coordinate descent from several
// seeded starts. Ties keep the earlier start, so the result is reproducible.
inline OptimizeResult optimize(double n, double gamma, double omega_thresh, double m,
                               double eps_snd_target, const OptimizerConfig& cfg = {}) {
  using detail::Point;
  OptimizeResult res;
  const double budget = eps_snd_target - 4.0 * cfg.eps_h;
  if (!(budget > 0.0)) {
    res.violated_constraint = "eps_snd_target <= 4 eps_h";
    return res;
  }
  if (!(omega_thresh > 0.75 && omega_thresh <= kOmegaMax)) {
    res.violated_constraint = "omega_thresh outside (3/4, w_max]";
    return res;
  }
  const double cap = std::min(budget, 1.0 - 1e-9);
  constexpr double kBox = 35.0;

  auto score = [&](const Point& x) {
    const auto p = detail::decode_point(x, cap, cfg.eps_h);
    if (p.soundness() > eps_snd_target) return -std::numeric_limits<double>::infinity();
    try {
      return key_length(n, gamma, omega_thresh, m, p).pre_upsilon;
    } catch (const DomainError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  Rng rng(cfg.seed);
  std::optional<Point> best_x;
  double best = -std::numeric_limits<double>::infinity();
  const int starts = std::max(1, cfg.multistarts);
  for (int s = 0; s < starts; ++s) {
    Point x;
    if (s == 0) {
      x = {0.0, -6.0, -6.0, 12.0, 12.0, 0.0, 0.0, 0.0};
    } else {
      const std::array<std::pair<double, double>, detail::kDims> box = {
          {{-3, 3}, {-10, -2}, {-10, -2}, {0, 15}, {0, 15}, {-3, 3}, {-3, 3}, {-3, 3}}};
      for (int d = 0; d < detail::kDims; ++d) {
        x[d] = box[d].first + (box[d].second - box[d].first) * rng.uniform();
      }
    }
    double fx = score(x);
    Point step;
    step.fill(1.0);
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      double largest = 0;
      for (int d = 0; d < detail::kDims; ++d) {
        bool moved = false;
        for (double dir : {1.0, -1.0}) {
          Point y = x;
          y[d] = std::clamp(y[d] + dir * step[d], -kBox, kBox);
          const double fy = score(y);
          if (fy > fx) {
            x = y;
            fx = fy;
            moved = true;
            break;
          }
        }
        step[d] = moved ? std::min(step[d] * 2.0, 8.0) : step[d] * 0.5;
        largest = std::max(largest, step[d]);
      }
      if (largest < 1e-7) break;
    }
    if (fx > best) {
      best = fx;
      best_x = x;
    }
  }

  if (!best_x || !std::isfinite(best)) {
    res.violated_constraint = "no parameter point satisfies the soundness target";
    return res;
  }
  res.feasible = true;
  res.params = detail::decode_point(*best_x, cap, cfg.eps_h);
  res.breakdown = key_length(n, gamma, omega_thresh, m, res.params);
  return res;
}

}  // namespace diqkd

#endif  // DIQKD_KEYLEN_OPTIMIZE_HPP_
