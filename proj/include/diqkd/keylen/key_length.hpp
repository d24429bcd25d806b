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

#ifndef DIQKD_KEYLEN_KEY_LENGTH_HPP_
#define DIQKD_KEYLEN_KEY_LENGTH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "diqkd/auth/hash.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/keylen/entropy_bound.hpp"
#include "diqkd/numeric.hpp"
#include "diqkd/trevisan/upsilon.hpp"

namespace diqkd {

struct SecurityParams {
  double t = 0.82;
  double eps_h = kHashEpsilon;
  double eps_pa = 1e-11;
  double eps_ea = 1e-11;
  double alpha1 = 1.001;
  double alpha2 = 1.001;
  double eps_s = 1e-11;
  double eps_s1 = 1e-12;
  double eps_s2 = 1e-12;

  void validate() const {
    if (!(t > 0.75 && t < kOmegaMax)) throw DomainError("t outside (3/4, w_max)");
    for (double e : {eps_h, eps_pa, eps_ea, eps_s, eps_s1, eps_s2}) {
      if (!(e > 0.0 && e < 1.0)) throw DomainError("epsilon outside (0, 1)");
    }
    if (!(alpha1 > 1.0 && alpha1 < 2.0)) throw DomainError("alpha' outside (1, 2)");
    if (!(alpha2 > 1.0 && alpha2 < 1.0 + 1.0 / std::log2(5.0))) {
      throw DomainError("alpha'' outside (1, 1 + 1/log2 5)");
    }
    if (!(eps_s1 + 2.0 * eps_s2 < eps_s)) throw DomainError("need eps_s' + 2 eps_s'' < eps_s");
  }

  double soundness() const { return std::max(eps_ea, eps_pa + 2.0 * eps_s) + 4.0 * eps_h; }
};

// log2(1 / (1 - sqrt(1 - e^2))), without cancellation for small e.
inline double theta_eps(double e) {
  if (!(e > 0.0 && e < 1.0)) throw DomainError("smoothing parameter outside (0, 1)");
  return std::log2((1.0 + std::sqrt(1.0 - e * e)) / (e * e));
}

struct KeyLengthTerms {
  double entropy_rate = 0;
  double eat_gap = 0;
  double second_order = 0;
  double hmax_cost = 0;
  double renyi_costs = 0;
  double chain_rule = 0;
  double pa_cost = 0;
  double leakage = 0;
  double constant = -264.0;

  double sum() const {
    return entropy_rate + eat_gap + second_order + hmax_cost + renyi_costs + chain_rule +
           pa_cost + leakage + constant;
  }
};

struct KeyLengthBreakdown {
  KeyLengthTerms terms;
  double pre_upsilon = 0;
  std::uint64_t ell = 0;
  double soundness = 0;
  double omega_inf = 0;  // minimizer of the eat_gap infimum
  SecurityParams params;
};

namespace detail {

inline constexpr int kOmegaGrid = 10000;

struct OmegaGrid {
  std::vector<double> w, eta;
};

inline const OmegaGrid& omega_grid() {
  static const OmegaGrid grid = [] {
    OmegaGrid g;
    g.w.resize(kOmegaGrid);
    g.eta.resize(kOmegaGrid);
    for (int i = 0; i < kOmegaGrid; ++i) {
      g.w[i] = kOmegaMin + (kOmegaMax - kOmegaMin) * i / (kOmegaGrid - 1);
      g.eta[i] = eta(g.w[i]);
    }
    return g;
  }();
  return grid;
}

}  // namespace detail

// V(f_t, q(w)) = (ln 2 / 2) (log2 33 + sqrt(2 + Var))^2.
inline double eat_variance_term(const Tradeoff& f, double w) {
  const double s = std::log2(33.0) + std::sqrt(2.0 + f.variance_at(w));
  return std::numbers::ln2 / 2.0 * s * s;
}

// inf over w in [w_min, w_max] of eta(w) - g_t(w) - (alpha' - 1) V. Grid then
// golden-section refinement around the best grid point; the smaller value wins.
inline double eat_gap_infimum(const Tradeoff& f, double alpha1, double* argmin = nullptr) {
  const auto& grid = detail::omega_grid();
  auto value = [&](double w, double eta_w) {
    return eta_w - f.g(w) - (alpha1 - 1.0) * eat_variance_term(f, w);
  };
  int best_i = 0;
  double best = value(grid.w[0], grid.eta[0]);
  for (int i = 1; i < detail::kOmegaGrid; ++i) {
    const double v = value(grid.w[i], grid.eta[i]);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double best_w = grid.w[best_i];
  const double lo = grid.w[std::max(0, best_i - 1)];
  const double hi = grid.w[std::min(detail::kOmegaGrid - 1, best_i + 1)];
  const auto r = golden_section_minimize([&](double w) { return value(w, eta(w)); }, lo, hi, 1e-13);
  if (r.fx < best) {
    best = r.fx;
    best_w = r.x;
  }
  if (argmin) *argmin = best_w;
  return best;
}

// K_alpha' = 2^{(a-1) z} ln^3(2^z + e^2) / (6 (2 - a)^3 ln 2), z = 2 + g(1) - g(w_min).
inline double second_order_constant(const Tradeoff& f, double alpha1) {
  const double z = 2.0 + f.max_f() - f.min_f();
  const double l = std::log(std::exp2(z) + std::exp(2.0));
  return std::exp2((alpha1 - 1.0) * z) * l * l * l /
         (6.0 * std::pow(2.0 - alpha1, 3) * std::numbers::ln2);
}

inline KeyLengthBreakdown key_length(double n, double gamma, double omega_thresh, double m,
                                     const SecurityParams& sec) {
  sec.validate();
  if (!(n >= 1.0)) throw DomainError("n must be at least 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma outside (0, 1)");
  if (!(omega_thresh > 0.75 && omega_thresh <= kOmegaMax)) {
    throw DomainError("omega_thresh outside (3/4, w_max]");
  }
  if (!(m >= 0.0)) throw DomainError("m must be non-negative");

  const Tradeoff f(sec.t, gamma);
  const double a1 = sec.alpha1, a2 = sec.alpha2;
  const double log5sq = std::log2(5.0) * std::log2(5.0);
  const double log_ea = std::log2(1.0 / sec.eps_ea);

  KeyLengthBreakdown out;
  out.params = sec;
  auto& T = out.terms;
  T.entropy_rate = n * f.g(omega_thresh);
  T.eat_gap = n * eat_gap_infimum(f, a1, &out.omega_inf);
  T.second_order = -n * (a1 - 1.0) * (a1 - 1.0) * second_order_constant(f, a1);
  T.hmax_cost = -n * gamma - n * (a2 - 1.0) * log5sq;
  T.renyi_costs = -(theta_eps(sec.eps_s1) + a1 * log_ea) / (a1 - 1.0) -
                  (theta_eps(sec.eps_s2) + a2 * log_ea) / (a2 - 1.0);
  T.chain_rule = -3.0 * theta_eps(sec.eps_s - sec.eps_s1 - 2.0 * sec.eps_s2);
  T.pa_cost = -5.0 * std::log2(1.0 / sec.eps_pa);
  T.leakage = -m;
  out.pre_upsilon = T.sum();
  out.ell = out.pre_upsilon >= 1.0
                ? static_cast<std::uint64_t>(std::floor(upsilon(out.pre_upsilon)))
                : 0;
  out.soundness = sec.soundness();
  return out;
}

}  // namespace diqkd

#endif  // DIQKD_KEYLEN_KEY_LENGTH_HPP_
