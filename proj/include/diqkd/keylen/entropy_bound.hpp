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

#ifndef DIQKD_KEYLEN_ENTROPY_BOUND_HPP_
#define DIQKD_KEYLEN_ENTROPY_BOUND_HPP_

#include <cmath>
#include <numbers>

#include "diqkd/errors.hpp"
#include "diqkd/numeric.hpp"

namespace diqkd {

inline const double kOmegaMin = (1.0 - 1.0 / std::numbers::sqrt2) / 2.0;
inline const double kOmegaMax = (1.0 + 1.0 / std::numbers::sqrt2) / 2.0;

namespace detail {

inline double chsh_radicand(double w) { return std::max(0.0, 16.0 * w * (w - 1.0) + 3.0); }

inline void check_omega(double w) {
  if (!(w >= kOmegaMin - 1e-15 && w <= kOmegaMax + 1e-15)) {
    throw DomainError("winning probability outside the quantum set");
  }
}

}  // namespace detail

// CHSH entropy bound: 0 on [1/4, 3/4], else 1 - h((1 + sqrt(16w(w-1) + 3)) / 2).
inline double eta(double w) {
  detail::check_omega(w);
  if (w >= 0.25 && w <= 0.75) return 0.0;
  const double z = std::min(1.0, (1.0 + std::sqrt(detail::chsh_radicand(w))) / 2.0);
  return 1.0 - binary_entropy(z);
}

// d eta / d w = log2(z / (1 - z)) (8w - 4) / sqrt(r). Unbounded at the
// Tsirelson point.
inline double eta_derivative(double w) {
  detail::check_omega(w);
  if (w >= 0.25 && w <= 0.75) return 0.0;
  const double r = detail::chsh_radicand(w);
  const double sr = std::sqrt(r);
  const double z = (1.0 + sr) / 2.0;
  if (z >= 1.0) throw DomainError("entropy bound slope is unbounded at the Tsirelson point");
  return std::log2(z / (1.0 - z)) * (8.0 * w - 4.0) / sr;
}

// Tangent of eta at t and its affine extension to score distributions.
class Tradeoff {
 public:
  Tradeoff(double t, double gamma) : t_(t), gamma_(gamma) {
    if (!(t > 0.75 && t <= kOmegaMax)) throw DomainError("tangent point outside (3/4, w_max]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma outside (0, 1]");
    eta_t_ = eta(t);
    slope_ = eta_derivative(t);
    f_lost_ = g(0.0) / gamma + (1.0 - 1.0 / gamma) * g(1.0);
    f_other_ = g(1.0);
  }

  double t() const { return t_; }
  double slope() const { return slope_; }
  double g(double w) const { return eta_t_ + (w - t_) * slope_; }

  // f on {0, 1, bot}: the lost branch is 1/gamma-weighted.
  double f_lost() const { return f_lost_; }
  double f_won() const { return f_other_; }
  double f_none() const { return f_other_; }
  double f(double p_lost, double p_won, double p_none) const {
    return p_lost * f_lost_ + (p_won + p_none) * f_other_;
  }

  double max_f() const { return g(1.0); }
  double min_f() const { return g(kOmegaMin); }

  double variance(double p_lost, double p_won, double p_none) const {
    const double mean = f(p_lost, p_won, p_none);
    const double v = p_lost * f_lost_ * f_lost_ + (p_won + p_none) * f_other_ * f_other_ -
                     mean * mean;
    return std::max(0.0, v);
  }

  // Score distribution q(w) = (gamma(1 - w), gamma w, 1 - gamma).
  double variance_at(double w) const {
    return variance(gamma_ * (1.0 - w), gamma_ * w, 1.0 - gamma_);
  }

 private:
  double t_, gamma_;
  double eta_t_ = 0, slope_ = 0;
  double f_lost_ = 0, f_other_ = 0;
};

inline Tradeoff tradeoff_terms(double t, double gamma) { return Tradeoff(t, gamma); }

}  // namespace diqkd

#endif  // DIQKD_KEYLEN_ENTROPY_BOUND_HPP_
