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

#ifndef DIQKD_TREVISAN_GF2N_HPP_
#define DIQKD_TREVISAN_GF2N_HPP_

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "diqkd/auth/gf2_128.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/trevisan/irreducible_table.hpp"

namespace diqkd {

// GF(2^l) for l <= 64 * W, modulus from kIrreducibleTaps. Element bit k is
// the coefficient of x^k.
template <std::size_t W>
class Gf2n {
 public:
  using Elem = std::array<std::uint64_t, W>;

  explicit Gf2n(unsigned degree) : l_(degree) {
    if (degree == 0 || degree > kMaxFieldDegree || degree > 64 * W) {
      throw DomainError("field degree out of range");
    }
    const auto& t = kIrreducibleTaps[degree - 1];
    terms_.push_back(0);
    if (t.a > 0) terms_.push_back(t.a);
    if (t.b > 0) {
      terms_.push_back(t.b);
      terms_.push_back(t.c);
    }
  }

  unsigned degree() const { return l_; }

  Elem mul(const Elem& a, const Elem& b) const {
    std::array<std::uint64_t, 2 * W + 1> p{};
    for (std::size_t i = 0; i < W; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < W; ++j) {
        const U128 r = clmul64(a[i], b[j]);
        p[i + j] ^= r.lo;
        p[i + j + 1] ^= r.hi;
      }
    }
    // x^l = sum of x^e over the tap terms; fold the high part until clear.
    for (;;) {
      std::array<std::uint64_t, 2 * W + 1> h{};
      bool any = false;
      const std::size_t ws = l_ / 64, bs = l_ % 64;
      for (std::size_t k = 0; k + ws < p.size(); ++k) {
        std::uint64_t v = p[k + ws] >> bs;
        if (bs && k + ws + 1 < p.size()) v |= p[k + ws + 1] << (64 - bs);
        h[k] = v;
        any |= v != 0;
      }
      if (!any) break;
      for (std::size_t k = ws + 1; k < p.size(); ++k) p[k] = 0;
      if (bs) p[ws] &= (std::uint64_t{1} << bs) - 1; else p[ws] = 0;
      for (unsigned e : terms_) xor_shifted(p, h, e);
    }
    Elem out;
    for (std::size_t i = 0; i < W; ++i) out[i] = p[i];
    return out;
  }

 private:
  template <std::size_t N>
  static void xor_shifted(std::array<std::uint64_t, N>& dst,
                          const std::array<std::uint64_t, N>& src, unsigned shift) {
    const std::size_t ws = shift / 64, bs = shift % 64;
    for (std::size_t k = N; k-- > 0;) {
      if (k < ws) break;
      std::uint64_t v = src[k - ws] << bs;
      if (bs && k >= ws + 1) v |= src[k - ws - 1] >> (64 - bs);
      dst[k] ^= v;
    }
  }

  unsigned l_;
  std::vector<unsigned> terms_;
};

// Calls f(std::integral_constant<std::size_t, W>{}) with W = ceil(l / 64).
template <typename F>
decltype(auto) with_field_width(unsigned l, F&& f) {
  switch ((l + 63) / 64) {
    case 1: return f(std::integral_constant<std::size_t, 1>{});
    case 2: return f(std::integral_constant<std::size_t, 2>{});
    case 3: return f(std::integral_constant<std::size_t, 3>{});
    case 4: return f(std::integral_constant<std::size_t, 4>{});
    case 5: return f(std::integral_constant<std::size_t, 5>{});
    case 6: return f(std::integral_constant<std::size_t, 6>{});
    case 7: return f(std::integral_constant<std::size_t, 7>{});
    case 8: return f(std::integral_constant<std::size_t, 8>{});
    default: throw DomainError("field degree out of range");
  }
}

}  // namespace diqkd

#endif  // DIQKD_TREVISAN_GF2N_HPP_
