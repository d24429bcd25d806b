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

// Slow reference implementations used only by tests. Nothing here shares code
// with the library beyond the pinned irreducible table and BitVector.

#ifndef DIQKD_TESTS_ORACLE_HPP_
#define DIQKD_TESTS_ORACLE_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "diqkd/bits.hpp"
#include "diqkd/trevisan/irreducible_table.hpp"

namespace oracle {

// GF(2)[x] polynomial, one bool per coefficient, index = power.
using Poly = std::vector<bool>;

inline void trim(Poly& p) {
  while (!p.empty() && !p.back()) p.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      if (m[i]) a[i + shift] = !a[i + shift];
    }
    trim(a);
  }
  return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j]) r[i + j] = !r[i + j];
    }
  }
  trim(r);
  return r;
}

inline Poly poly_add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), false);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] != b[i];
  trim(a);
  return a;
}

// Modulus of GF(2^l) as listed in the shipped table.
inline Poly field_modulus(unsigned l) {
  const auto& t = diqkd::kIrreducibleTaps[l - 1];
  Poly m(l + 1, false);
  m[l] = true;
  m[0] = true;
  if (t.a) m[t.a] = true;
  if (t.b) {
    m[t.b] = true;
    m[t.c] = true;
  }
  return m;
}

// Word-packed GF(2)[x] for the irreducibility check, where degrees reach 512.
using WPoly = std::vector<std::uint64_t>;

inline int wdeg(const WPoly& p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i]) return static_cast<int>(64 * i + 63 - std::countl_zero(p[i]));
  }
  return -1;
}

inline void wxor_shifted(WPoly& dst, const WPoly& src, unsigned shift) {
  const std::size_t ws = shift / 64, bs = shift % 64;
  if (dst.size() < src.size() + ws + 1) dst.resize(src.size() + ws + 1, 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i + ws] ^= src[i] << bs;
    if (bs) dst[i + ws + 1] ^= src[i] >> (64 - bs);
  }
}

inline WPoly wmod(WPoly a, const WPoly& m) {
  const int dm = wdeg(m);
  for (int d = wdeg(a); d >= dm; d = wdeg(a)) wxor_shifted(a, m, static_cast<unsigned>(d - dm));
  a.resize(m.size());
  return a;
}

inline WPoly wsquare(const WPoly& a) {
  WPoly r(2 * a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (unsigned k = 0; k < 64; ++k) {
      if ((a[i] >> k) & 1) {
        const std::size_t pos = 2 * (64 * i + k);
        r[pos / 64] ^= std::uint64_t{1} << (pos % 64);
      }
    }
  }
  return r;
}

inline WPoly wgcd(WPoly a, WPoly b) {
  while (wdeg(b) >= 0) {
    a = wmod(a, b);
    std::swap(a, b);
  }
  return a;
}

inline WPoly to_words(const Poly& p) {
  WPoly w((p.size() + 63) / 64 + 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) w[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return w;
}

// Rabin: f of degree l is irreducible iff x^(2^l) = x mod f and
// gcd(x^(2^(l/p)) - x, f) = 1 for every prime p dividing l.
inline bool is_irreducible(const Poly& poly) {
  const WPoly f = to_words(poly);
  const unsigned l = static_cast<unsigned>(wdeg(f));
  WPoly x(f.size(), 0);
  x[0] = 2;
  const WPoly x_mod = wmod(x, f);
  auto frob_minus_x = [&](unsigned k) {
    WPoly p = x_mod;
    for (unsigned i = 0; i < k; ++i) p = wmod(wsquare(p), f);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] ^= x_mod[i];
    return p;
  };
  if (wdeg(frob_minus_x(l)) >= 0) return false;
  unsigned rest = l;
  for (unsigned p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    if (wdeg(wgcd(f, frob_minus_x(l / p))) != 0) return false;
  }
  return true;
}

// Naive GF(2^128) product modulo x^128 + x^7 + x^2 + x + 1.
inline std::pair<std::uint64_t, std::uint64_t> gf128_mul(std::uint64_t alo, std::uint64_t ahi,
                                                         std::uint64_t blo, std::uint64_t bhi) {
  std::uint64_t rlo = 0, rhi = 0;
  for (int i = 127; i >= 0; --i) {
    const bool carry = rhi >> 63;
    rhi = (rhi << 1) | (rlo >> 63);
    rlo <<= 1;
    if (carry) rlo ^= 0x87;
    const bool bit = i >= 64 ? (bhi >> (i - 64)) & 1 : (blo >> i) & 1;
    if (bit) {
      rlo ^= alo;
      rhi ^= ahi;
    }
  }
  return {rlo, rhi};
}

// Block weak design, written from its definition. Block b owns seed indices
// [b q^2, (b+1) q^2); a set is the graph of a polynomial over GF(q) whose
// coefficients are the base-q digits of its index within the block.
struct Design {
  std::vector<std::vector<std::uint64_t>> sets;
};

// Same greedy rule as the documented construction: keep adding polynomials to
// the current block while (sets already placed) + bound(prefix) <= ell.
inline double overlap_bound(std::uint64_t m, std::uint64_t q, std::uint64_t t) {
  unsigned d = 0;
  while (std::pow(static_cast<double>(q), d + 1) < static_cast<double>(m)) ++d;
  double total = static_cast<double>(m);
  for (unsigned k = 1; k <= d && k <= t; ++k) {
    double binom = 1;
    for (unsigned j = 0; j < k; ++j) binom = binom * static_cast<double>(t - j) / (j + 1);
    const double qk = std::pow(static_cast<double>(q), k);
    total += binom * std::min(static_cast<double>(m), std::floor(m / qk) + k);
  }
  return total - 1;
}

inline Design weak_design(std::uint64_t ell, std::uint64_t t, std::uint64_t q) {
  Design d;
  std::uint64_t block = 0;
  while (d.sets.size() < ell) {
    const std::uint64_t done = d.sets.size();
    std::uint64_t m = 1;
    while (done + m < ell && done + overlap_bound(m + 1, q, t) <= static_cast<double>(ell)) ++m;
    for (std::uint64_t i = 0; i < m; ++i) {
      std::vector<std::uint64_t> coeff;
      for (std::uint64_t v = i; v; v /= q) coeff.push_back(v % q);
      std::vector<std::uint64_t> s;
      for (std::uint64_t a = 0; a < t; ++a) {
        std::uint64_t val = 0, pw = 1;
        for (auto c : coeff) {
          val = (val + c * pw) % q;
          pw = pw * a % q;
        }
        s.push_back(block * q * q + a * q + val);
      }
      d.sets.push_back(std::move(s));
    }
    ++block;
  }
  return d;
}

// One output bit: the source, cut into l-bit blocks c_0..c_{N-1}, is read as
// sum_j c_j alpha^(N-1-j) over GF(2^l) (Reed-Solomon evaluation at alpha);
// the bit is the inner product of that value with beta (Hadamard).
inline bool one_bit(const diqkd::BitVector& source, const Poly& alpha, const Poly& beta,
                    unsigned l) {
  const Poly mod = field_modulus(l);
  const std::size_t N = (source.size() + l - 1) / l;
  Poly y;
  for (std::size_t j = 0; j < N; ++j) {
    Poly c(l, false);
    for (unsigned k = 0; k < l; ++k) {
      const std::size_t pos = j * l + k;
      c[k] = pos < source.size() && source.get(pos);
    }
    trim(c);
    Poly pw = {true};
    for (std::size_t e = 0; e < N - 1 - j; ++e) pw = poly_mod(poly_mul(pw, alpha), mod);
    y = poly_add(y, poly_mod(poly_mul(c, pw), mod));
  }
  bool parity = false;
  for (unsigned k = 0; k < l; ++k) {
    parity ^= (k < y.size() && y[k]) && (k < beta.size() && beta[k]);
  }
  return parity;
}

inline diqkd::BitVector extract(const diqkd::BitVector& source, const diqkd::BitVector& seed,
                                std::uint64_t ell, std::uint64_t t, std::uint64_t q) {
  const unsigned l = static_cast<unsigned>(t / 2);
  const Design d = weak_design(ell, t, q);
  diqkd::BitVector out(ell);
  for (std::uint64_t i = 0; i < ell; ++i) {
    Poly alpha(l), beta(l);
    for (unsigned k = 0; k < l; ++k) {
      alpha[k] = seed.get(d.sets[i][k]);
      beta[k] = seed.get(d.sets[i][l + k]);
    }
    trim(alpha);
    out.set(i, one_bit(source, alpha, beta, l));
  }
  return out;
}

}  // namespace oracle

#endif  // DIQKD_TESTS_ORACLE_HPP_
