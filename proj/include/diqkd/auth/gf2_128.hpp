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

#ifndef DIQKD_AUTH_CLMUL_HPP_
#define DIQKD_AUTH_CLMUL_HPP_

#include <cstdint>

namespace diqkd {

struct U128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const U128&, const U128&) = default;
};

// Carry-less 64x64 -> 128 multiply, 4-bit windows.
inline U128 clmul64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t tlo[16], thi[16];
  tlo[0] = thi[0] = 0;
  for (int j = 1; j < 16; ++j) {
    if (j & 1) {
      tlo[j] = tlo[j ^ 1] ^ a;
      thi[j] = thi[j ^ 1];
    } else {
      tlo[j] = tlo[j >> 1] << 1;
      thi[j] = (thi[j >> 1] << 1) | (tlo[j >> 1] >> 63);
    }
  }
  U128 r;
  for (int s = 60; s >= 0; s -= 4) {
    r.hi = (r.hi << 4) | (r.lo >> 60);
    r.lo <<= 4;
    const unsigned nib = (b >> s) & 15u;
    r.lo ^= tlo[nib];
    r.hi ^= thi[nib];
  }
  return r;
}

// Product in GF(2^128) modulo x^128 + x^7 + x^2 + x + 1; bit i of the
// (lo, hi) pair is the coefficient of x^i.
inline U128 gf128_mul(U128 a, U128 b) {
  const U128 p0 = clmul64(a.lo, b.lo);
  const U128 p1 = clmul64(a.lo, b.hi);
  const U128 p2 = clmul64(a.hi, b.lo);
  const U128 p3 = clmul64(a.hi, b.hi);
  std::uint64_t w0 = p0.lo;
  std::uint64_t w1 = p0.hi ^ p1.lo ^ p2.lo;
  std::uint64_t w2 = p1.hi ^ p2.hi ^ p3.lo;
  std::uint64_t w3 = p3.hi;
  // Fold x^(128 + k) into x^k (x^7 + x^2 + x + 1), high word first.
  auto fold = [](std::uint64_t h, std::uint64_t& lo_word, std::uint64_t& hi_word) {
    lo_word ^= h ^ (h << 1) ^ (h << 2) ^ (h << 7);
    hi_word ^= (h >> 63) ^ (h >> 62) ^ (h >> 57);
  };
  fold(w3, w1, w2);
  fold(w2, w0, w1);
  return {w0, w1};
}

}  // namespace diqkd

#endif  // DIQKD_AUTH_CLMUL_HPP_
