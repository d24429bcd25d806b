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

#ifndef DIQKD_AUTH_HASH_HPP_
#define DIQKD_AUTH_HASH_HPP_

// NhPoly64: a 64-bit almost-XOR-universal family.
//
//   1. NH over 128-byte chunks: sum of (m[2i] + k[2i]) * (m[2i+1] + k[2i+1])
//      with 64-bit word additions and a 128-bit sum, masked to 126 bits.
//      Collision probability per chunk <= 2^-62 for equal-length chunks.
//   2. Polynomial evaluation over p = 2^127 - 1 with a leading 1 and the
//      message bit length as the constant term, so messages of different
//      length never share a polynomial. Collision <= (B + 1) / p for B chunks.
//   3. Multiply by a key in GF(2^128) and keep the low 64 bits; a nonzero
//      input difference maps to a uniform 64-bit difference.
//
// For messages of at most 2^62 bits: eps <= 2^-62 + 2^-64 + 2^-75 < 2^-61.
// Seed: 1024 bits NH key, 128 bits polynomial key, 128 bits output key.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "diqkd/auth/gf2_128.hpp"
#include "diqkd/bits.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

inline constexpr std::size_t kHashSeedBits = 1280;
inline constexpr std::size_t kTagBits = 64;
inline constexpr std::uint64_t kMaxMessageBits = std::uint64_t{1} << 62;
inline constexpr double kHashEpsilonLog2 = -61.0;
inline constexpr double kHashEpsilon = 0x1.0p-61;

struct Tag64 {
  std::uint64_t value = 0;
  friend bool operator==(const Tag64&, const Tag64&) = default;
  Tag64 operator^(std::uint64_t pad) const { return {value ^ pad}; }
};

class HashSeed {
 public:
  HashSeed() = default;

  static HashSeed from_bits(const BitVector& bits) {
    if (bits.size() != kHashSeedBits) throw DomainError("hash seed must be 1280 bits");
    HashSeed s;
    for (std::size_t w = 0; w < 16; ++w) s.nh_[w] = bits.word_at(64 * w);
    s.poly_ = {bits.word_at(1024), bits.word_at(1088)};
    s.final_ = {bits.word_at(1152), bits.word_at(1216)};
    return s;
  }

  static HashSeed random(Rng& rng) {
    BitVector bits(kHashSeedBits);
    for (std::size_t i = 0; i < kHashSeedBits; ++i) bits.set(i, rng.bit());
    return from_bits(bits);
  }

  BitVector to_bits() const {
    BitVector bits(kHashSeedBits);
    auto put = [&](std::size_t pos, std::uint64_t w) {
      for (unsigned k = 0; k < 64; ++k) bits.set(pos + k, (w >> k) & 1);
    };
    for (std::size_t w = 0; w < 16; ++w) put(64 * w, nh_[w]);
    put(1024, poly_.lo);
    put(1088, poly_.hi);
    put(1152, final_.lo);
    put(1216, final_.hi);
    return bits;
  }

  const std::array<std::uint64_t, 16>& nh_key() const { return nh_; }
  const U128& poly_key() const { return poly_; }
  const U128& final_key() const { return final_; }

 private:
  std::array<std::uint64_t, 16> nh_{};
  U128 poly_{};
  U128 final_{};
};

namespace detail {

using u128 = unsigned __int128;
inline constexpr u128 kP127 = (u128{1} << 127) - 1;

inline u128 mod_p127(u128 x) {
  x = (x & kP127) + (x >> 127);
  x = (x & kP127) + (x >> 127);
  return x == kP127 ? 0 : x;
}

// a * b mod 2^127 - 1 for a, b < 2^127.
inline u128 mulmod_p127(u128 a, u128 b) {
  const std::uint64_t a0 = static_cast<std::uint64_t>(a), a1 = static_cast<std::uint64_t>(a >> 64);
  const std::uint64_t b0 = static_cast<std::uint64_t>(b), b1 = static_cast<std::uint64_t>(b >> 64);
  const u128 p00 = u128{a0} * b0, p01 = u128{a0} * b1, p10 = u128{a1} * b0, p11 = u128{a1} * b1;
  // 256-bit product as four limbs.
  std::uint64_t l0 = static_cast<std::uint64_t>(p00);
  u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) + static_cast<std::uint64_t>(p10);
  std::uint64_t l1 = static_cast<std::uint64_t>(mid);
  u128 top = (mid >> 64) + (p01 >> 64) + (p10 >> 64) + p11;
  // value = top * 2^128 + low with top < 2^126, and 2^128 = 2 mod p.
  const u128 low = (u128{l1} << 64) | l0;
  return mod_p127(mod_p127(low) + (top << 1));
}

}  // namespace detail

inline Tag64 au_hash(const HashSeed& seed, std::span<const std::uint8_t> message) {
  using detail::u128;
  const std::uint64_t nbytes = message.size();
  if (nbytes > kMaxMessageBits / 8) throw DomainError("message exceeds 2^62 bits");
  const auto& k = seed.nh_key();
  const u128 kp = detail::mod_p127(((u128{seed.poly_key().hi} << 64) | seed.poly_key().lo) &
                                   detail::kP127);
  constexpr u128 kMask126 = (u128{1} << 126) - 1;

  auto word = [&](std::size_t pos) -> std::uint64_t {
    std::uint64_t w = 0;
    for (std::size_t b = 0; b < 8 && pos + b < nbytes; ++b) {
      w |= static_cast<std::uint64_t>(message[pos + b]) << (8 * b);
    }
    return w;
  };

  u128 y = 1;
  for (std::size_t off = 0; off < nbytes; off += 128) {
    const std::size_t len = std::min<std::size_t>(128, nbytes - off);
    const std::size_t pairs = (len + 15) / 16;
    u128 acc = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
      const std::uint64_t m0 = word(off + 16 * i), m1 = word(off + 16 * i + 8);
      acc += u128{m0 + k[2 * i]} * u128{m1 + k[2 * i + 1]};
    }
    y = detail::mod_p127(detail::mulmod_p127(y, kp) + (acc & kMask126));
  }
  y = detail::mod_p127(detail::mulmod_p127(y, kp) + u128{nbytes * 8});

  const U128 out = gf128_mul({static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(y >> 64)},
                             seed.final_key());
  return {out.lo};
}

// Hash of a bit string: its bit-file serialization (length header + bytes).
inline Tag64 au_hash_bits(const HashSeed& seed, const BitVector& bits) {
  return au_hash(seed, serialize_bits(bits));
}

// Proven collision bound for a message of `nbytes` bytes.
inline double au_hash_epsilon(std::uint64_t nbytes) {
  const double chunks = std::ceil(static_cast<double>(nbytes) / 128.0);
  return 0x1.0p-62 + (chunks + 1.0) * 0x1.0p-127 + 0x1.0p-64;
}

inline Tag64 wc_tag(const HashSeed& seed, std::uint64_t otp,
                    std::span<const std::uint8_t> message) {
  return au_hash(seed, message) ^ otp;
}

// Branch-free comparison.
inline bool tags_equal(Tag64 a, Tag64 b) {
  const volatile std::uint64_t diff = a.value ^ b.value;
  return diff == 0;
}

inline bool verify_tag(const HashSeed& seed, std::uint64_t otp,
                       std::span<const std::uint8_t> message, Tag64 tag) {
  return tags_equal(wc_tag(seed, otp, message), tag);
}

}  // namespace diqkd

#endif  // DIQKD_AUTH_HASH_HPP_
