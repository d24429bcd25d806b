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

#ifndef DIQKD_AUTH_SHARED_KEY_HPP_
#define DIQKD_AUTH_SHARED_KEY_HPP_

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "diqkd/auth/hash.hpp"
#include "diqkd/bits.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

enum class PadSlot : std::uint8_t { kErrorCorrection = 0, kAlice = 1, kBob = 2, kFlag = 3 };

inline constexpr std::array<PadSlot, 4> kPadSlots = {
    PadSlot::kErrorCorrection, PadSlot::kAlice, PadSlot::kBob, PadSlot::kFlag};

inline const char* pad_name(PadSlot s) {
  switch (s) {
    case PadSlot::kErrorCorrection: return "d_ec";
    case PadSlot::kAlice: return "d_a";
    case PadSlot::kBob: return "d_b";
    case PadSlot::kFlag: return "d_f";
  }
  return "?";
}

inline constexpr char kK0Magic[8] = {'D', 'I', 'Q', 'K', 'D', 'K', '0', '\n'};
inline constexpr std::uint32_t kK0Version = 1;

// Pre-shared key: extractor seed, hash seed, and four one-time pads. Each pad
// can be spent once. Not synchronized; one owner per copy.
class SharedKeyK0 {
 public:
  SharedKeyK0(BitVector trevisan_seed, HashSeed hash_seed, std::array<std::uint64_t, 4> pads)
      : s_trev_(std::move(trevisan_seed)), hash_seed_(hash_seed), pads_(pads) {}

  static SharedKeyK0 generate(Rng& rng, std::size_t trevisan_bits) {
    BitVector trev(trevisan_bits);
    for (std::size_t i = 0; i < trevisan_bits; ++i) trev.set(i, rng.bit());
    const auto hs = HashSeed::random(rng);
    std::array<std::uint64_t, 4> pads{};
    for (auto& p : pads) p = rng.next_u64();
    return SharedKeyK0(std::move(trev), hs, pads);
  }

  const BitVector& trevisan_seed() const { return s_trev_; }
  const HashSeed& hash_seed() const { return hash_seed_; }

  // Returns the pad and marks it spent.
  std::uint64_t spend(PadSlot slot) {
    const auto i = static_cast<std::size_t>(slot);
    if (spent_[i]) {
      throw PadReuseError(std::string("one-time pad ") + pad_name(slot) + " already spent");
    }
    spent_[i] = true;
    return pads_[i];
  }

  bool is_spent(PadSlot slot) const { return spent_[static_cast<std::size_t>(slot)]; }
  const std::array<bool, 4>& spent() const { return spent_; }
  std::uint64_t pad_value(PadSlot slot) const { return pads_[static_cast<std::size_t>(slot)]; }

  std::uint64_t consumed_bits() const {
    std::uint64_t c = 0;
    for (bool s : spent_) c += s ? kTagBits : 0;
    return c;
  }
  std::uint64_t reusable_bits() const { return s_trev_.size() + kHashSeedBits; }

  // Segments: s_trev, s_vhash, d_ec, d_a, d_b, d_f, each as a bit file image.
  // The header records the hash seed length.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out(kK0Magic, kK0Magic + 8);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(kK0Version >> (8 * i)));
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(kHashSeedBits >> (8 * i)));
    auto seg = [&](const BitVector& b) {
      const auto s = serialize_bits(b);
      out.insert(out.end(), s.begin(), s.end());
    };
    seg(s_trev_);
    seg(hash_seed_.to_bits());
    for (auto p : pads_) {
      BitVector b(64);
      for (unsigned k = 0; k < 64; ++k) b.set(k, (p >> k) & 1);
      seg(b);
    }
    return out;
  }

  static SharedKeyK0 from_bytes(std::span<const std::uint8_t> in) {
    if (in.size() < 16 || std::memcmp(in.data(), kK0Magic, 8) != 0) {
      throw FormatError("not a K0 file");
    }
    auto u32 = [&](std::size_t off) {
      std::uint32_t v = 0;
      for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[off + i]) << (8 * i);
      return v;
    };
    if (u32(8) != kK0Version) throw FormatError("unsupported K0 version");
    if (u32(12) != kHashSeedBits) throw FormatError("K0 hash seed length mismatch");
    std::size_t off = 16;
    auto trev = deserialize_bits(in, off);
    auto hs_bits = deserialize_bits(in, off);
    if (hs_bits.size() != kHashSeedBits) throw FormatError("bad hash seed segment");
    std::array<std::uint64_t, 4> pads{};
    for (auto& p : pads) {
      auto b = deserialize_bits(in, off);
      if (b.size() != 64) throw FormatError("bad pad segment");
      p = b.word_at(0);
    }
    if (off != in.size()) throw FormatError("trailing bytes in K0");
    return SharedKeyK0(std::move(trev), HashSeed::from_bits(hs_bits), pads);
  }

  void save(const std::string& path) const { write_file_bytes(path, to_bytes()); }
  static SharedKeyK0 load(const std::string& path) { return from_bytes(read_file_bytes(path)); }

 private:
  BitVector s_trev_;
  HashSeed hash_seed_;
  std::array<std::uint64_t, 4> pads_{};
  std::array<bool, 4> spent_{};
};

// Tag with a pad drawn from k0; the pad is spent.
inline Tag64 wc_tag(SharedKeyK0& k0, PadSlot slot, std::span<const std::uint8_t> message) {
  return wc_tag(k0.hash_seed(), k0.spend(slot), message);
}

inline bool verify_tag(SharedKeyK0& k0, PadSlot slot, std::span<const std::uint8_t> message,
                       Tag64 tag) {
  return verify_tag(k0.hash_seed(), k0.spend(slot), message, tag);
}

}  // namespace diqkd

#endif  // DIQKD_AUTH_SHARED_KEY_HPP_
