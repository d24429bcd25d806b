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

#ifndef DIQKD_BITS_HPP_
#define DIQKD_BITS_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diqkd/errors.hpp"

namespace diqkd {

// Packed bit string. Bit i lives in byte i / 8 at position i % 8 (LSB first),
// which is also the on-disk and on-wire packing.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : bytes_((n + 7) / 8, 0), size_(n) {}

  static BitVector from_bytes(std::span<const std::uint8_t> bytes,
                              std::size_t nbits) {
    if (nbits > bytes.size() * 8) {
      throw FormatError("bit count exceeds byte buffer");
    }
    BitVector v(nbits);
    std::copy_n(bytes.begin(), v.bytes_.size(), v.bytes_.begin());
    v.clear_tail();
    return v;
  }

  template <typename Int>
  static BitVector from_values(const std::vector<Int>& values) {
    BitVector v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v.set(i, values[i] != 0);
    return v;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool v) {
    const auto mask = static_cast<std::uint8_t>(1u << (i & 7));
    if (v) {
      bytes_[i >> 3] |= mask;
    } else {
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
  }
  void flip(std::size_t i) {
    bytes_[i >> 3] ^= static_cast<std::uint8_t>(1u << (i & 7));
  }

  void push_back(bool v) {
    if ((size_ & 7) == 0) bytes_.push_back(0);
    ++size_;
    set(size_ - 1, v);
  }

  void append(const BitVector& other) {
    for (std::size_t i = 0; i < other.size(); ++i) push_back(other.get(i));
  }

  // Bits [pos, pos + len).
  BitVector slice(std::size_t pos, std::size_t len) const {
    if (pos > size_ || len > size_ - pos) {
      throw DomainError("slice out of range");
    }
    BitVector out(len);
    if ((pos & 7) == 0) {
      std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos >> 3),
                  out.bytes_.size(), out.bytes_.begin());
      out.clear_tail();
      return out;
    }
    for (std::size_t i = 0; i < len; ++i) out.set(i, get(pos + i));
    return out;
  }

  // Reads up to 64 bits starting at pos; bits past the end read as zero.
  std::uint64_t word_at(std::size_t pos, unsigned nbits = 64) const {
    std::uint64_t w = 0;
    for (unsigned k = 0; k < nbits && pos + k < size_; ++k) {
      w |= static_cast<std::uint64_t>(get(pos + k)) << k;
    }
    return w;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto b : bytes_) c += static_cast<std::size_t>(std::popcount(b));
    return c;
  }

  BitVector& operator^=(const BitVector& o) {
    if (o.size_ != size_) throw DomainError("xor of unequal lengths");
    for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= o.bytes_[i];
    return *this;
  }

  std::size_t hamming_distance(const BitVector& o) const {
    if (o.size_ != size_) throw DomainError("distance of unequal lengths");
    std::size_t c = 0;
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
      c += static_cast<std::size_t>(
          std::popcount(static_cast<std::uint8_t>(bytes_[i] ^ o.bytes_[i])));
    }
    return c;
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.bytes_ == b.bytes_;
  }

 private:
  void clear_tail() {
    if (size_ & 7) bytes_.back() &= static_cast<std::uint8_t>((1u << (size_ & 7)) - 1);
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

inline void put_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_u64_le(std::span<const std::uint8_t> in) {
  if (in.size() < 8) throw FormatError("truncated u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

// Bit file: 8-byte little-endian bit count, then packed bytes.
inline std::vector<std::uint8_t> serialize_bits(const BitVector& v) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + v.bytes().size());
  put_u64_le(out, v.size());
  out.insert(out.end(), v.bytes().begin(), v.bytes().end());
  return out;
}

// Parses a bit file image starting at `offset`; advances it.
inline BitVector deserialize_bits(std::span<const std::uint8_t> in,
                                  std::size_t& offset) {
  if (offset + 8 > in.size()) throw FormatError("truncated bit header");
  const std::uint64_t nbits = get_u64_le(in.subspan(offset, 8));
  offset += 8;
  const std::uint64_t nbytes = (nbits + 7) / 8;
  if (nbits > (std::uint64_t{1} << 60) || nbytes > in.size() - offset) {
    throw FormatError("truncated bit payload");
  }
  auto v = BitVector::from_bytes(in.subspan(offset, nbytes), nbits);
  offset += nbytes;
  return v;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::string& path,
                             std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw FormatError("short write to " + path);
}

inline BitVector read_bit_file(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  std::size_t off = 0;
  auto v = deserialize_bits(bytes, off);
  if (off != bytes.size()) throw FormatError("trailing bytes in " + path);
  return v;
}

inline void write_bit_file(const std::string& path, const BitVector& v) {
  write_file_bytes(path, serialize_bits(v));
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

inline std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2) throw FormatError("odd-length hex string");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw FormatError("bad hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

}  // namespace diqkd

#endif  // DIQKD_BITS_HPP_
