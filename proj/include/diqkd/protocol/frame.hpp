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


#ifndef DIQKD_PROTOCOL_FRAME_HPP_
#define DIQKD_PROTOCOL_FRAME_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diqkd/errors.hpp"

namespace diqkd {

// Protocol messages use 1..9. ABORT carries a typed reason to the peer; the
// remaining tags belong to the simulated device link and session setup.
enum class MsgType : std::uint8_t {
  kRoundT = 0x01,
  kBasesX = 0x02,
  kSyndrome = 0x03,
  kHashEc = 0x04,
  kTagB = 0x05,
  kConfirmC = 0x06,
  kTagA = 0x07,
  kFlagF = 0x08,
  kTagF = 0x09,
  kAbort = 0x10,
  kHello = 0x20,
  kDeviceInput = 0x21,
  kDeviceOutput = 0x22,
};

struct MsgTypeInfo {
  MsgType type;
  const char* name;
};

inline constexpr std::array<MsgTypeInfo, 13> kMsgTypes = {{
    {MsgType::kRoundT, "ROUND_T"},
    {MsgType::kBasesX, "BASES_X"},
    {MsgType::kSyndrome, "SYNDROME"},
    {MsgType::kHashEc, "HASH_EC"},
    {MsgType::kTagB, "TAG_B"},
    {MsgType::kConfirmC, "CONFIRM_C"},
    {MsgType::kTagA, "TAG_A"},
    {MsgType::kFlagF, "FLAG_F"},
    {MsgType::kTagF, "TAG_F"},
    {MsgType::kAbort, "ABORT"},
    {MsgType::kHello, "HELLO"},
    {MsgType::kDeviceInput, "DEVICE_INPUT"},
    {MsgType::kDeviceOutput, "DEVICE_OUTPUT"},
}};

inline const char* msg_type_name(MsgType t) {
  for (const auto& i : kMsgTypes) {
    if (i.type == t) return i.name;
  }
  return "UNKNOWN";
}

inline std::optional<MsgType> msg_type_from_byte(std::uint8_t b) {
  for (const auto& i : kMsgTypes) {
    if (static_cast<std::uint8_t>(i.type) == b) return i.type;
  }
  return std::nullopt;
}

// Accepts "SYNDROME", "syndrome" or "hash-ec" style spellings.
inline std::optional<MsgType> msg_type_from_name(std::string_view name) {
  for (const auto& i : kMsgTypes) {
    const std::string_view ref = i.name;
    if (ref.size() != name.size()) continue;
    bool eq = true;
    for (std::size_t k = 0; k < ref.size() && eq; ++k) {
      char c = name[k];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c == '-') c = '_';
      eq = c == ref[k];
    }
    if (eq) return i.type;
  }
  return std::nullopt;
}

inline bool is_protocol_message(MsgType t) {
  const auto v = static_cast<std::uint8_t>(t);
  return v >= 0x01 && v <= 0x09;
}

// Messages sent after the measurement phase; these make up the leakage count.
inline bool is_post_measurement(MsgType t) {
  return is_protocol_message(t) && t != MsgType::kRoundT && t != MsgType::kBasesX;
}

struct MessageFrame {
  MsgType type = MsgType::kAbort;
  std::vector<std::uint8_t> payload;
  friend bool operator==(const MessageFrame&, const MessageFrame&) = default;
};

inline constexpr std::size_t kFrameHeaderBytes = 5;
inline constexpr std::uint32_t kMaxPayloadBytes = std::uint32_t{1} << 28;

// 4-byte big-endian payload length, 1-byte type, payload.
inline std::vector<std::uint8_t> encode_frame(const MessageFrame& f) {
  if (f.payload.size() > kMaxPayloadBytes) throw ChannelError("payload too large");
  const auto len = static_cast<std::uint32_t>(f.payload.size());
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + f.payload.size());
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(len >> s));
  out.push_back(static_cast<std::uint8_t>(f.type));
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

struct FrameHeader {
  std::uint32_t length;
  MsgType type;
};

inline FrameHeader decode_header(std::span<const std::uint8_t> h) {
  if (h.size() < kFrameHeaderBytes) throw ChannelError("truncated frame header");
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | h[i];
  if (len > kMaxPayloadBytes) throw ChannelError("frame length exceeds limit");
  const auto t = msg_type_from_byte(h[4]);
  if (!t) throw ChannelError("unknown frame type " + std::to_string(h[4]));
  return {len, *t};
}

inline MessageFrame decode_frame(std::span<const std::uint8_t> wire) {
  const auto h = decode_header(wire);
  if (wire.size() != kFrameHeaderBytes + h.length) throw ChannelError("frame length mismatch");
  MessageFrame f;
  f.type = h.type;
  f.payload.assign(wire.begin() + kFrameHeaderBytes, wire.end());
  return f;
}

}  // namespace diqkd

#endif  // DIQKD_PROTOCOL_FRAME_HPP_
