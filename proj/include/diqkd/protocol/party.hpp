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


#ifndef DIQKD_PROTOCOL_PARTY_HPP_
#define DIQKD_PROTOCOL_PARTY_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "diqkd/auth/shared_key.hpp"
#include "diqkd/bits.hpp"
#include "diqkd/ec/bp_decoder.hpp"
#include "diqkd/ec/sc_ldpc.hpp"
#include "diqkd/model.hpp"
#include "diqkd/protocol/device.hpp"
#include "diqkd/protocol/frame.hpp"
#include "diqkd/protocol/params.hpp"
#include "diqkd/protocol/transport.hpp"
#include "diqkd/rng.hpp"
#include "diqkd/trevisan/extractor.hpp"

namespace diqkd {

enum class AbortReason : std::uint8_t {
  kNone = 0,
  kEcHashMismatch = 1,
  kBellValidationFailed = 2,
  kAuthFailed = 3,
  kKeyActivationFailed = 4,
  kChannelError = 5,
};

inline const char* abort_reason_name(AbortReason r) {
  switch (r) {
    case AbortReason::kNone: return "None";
    case AbortReason::kEcHashMismatch: return "EcHashMismatch";
    case AbortReason::kBellValidationFailed: return "BellValidationFailed";
    case AbortReason::kAuthFailed: return "AuthFailed";
    case AbortReason::kKeyActivationFailed: return "KeyActivationFailed";
    case AbortReason::kChannelError: return "ChannelError";
  }
  return "?";
}

// Protocol step at which a reason is detected; channel errors rank last.
inline int abort_step(AbortReason r) {
  switch (r) {
    case AbortReason::kEcHashMismatch: return 7;
    case AbortReason::kBellValidationFailed: return 8;
    case AbortReason::kAuthFailed: return 10;
    case AbortReason::kKeyActivationFailed: return 11;
    case AbortReason::kChannelError: return 99;
    case AbortReason::kNone: break;
  }
  return 1000;
}

struct EventFlags {
  bool omega_pe = false;  // Bell validation passed
  bool omega_h = false;   // EC hashes matched
  bool omega_a = false;   // all tags verified, C = F = 1
};

enum class Direction : std::uint8_t { kSent, kReceived };

struct TranscriptEntry {
  Direction dir;
  MsgType type;
  std::uint32_t bytes;  // payload bytes
  std::uint64_t bits;   // information bits carried
};

struct Transcript {
  std::vector<TranscriptEntry> frames;

  std::uint64_t leakage_bits() const {
    std::uint64_t s = 0;
    for (const auto& f : frames) s += is_post_measurement(f.type) ? f.bits : 0;
    return s;
  }
};

struct BalanceSheet {
  std::uint64_t consumed = 0;
  std::uint64_t reusable = 0;
  std::uint64_t generated = 0;
  std::int64_t net = 0;
};

inline BalanceSheet balance_sheet(const std::array<bool, 4>& pads_spent,
                                  std::uint64_t reusable_bits, std::uint64_t generated) {
  BalanceSheet b;
  for (bool s : pads_spent) b.consumed += s ? kTagBits : 0;
  b.reusable = reusable_bits;
  b.generated = generated;
  b.net = static_cast<std::int64_t>(generated) - static_cast<std::int64_t>(b.consumed);
  return b;
}

// floor(n gamma (1 - omega_thresh)); gamma is exact so only omega rounds.
inline std::uint64_t bell_loss_bound(std::uint64_t n, const Rational& gamma,
                                     double omega_thresh) {
  const long double v = static_cast<long double>(n) * gamma.num() / gamma.den() *
                        (1.0L - static_cast<long double>(omega_thresh));
  return v <= 0 ? 0 : static_cast<std::uint64_t>(std::floor(v));
}

inline bool validate_bell(std::span<const Score> scores, std::uint64_t n, const Rational& gamma,
                          double omega_thresh) {
  if (scores.size() != n) throw DomainError("score count differs from n");
  std::uint64_t lost = 0;
  for (auto u : scores) lost += u == Score::kLost;
  return lost <= bell_loss_bound(n, gamma, omega_thresh);
}

struct PartyResult {
  bool success = false;
  AbortReason reason = AbortReason::kNone;
  bool detected_locally = false;
  std::string detail;
  BitVector raw;        // A for Alice, the corrected guess for Bob
  BitVector extracted;  // output of privacy amplification
  BitVector key;        // K0' followed by the extracted bits
  Transcript transcript;
  std::array<bool, 4> pads_spent{};
  bool auth_ok = false;
  // Bob only.
  bool hash_ok = false;
  bool bell_ok = false;
  std::uint64_t lost_rounds = 0;
  bool decode_success = false;
  int decode_iterations = 0;
};

namespace detail {

struct PeerAborted {
  AbortReason reason;
};

// Classical channel wrapper that enforces message order and logs frames.
class PartyChannel {
 public:
  PartyChannel(Transport& t, Transcript& log) : t_(t), log_(log) {}

  // Returns the canonical frame bytes, which are what tags cover.
  std::vector<std::uint8_t> send(MsgType type, std::vector<std::uint8_t> payload,
                                 std::uint64_t bits) {
    MessageFrame f{type, std::move(payload)};
    auto wire = encode_frame(f);
    t_.send(f);
    log_.frames.push_back({Direction::kSent, type,
                           static_cast<std::uint32_t>(f.payload.size()), bits});
    return wire;
  }

  MessageFrame expect(MsgType type, std::size_t payload_bytes, std::uint64_t bits) {
    auto f = t_.receive();
    if (f.type == MsgType::kAbort) {
      if (f.payload.size() != 1 || f.payload[0] == 0 || f.payload[0] > 5) {
        throw ChannelError("malformed ABORT frame");
      }
      throw PeerAborted{static_cast<AbortReason>(f.payload[0])};
    }
    if (f.type != type) {
      throw ChannelError(std::string("expected ") + msg_type_name(type) + ", got " +
                         msg_type_name(f.type));
    }
    if (f.payload.size() != payload_bytes) {
      throw ChannelError(std::string("bad payload size for ") + msg_type_name(type));
    }
    log_.frames.push_back({Direction::kReceived, type,
                           static_cast<std::uint32_t>(f.payload.size()), bits});
    return f;
  }

  void send_abort(AbortReason r) noexcept {
    try {
      t_.send({MsgType::kAbort, {static_cast<std::uint8_t>(r)}});
    } catch (...) {
    }
  }

 private:
  Transport& t_;
  Transcript& log_;
};

inline bool read_flag(const MessageFrame& f) {
  if (f.payload[0] > 1) throw ChannelError(std::string("non-binary ") + msg_type_name(f.type));
  return f.payload[0] == 1;
}

inline std::vector<std::uint8_t> tag_payload(Tag64 t) {
  std::vector<std::uint8_t> out;
  put_u64_le(out, t.value);
  return out;
}

inline Tag64 read_tag(const MessageFrame& f) { return Tag64{get_u64_le(f.payload)}; }

inline void append(std::vector<std::uint8_t>& dst, const std::vector<std::uint8_t>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

inline BitVector reusable_part(const SharedKeyK0& k0) {
  BitVector k = k0.trevisan_seed();
  k.append(k0.hash_seed().to_bits());
  return k;
}

inline void check_k0(const ProtocolParams& p, const SharedKeyK0& k0) {
  for (bool s : k0.spent()) {
    if (s) throw PadReuseError("K0 has spent pads");
  }
  if (k0.trevisan_seed().size() != p.seed_bits()) {
    throw DomainError("K0 extractor seed has " + std::to_string(k0.trevisan_seed().size()) +
                      " bits, params need " + std::to_string(p.seed_bits()));
  }
}

inline std::size_t packed_bytes(std::uint64_t bits) { return (bits + 7) / 8; }

}  // namespace detail

// Alice: steps 1-5 and 7 as sender, verifies Bob's tags in 10-11.
inline PartyResult run_alice(const ProtocolParams& p, SharedKeyK0 k0, Transport& channel,
                             AliceDevice& device, Rng rng) {
  p.validate();
  detail::check_k0(p, k0);
  PartyResult res;
  detail::PartyChannel ch(channel, res.transcript);
  res.transcript.frames.reserve(p.n + 16);
  try {
    BitVector x(p.n), a(p.n);
    std::vector<std::uint8_t> t_frames;
    t_frames.reserve(p.n * (kFrameHeaderBytes + 1));
    for (std::uint64_t i = 0; i < p.n; ++i) {
      int xi = InputPolicy::sample_alice(rng);
      const auto f = ch.expect(MsgType::kRoundT, 1, 1);
      detail::append(t_frames, encode_frame(f));
      if (!detail::read_flag(f)) xi = 0;
      x.set(i, xi);
      a.set(i, device.measure(xi));
    }

    const auto x_wire = ch.send(MsgType::kBasesX, x.bytes(), p.n);
    const auto syn = encode(*p.code, a);
    const auto m_wire = ch.send(MsgType::kSyndrome, syn.bytes(), p.m);
    const Tag64 g_ec = wc_tag(k0, PadSlot::kErrorCorrection, serialize_bits(a));
    const auto g_wire = ch.send(MsgType::kHashEc, detail::tag_payload(g_ec), kTagBits);

    if (p.ell > 0) res.extracted = extract(a, k0.trevisan_seed(), *p.extractor, p.extract_workers);

    const auto gb = ch.expect(MsgType::kTagB, 8, kTagBits);
    const bool b_ok = verify_tag(k0, PadSlot::kBob, t_frames, detail::read_tag(gb));
    const auto c_wire = ch.send(MsgType::kConfirmC, {static_cast<std::uint8_t>(b_ok)}, 1);
    std::vector<std::uint8_t> auth_a;
    for (const auto* w : {&x_wire, &m_wire, &g_wire, &c_wire}) detail::append(auth_a, *w);
    const Tag64 g_a = wc_tag(k0, PadSlot::kAlice, auth_a);
    ch.send(MsgType::kTagA, detail::tag_payload(g_a), kTagBits);

    const auto ff = ch.expect(MsgType::kFlagF, 1, 1);
    const bool flag = detail::read_flag(ff);
    const auto gf = ch.expect(MsgType::kTagF, 8, kTagBits);
    const bool f_ok = verify_tag(k0, PadSlot::kFlag, encode_frame(ff), detail::read_tag(gf));

    res.raw = std::move(a);
    res.pads_spent = k0.spent();
    if (!b_ok) {
      res.reason = AbortReason::kAuthFailed;
      res.detected_locally = true;
      res.detail = "TAG_B did not verify";
    } else if (!f_ok || !flag) {
      res.reason = AbortReason::kKeyActivationFailed;
      res.detected_locally = true;
      res.detail = !f_ok ? "TAG_F did not verify" : "Bob sent F = 0";
    } else {
      res.auth_ok = true;
      res.success = true;
      res.key = detail::reusable_part(k0);
      res.key.append(res.extracted);
    }
  } catch (const detail::PeerAborted& e) {
    res.reason = e.reason;
    res.detail = "peer aborted";
  } catch (const ChannelError& e) {
    ch.send_abort(AbortReason::kChannelError);
    res.reason = AbortReason::kChannelError;
    res.detected_locally = true;
    res.detail = e.what();
  }
  res.pads_spent = k0.spent();
  if (!res.success) {
    res.extracted = BitVector();
    res.key = BitVector();
  }
  return res;
}

// Bob: chooses T_i, decodes, validates, and activates the key.
inline PartyResult run_bob(const ProtocolParams& p, SharedKeyK0 k0, Transport& channel,
                           BobDevice& device, Rng rng) {
  p.validate();
  detail::check_k0(p, k0);
  PartyResult res;
  detail::PartyChannel ch(channel, res.transcript);
  res.transcript.frames.reserve(p.n + 16);
  const InputPolicy policy(p.gamma);
  try {
    std::vector<std::uint8_t> y(p.n);
    BitVector b(p.n);
    std::vector<std::uint8_t> t_frames;
    t_frames.reserve(p.n * (kFrameHeaderBytes + 1));
    for (std::uint64_t i = 0; i < p.n; ++i) {
      y[i] = static_cast<std::uint8_t>(policy.sample_bob(rng));
      detail::append(t_frames, ch.send(MsgType::kRoundT, {y[i] != 2}, 1));
      b.set(i, device.measure(y[i]));
    }

    const auto fx = ch.expect(MsgType::kBasesX, detail::packed_bytes(p.n), p.n);
    const auto x = BitVector::from_bytes(fx.payload, p.n);
    const auto fm = ch.expect(MsgType::kSyndrome, detail::packed_bytes(p.m), p.m);
    const auto syn = BitVector::from_bytes(fm.payload, p.m);

    std::vector<SettingPair> settings(p.n);
    for (std::uint64_t i = 0; i < p.n; ++i) {
      settings[i] = {static_cast<std::uint8_t>(x.get(i)), y[i]};
    }
    const auto dec = decode(*p.code, b, settings, p.priors, syn, p.bp);
    res.decode_success = dec.success;
    res.decode_iterations = dec.iterations;
    const BitVector& a_hat = dec.a_hat;

    std::vector<Score> u(p.n);
    for (std::uint64_t i = 0; i < p.n; ++i) {
      u[i] = score_round(settings[i].x, settings[i].y, a_hat.get(i), b.get(i));
      res.lost_rounds += u[i] == Score::kLost;
    }

    const auto fg = ch.expect(MsgType::kHashEc, 8, kTagBits);
    // A guess that does not reproduce M cannot be A; that fails validation too.
    const bool tag_ok =
        verify_tag(k0, PadSlot::kErrorCorrection, serialize_bits(a_hat), detail::read_tag(fg));
    res.hash_ok = tag_ok && dec.success;
    if (!res.hash_ok) {
      ch.send_abort(AbortReason::kEcHashMismatch);
      res.reason = AbortReason::kEcHashMismatch;
      res.detected_locally = true;
      res.detail = dec.success ? "hash mismatch" : "decoder did not converge";
      res.pads_spent = k0.spent();
      return res;
    }
    res.bell_ok = validate_bell(u, p.n, p.gamma, p.omega_thresh);
    if (!res.bell_ok) {
      ch.send_abort(AbortReason::kBellValidationFailed);
      res.reason = AbortReason::kBellValidationFailed;
      res.detected_locally = true;
      res.detail = std::to_string(res.lost_rounds) + " lost test rounds, bound " +
                   std::to_string(bell_loss_bound(p.n, p.gamma, p.omega_thresh));
      res.pads_spent = k0.spent();
      return res;
    }

    if (p.ell > 0) {
      res.extracted = extract(a_hat, k0.trevisan_seed(), *p.extractor, p.extract_workers);
    }

    const Tag64 g_b = wc_tag(k0, PadSlot::kBob, t_frames);
    const auto g_wire = encode_frame({MsgType::kHashEc, fg.payload});
    ch.send(MsgType::kTagB, detail::tag_payload(g_b), kTagBits);
    const auto fc = ch.expect(MsgType::kConfirmC, 1, 1);
    const bool confirm = detail::read_flag(fc);
    const auto fa = ch.expect(MsgType::kTagA, 8, kTagBits);
    std::vector<std::uint8_t> auth_a;
    for (const auto& w : {encode_frame(fx), encode_frame(fm), g_wire, encode_frame(fc)}) {
      detail::append(auth_a, w);
    }
    const bool a_ok = verify_tag(k0, PadSlot::kAlice, auth_a, detail::read_tag(fa));
    const bool flag = a_ok && confirm;

    const auto f_wire = ch.send(MsgType::kFlagF, {static_cast<std::uint8_t>(flag)}, 1);
    const Tag64 g_f = wc_tag(k0, PadSlot::kFlag, f_wire);
    ch.send(MsgType::kTagF, detail::tag_payload(g_f), kTagBits);

    res.raw = a_hat;
    if (!flag) {
      res.reason = AbortReason::kAuthFailed;
      res.detected_locally = true;
      res.detail = !a_ok ? "TAG_A did not verify" : "Alice sent C = 0";
    } else {
      res.auth_ok = true;
      res.success = true;
      res.key = detail::reusable_part(k0);
      res.key.append(res.extracted);
    }
  } catch (const detail::PeerAborted& e) {
    res.reason = e.reason;
    res.detail = "peer aborted";
  } catch (const ChannelError& e) {
    ch.send_abort(AbortReason::kChannelError);
    res.reason = AbortReason::kChannelError;
    res.detected_locally = true;
    res.detail = e.what();
  }
  res.pads_spent = k0.spent();
  if (!res.success) {
    res.extracted = BitVector();
    res.key = BitVector();
  }
  return res;
}

// One line per frame, then the ledger block.
inline void write_transcript(std::ostream& os, const Transcript& t, const BalanceSheet& b,
                             bool success, AbortReason reason) {
  for (const auto& f : t.frames) {
    os << (f.dir == Direction::kSent ? "sent" : "recv") << ' ' << msg_type_name(f.type) << ' '
       << f.bytes << '\n';
  }
  os << "# ledger\n"
     << "status=" << (success ? "success" : "abort") << '\n'
     << "reason=" << abort_reason_name(reason) << '\n'
     << "leakage_bits=" << t.leakage_bits() << '\n'
     << "consumed=" << b.consumed << '\n'
     << "reusable=" << b.reusable << '\n'
     << "generated=" << b.generated << '\n'
     << "net=" << b.net << '\n';
}

}  // namespace diqkd

#endif  // DIQKD_PROTOCOL_PARTY_HPP_
