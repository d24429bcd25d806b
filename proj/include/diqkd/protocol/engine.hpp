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


#ifndef DIQKD_PROTOCOL_ENGINE_HPP_
#define DIQKD_PROTOCOL_ENGINE_HPP_

#include <exception>
#include <optional>
#include <thread>

#include "diqkd/protocol/party.hpp"

namespace diqkd {

enum class Role : std::uint8_t { kAlice, kBob };

// Per-party generator streams derived from one run seed.
inline Rng party_rng(std::uint64_t seed, Role r) {
  return Rng(splitmix64(seed ^ (r == Role::kAlice ? 0xa11ceULL : 0xb0bULL)));
}
inline Rng device_rng(std::uint64_t seed) { return Rng(splitmix64(seed ^ 0xde71ce5ULL)); }

struct RunOutcome {
  bool success = false;
  AbortReason reason = AbortReason::kNone;
  EventFlags events;
  BitVector k_a, k_b;  // empty unless success
  BalanceSheet balance;
  PartyResult alice, bob;

  std::uint64_t leakage_bits() const { return alice.transcript.leakage_bits(); }
};

struct RunOptions {
  std::optional<FaultSpec> fault;
};

// Combines the two local views into one outcome.
inline RunOutcome combine_outcome(PartyResult alice, PartyResult bob, std::uint64_t reusable,
                                  std::uint64_t ell) {
  RunOutcome out;
  out.events.omega_h = bob.hash_ok;
  out.events.omega_pe = bob.bell_ok;
  out.events.omega_a = alice.auth_ok && bob.auth_ok;
  out.success = alice.success && bob.success;
  if (!out.success) {
    AbortReason best = AbortReason::kChannelError;
    for (const auto* r : {&bob, &alice}) {
      if (r->reason != AbortReason::kNone && r->detected_locally &&
          abort_step(r->reason) < abort_step(best)) {
        best = r->reason;
      }
    }
    out.reason = best;
  } else {
    out.k_a = alice.key;
    out.k_b = bob.key;
  }
  std::array<bool, 4> spent{};
  for (std::size_t i = 0; i < 4; ++i) spent[i] = alice.pads_spent[i] || bob.pads_spent[i];
  out.balance = balance_sheet(spent, reusable, out.success ? ell : 0);
  out.alice = std::move(alice);
  out.bob = std::move(bob);
  return out;
}

// Both parties in-process on separate threads, talking over duplex queues.
inline RunOutcome run_protocol(const ProtocolParams& params, const DeviceModel& model,
                               const SharedKeyK0& k0, std::uint64_t seed,
                               const RunOptions& opt = {}) {
  params.validate();
  detail::check_k0(params, k0);
  auto [ch_a, ch_b] = make_inproc_pair(params.timeout);
  auto [link_a, link_b] = make_inproc_pair(params.timeout);
  if (opt.fault) {
    ch_a = std::make_unique<FaultyTransport>(std::move(ch_a), *opt.fault);
    ch_b = std::make_unique<FaultyTransport>(std::move(ch_b), *opt.fault);
  }

  PartyResult alice;
  std::exception_ptr alice_error;
  {
    std::jthread ta([&] {
      try {
        AliceDevice dev(*link_a);
        alice = run_alice(params, k0, *ch_a, dev, party_rng(seed, Role::kAlice));
      } catch (...) {
        alice_error = std::current_exception();
      }
      ch_a->close();
      link_a->close();
    });
    PartyResult bob;
    std::exception_ptr bob_error;
    try {
      BobDevice dev(model, *link_b, device_rng(seed));
      bob = run_bob(params, k0, *ch_b, dev, party_rng(seed, Role::kBob));
    } catch (...) {
      bob_error = std::current_exception();
    }
    ch_b->close();
    link_b->close();
    ta.join();
    if (bob_error) std::rethrow_exception(bob_error);
    if (alice_error) std::rethrow_exception(alice_error);
    return combine_outcome(std::move(alice), std::move(bob), k0.reusable_bits(), params.ell);
  }
}

}  // namespace diqkd

#endif  // DIQKD_PROTOCOL_ENGINE_HPP_
