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


#ifndef DIQKD_PROTOCOL_DEVICE_HPP_
#define DIQKD_PROTOCOL_DEVICE_HPP_

#include <cstdint>
#include <utility>

#include "diqkd/model.hpp"
#include "diqkd/protocol/frame.hpp"
#include "diqkd/protocol/transport.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

// Simulated devices. The joint source lives with Bob's device; Alice's device
// forwards its setting over a dedicated link and gets its outcome back. The
// link is separate from the classical channel and never enters the transcript.
class BobDevice {
 public:
  BobDevice(const DeviceModel& model, Transport& link, Rng rng)
      : model_(model), link_(link), rng_(std::move(rng)) {}

  int measure(int y) {
    const auto in = link_.receive();
    if (in.type != MsgType::kDeviceInput || in.payload.size() != 1 || in.payload[0] > 1) {
      throw ChannelError("device link: bad input frame");
    }
    const int x = in.payload[0];
    // (1, 2) only arises when T_i was corrupted in transit; the model has no
    // table for it, so the outcomes are independent fair bits.
    const auto [a, b] = (x == 1 && y == 2)
                            ? std::pair<int, int>{rng_.bit(), rng_.bit()}
                            : sample_outcomes(model_.table(x, y), rng_);
    link_.send({MsgType::kDeviceOutput, {static_cast<std::uint8_t>(a)}});
    return b;
  }

 private:
  const DeviceModel& model_;
  Transport& link_;
  Rng rng_;
};

class AliceDevice {
 public:
  explicit AliceDevice(Transport& link) : link_(link) {}

  int measure(int x) {
    link_.send({MsgType::kDeviceInput, {static_cast<std::uint8_t>(x)}});
    const auto out = link_.receive();
    if (out.type != MsgType::kDeviceOutput || out.payload.size() != 1 || out.payload[0] > 1) {
      throw ChannelError("device link: bad output frame");
    }
    return out.payload[0];
  }

 private:
  Transport& link_;
};

}  // namespace diqkd

#endif  // DIQKD_PROTOCOL_DEVICE_HPP_
