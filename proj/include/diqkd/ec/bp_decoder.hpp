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

#ifndef DIQKD_EC_BP_DECODER_HPP_
#define DIQKD_EC_BP_DECODER_HPP_

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "diqkd/bits.hpp"
#include "diqkd/ec/sc_ldpc.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/model.hpp"

namespace diqkd {

struct DecoderPriors {
  JointTable test_joint;  // P(A', B') with Bob's bit flipped when x = y = 1
  JointTable key_joint;   // P(A'', B'')

  void validate() const {
    for (const auto* t : {&test_joint, &key_joint}) {
      double s = 0;
      for (auto& row : *t) {
        for (double p : row) {
          if (!(p >= 0.0)) throw DomainError("negative prior");
          s += p;
        }
      }
      if (std::abs(s - 1.0) > 1e-9) throw DomainError("prior does not sum to 1");
    }
  }

  // S = 4 and Q = 0 are allowed; zero entries get clipped when forming LLRs.
  static DecoderPriors from_parametric(double S, double Q) {
    if (!(S >= 0.0 && S <= 4.0)) throw DomainError("CHSH score outside [0, 4]");
    if (!(Q >= 0.0 && Q <= 0.5)) throw DomainError("QBER outside [0, 1/2]");
    DecoderPriors p;
    const double same = (1.0 + S / 4.0) / 4.0, diff = (1.0 - S / 4.0) / 4.0;
    p.test_joint = {{{same, diff}, {diff, same}}};
    p.key_joint = {{{(1.0 - Q) / 2.0, Q / 2.0}, {Q / 2.0, (1.0 - Q) / 2.0}}};
    return p;
  }

  // Test joint averaged over the four uniformly chosen test settings.
  static DecoderPriors from_model(const DeviceModel& model) {
    DecoderPriors p{};
    for (int k = 0; k < 4; ++k) {
      const auto [x, y] = kSettingPairs[k];
      const auto& t = model.table(x, y);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) p.test_joint[a][b ^ (x & y)] += t[a][b] / 4.0;
      }
    }
    p.key_joint = model.table(0, 2);
    return p;
  }

  // Measured priors of the reference experiment.
  static DecoderPriors reference_table() {
    return {{{{0.4210, 0.0807}, {0.0847, 0.4136}}},
            {{{0.5017, 0.0034}, {0.0110, 0.4839}}}};
  }
};

inline constexpr double kLlrClip = 30.0;

inline std::vector<double> channel_llrs(const BitVector& b,
                                        std::span<const SettingPair> settings,
                                        const DecoderPriors& priors) {
  if (settings.size() != b.size()) throw DomainError("settings length mismatch");
  priors.validate();
  static constexpr double kFloor = 1e-15;
  auto llr = [](double p0, double p1) {
    const double v = std::log(std::max(p0, kFloor) / std::max(p1, kFloor));
    return std::clamp(v, -kLlrClip, kLlrClip);
  };
  double table[2][2];  // [key round][Bob's bit]
  for (int bb = 0; bb < 2; ++bb) {
    table[0][bb] = llr(priors.test_joint[0][bb], priors.test_joint[1][bb]);
    table[1][bb] = llr(priors.key_joint[0][bb], priors.key_joint[1][bb]);
  }
  std::vector<double> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto [x, y] = settings[i];
    if (y == 2) {
      out[i] = table[1][b.get(i)];
    } else {
      out[i] = table[0][b.get(i) ^ (x & y & 1)];
    }
  }
  return out;
}

// phi(x) = -ln tanh(x / 2), an involution on (0, inf).
inline double bp_phi(double x) {
  if (x <= 0.0) return kLlrClip * 2.0;
  return std::log1p(2.0 / std::expm1(x));
}

// Check-to-variable messages for one check with syndrome bit `s`.
// Exact zeros are handled separately: a zero input forces every other output
// to zero.
inline void check_node_update(std::span<const double> in, bool s,
                              std::span<double> out, std::span<double> scratch) {
  std::size_t zeros = 0;
  bool negative = s;
  double sum = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double v = in[i];
    if (v == 0.0) {
      ++zeros;
      scratch[i] = 0.0;
      continue;
    }
    negative ^= v < 0.0;
    scratch[i] = bp_phi(std::abs(v));
    sum += scratch[i];
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    double mag;
    bool neg = negative;
    if (in[i] == 0.0) {
      mag = zeros == 1 ? bp_phi(sum) : 0.0;
    } else {
      neg ^= in[i] < 0.0;
      mag = zeros > 0 ? 0.0 : bp_phi(std::max(sum - scratch[i], 0.0));
    }
    mag = std::min(mag, kLlrClip);
    out[i] = neg ? -mag : mag;
  }
}

inline void check_node_update(std::span<const double> in, bool s, std::span<double> out) {
  std::vector<double> scratch(in.size());
  check_node_update(in, s, out, scratch);
}

struct BpOptions {
  int max_iters = 200;
  unsigned workers = 1;
};

struct DecodeResult {
  bool success = false;
  int iterations = 0;
  BitVector a_hat;  // last hard decision, in unshuffled order
};

// Flooding-schedule belief propagation. Results do not depend on workers.
class BpDecoder {
 public:
  explicit BpDecoder(const ScLdpcCode& code) : code_(code) {}

  DecodeResult decode(std::span<const double> llrs, const BitVector& syndrome,
                      const BpOptions& opt = {}) const {
    const std::uint32_t n = code_.n(), m = code_.m();
    if (llrs.size() != n) throw DomainError("LLR length does not match code");
    if (syndrome.size() != m) throw DomainError("syndrome length does not match code");
    if (opt.max_iters < 0) throw DomainError("max_iters must be non-negative");
    const auto& sh = code_.shuffle();
    const auto& row_ptr = code_.row_ptr();
    const std::size_t E = code_.edges();

    std::vector<double> prior(n);
    for (std::uint32_t v = 0; v < n; ++v) {
      prior[v] = std::clamp(llrs[sh[v]], -kLlrClip, kLlrClip);
    }
    std::vector<double> vc(E), cv(E, 0.0);
    std::vector<std::uint8_t> hard(n);
    for (std::uint32_t c = 0; c < m; ++c) {
      auto r = code_.row(c);
      for (std::size_t k = 0; k < r.size(); ++k) vc[row_ptr[c] + k] = prior[r[k]];
    }
    for (std::uint32_t v = 0; v < n; ++v) hard[v] = prior[v] < 0.0;

    std::size_t max_deg = 0;
    for (std::uint32_t c = 0; c < m; ++c) max_deg = std::max<std::size_t>(max_deg, code_.row(c).size());

    auto check_range = [&](std::uint32_t lo, std::uint32_t hi) {
      std::vector<double> scratch(max_deg);
      for (std::uint32_t c = lo; c < hi; ++c) {
        const auto b = row_ptr[c], e = row_ptr[c + 1];
        check_node_update(std::span<const double>(vc.data() + b, e - b), syndrome.get(c),
                          std::span<double>(cv.data() + b, e - b), scratch);
      }
    };
    auto var_range = [&](std::uint32_t lo, std::uint32_t hi) {
      for (std::uint32_t v = lo; v < hi; ++v) {
        double total = prior[v];
        for (auto e : code_.col_edges(v)) total += cv[e];
        hard[v] = total < 0.0;
        for (auto e : code_.col_edges(v)) {
          vc[e] = std::clamp(total - cv[e], -kLlrClip, kLlrClip);
        }
      }
    };
    auto satisfied = [&] {
      for (std::uint32_t c = 0; c < m; ++c) {
        bool p = syndrome.get(c);
        for (auto v : code_.row(c)) p ^= hard[v];
        if (p) return false;
      }
      return true;
    };

    int it = 0;
    bool ok = satisfied();
    const unsigned workers = std::max(1u, std::min(opt.workers, 64u));
    if (workers == 1) {
      while (!ok && it < opt.max_iters) {
        check_range(0, m);
        var_range(0, n);
        ++it;
        ok = satisfied();
      }
    } else {
      // Workers own disjoint node ranges; barriers separate the phases.
      bool stop = ok || opt.max_iters == 0;
      std::barrier sync(static_cast<std::ptrdiff_t>(workers), [&]() noexcept {});
      std::barrier done(static_cast<std::ptrdiff_t>(workers), [&]() noexcept {
        ++it;
        ok = satisfied();
        stop = ok || it >= opt.max_iters;
      });
      auto worker = [&](unsigned id) {
        const auto clo = static_cast<std::uint32_t>(std::uint64_t{m} * id / workers);
        const auto chi = static_cast<std::uint32_t>(std::uint64_t{m} * (id + 1) / workers);
        const auto vlo = static_cast<std::uint32_t>(std::uint64_t{n} * id / workers);
        const auto vhi = static_cast<std::uint32_t>(std::uint64_t{n} * (id + 1) / workers);
        while (!stop) {
          check_range(clo, chi);
          sync.arrive_and_wait();
          var_range(vlo, vhi);
          done.arrive_and_wait();
        }
      };
      std::vector<std::jthread> pool;
      for (unsigned id = 1; id < workers; ++id) pool.emplace_back(worker, id);
      worker(0);
    }

    DecodeResult res;
    res.iterations = it;
    res.a_hat = BitVector(n);
    for (std::uint32_t v = 0; v < n; ++v) res.a_hat.set(sh[v], hard[v]);
    res.success = ok && encode(code_, res.a_hat) == syndrome;
    return res;
  }

 private:
  const ScLdpcCode& code_;
};

inline DecodeResult decode(const ScLdpcCode& code, const BitVector& b,
                           std::span<const SettingPair> settings,
                           const DecoderPriors& priors, const BitVector& syndrome,
                           const BpOptions& opt = {}) {
  const auto llrs = channel_llrs(b, settings, priors);
  return BpDecoder(code).decode(llrs, syndrome, opt);
}

}  // namespace diqkd

#endif  // DIQKD_EC_BP_DECODER_HPP_
