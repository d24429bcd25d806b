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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "diqkd/ec/bounds.hpp"
#include "diqkd/ec/bp_decoder.hpp"
#include "diqkd/ec/sc_ldpc.hpp"

namespace diqkd {
namespace {

constexpr double kGamma = 13.0 / 256.0;
constexpr double kS = 2.6507, kQ = 0.0239;

struct Sample {
  BitVector a, b;
  std::vector<SettingPair> settings;
};

Sample sample_rounds(std::uint32_t n, double S, double Q, std::uint64_t seed) {
  const auto model = DeviceModel::parametric(S, Q);
  const InputPolicy pol(Rational(13, 256));
  Rng rng(seed);
  Sample s{BitVector(n), BitVector(n), std::vector<SettingPair>(n)};
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto r = sample_round(model, pol, rng, i);
    s.a.set(i, r.a);
    s.b.set(i, r.b);
    s.settings[i] = {r.x, r.y};
  }
  return s;
}

ScLdpcCode small_code(std::uint32_t n, double eta, std::uint32_t L = 10,
                      std::uint64_t seed = 7) {
  CodeConfig cfg;
  cfg.coupling_length = L;
  Rng rng(seed);
  return build_code(n, static_cast<std::uint32_t>(std::ceil(eta * n)), cfg, rng, seed + 2);
}

BitVector random_bits(std::size_t n, Rng& rng) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng.bit());
  return v;
}

TEST(SyndromeLength, FrozenValues) {
  EXPECT_EQ(syndrome_length(1.5e6, kGamma, 2.64, 0.018), 296518u);
  EXPECT_EQ(syndrome_length(1e4, kGamma, 4.0, 0.0), 5000u);
  EXPECT_EQ(syndrome_length(1e5, kGamma, 4.0, 0.0),
            static_cast<std::uint64_t>(std::ceil(50 * std::sqrt(1e5))));
  EXPECT_GT(static_cast<double>(syndrome_length(5e6, kGamma, kS, kQ)) / 5e6, 0.1847);
}

TEST(Bounds, FrozenOverheads) {
  const auto b = overhead_bounds(5e6, kGamma, kS, kQ, 1e-3);
  EXPECT_NEAR(b.eta_inf, 0.18778616201920487, 1e-12);
  EXPECT_NEAR(b.eta_est, 0.18915115985072026, 1e-9);
  EXPECT_NEAR(global_bsc_overhead(kGamma, kS, kQ), 0.20062837188012697, 1e-12);
  EXPECT_LT(b.eta_inf, b.eta_est);
}

TEST(Bounds, InverseTailAndBscLimits) {
  EXPECT_NEAR(inverse_gaussian_tail(1e-3), 3.0902, 1e-3);
  EXPECT_NEAR(gaussian_tail(inverse_gaussian_tail(1e-10)), 1e-10, 1e-20);
  const auto big = finite_bsc_bounds(1e9, 0.11, 1e-3);
  EXPECT_NEAR(big.m_bsc / 1e9, binary_entropy(0.11), 1e-3);
  const double n = 1e4;
  const auto tiny = finite_bsc_bounds(n, 1e-15, 1e-3);
  EXPECT_NEAR(tiny.capacity, 1 + std::log2(n) / (2 * n), 1e-6);
}

TEST(Protograph, CoupledRate) {
  EXPECT_DOUBLE_EQ(coupled_design_rate(Protograph::regular(3, 6), 80, 2), 0.4875);
  const auto p = Protograph::regular(4, 6);
  EXPECT_EQ(p.rows(), 2u);
  EXPECT_EQ(p.cols(), 3u);
  EXPECT_EQ(p.col_degree(0), 4u);
  EXPECT_EQ(p.row_degree(0), 6u);
  EXPECT_THROW(Protograph::regular(4, 4), DomainError);
}

TEST(Protograph, FamilyClosestBelowTarget) {
  const auto fam = choose_regular_family(1e5, 34591);
  const double target = 1 - 34591 / 1e5;
  EXPECT_LE(fam.coupled_rate, target);
  EXPECT_GE(fam.dv, 3u);
  EXPECT_LE(fam.dv, 5u);
  for (std::uint32_t dv = 3; dv <= 5; ++dv) {
    for (std::uint32_t dc = dv + 1; dc <= 100; ++dc) {
      const double r = coupled_design_rate(Protograph::regular(dv, dc), 80, dv - 1);
      if (r <= target) {
        EXPECT_LE(r, fam.coupled_rate);
      }
    }
  }
}

TEST(ScLdpc, IdentityLiftingIsCoupledProtograph) {
  CodeConfig cfg;
  cfg.coupling_length = 4;
  cfg.lifting = 1;
  Rng rng(1);
  // (3,6) base: one check row, two variable columns, entries 3. With w = 2
  // every variable block tau reaches checks tau, tau + 1, tau + 2.
  const auto code = build_code(8, 6, Protograph::regular(3, 6), cfg, rng, 0);
  ASSERT_EQ(code.m(), 6u);
  ASSERT_EQ(code.lineage().merged_checks, 0u);
  for (std::uint32_t c = 0; c < 6; ++c) {
    std::set<std::uint32_t> want;
    for (std::uint32_t tau = 0; tau < 4; ++tau) {
      if (c >= tau && c <= tau + 2) {
        want.insert(2 * tau);
        want.insert(2 * tau + 1);
      }
    }
    const auto r = code.row(c);
    EXPECT_EQ(std::set<std::uint32_t>(r.begin(), r.end()), want) << "check " << c;
  }
}

TEST(ScLdpc, ShapeAndAdaptation) {
  const std::uint32_t n = 100000, m = 34591;
  Rng rng(11);
  const auto code = build_code(n, m, CodeConfig{}, rng, 5);
  EXPECT_EQ(code.n(), n);
  EXPECT_EQ(code.m(), m);
  const auto& l = code.lineage();
  EXPECT_EQ(l.coupling_length, 80u);
  EXPECT_EQ(l.coupling_width, l.dv - 1);
  const auto nv = Protograph::regular(l.dv, l.dc).cols();
  EXPECT_EQ(l.lifting, (n + 80 * nv - 1) / (80 * nv));
  for (std::uint32_t v = 0; v < n; ++v) ASSERT_GE(code.col(v).size(), 2u);
  std::vector<bool> seen(n, false);
  for (auto s : code.shuffle()) {
    ASSERT_FALSE(seen[s]);
    seen[s] = true;
  }
}

TEST(ScLdpc, MergeIsUnionOfAdjacencies) {
  // Same build twice with and without merges: each merged row must be the
  // union of two unmerged rows.
  CodeConfig cfg;
  cfg.coupling_length = 6;
  Rng r1(3), r2(3);
  const auto full = build_code(600, 400, Protograph::regular(3, 6), cfg, r1, 0);
  ASSERT_EQ(full.lineage().merged_checks, 0u);
  const auto merged = build_code(600, 380, Protograph::regular(3, 6), cfg, r2, 0);
  ASSERT_EQ(merged.lineage().merged_checks, 20u);
  std::set<std::vector<std::uint32_t>> base_rows;
  for (const auto& r : full.rows()) base_rows.insert(r);
  std::size_t unions = 0;
  for (const auto& r : merged.rows()) {
    if (base_rows.count(r)) continue;
    ++unions;
    bool found = false;
    for (const auto& x : full.rows()) {
      if (!std::includes(r.begin(), r.end(), x.begin(), x.end())) continue;
      for (const auto& y : full.rows()) {
        if (&x == &y || !std::includes(r.begin(), r.end(), y.begin(), y.end())) continue;
        std::vector<std::uint32_t> u;
        std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(u));
        found |= u == r;
      }
    }
    EXPECT_TRUE(found);
  }
  EXPECT_EQ(unions, 20u);
}

TEST(ScLdpc, DeterministicBuildAndSerialization) {
  const auto a = small_code(5000, 0.35);
  const auto b = small_code(5000, 0.35);
  EXPECT_TRUE(a == b);
  const auto img = serialize_code(a);
  const auto back = deserialize_code(img);
  EXPECT_TRUE(back == a);
  EXPECT_EQ(back.lineage(), a.lineage());
  auto bad = img;
  bad[0] = 'X';
  EXPECT_THROW(deserialize_code(bad), FormatError);
}

TEST(Encode, ZeroAndSingleFlip) {
  const auto code = small_code(4000, 0.3);
  BitVector zero(code.n());
  EXPECT_EQ(encode(code, zero).popcount(), 0u);
  // Column k of H reads a[shuffle[k]]; flipping that bit toggles exactly col(k).
  const std::uint32_t k = 123;
  BitVector a(code.n());
  a.set(code.shuffle()[k], true);
  const auto s = encode(code, a);
  const auto rows = code.col(k);
  EXPECT_EQ(s.popcount(), rows.size());
  for (auto c : rows) EXPECT_TRUE(s.get(c));
}

TEST(Encode, Linearity) {
  const auto code = small_code(2000, 0.4);
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_bits(code.n(), rng), b = random_bits(code.n(), rng);
    auto ab = a;
    ab ^= b;
    auto lhs = encode(code, a);
    lhs ^= encode(code, b);
    ASSERT_EQ(lhs, encode(code, ab));
  }
}

TEST(CheckNode, ZeroInputAnnihilatesOthers) {
  const std::vector<double> in = {1.5, 0.0, -2.0, 3.0};
  std::vector<double> out(4);
  check_node_update(in, false, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[2], 0.0);
  EXPECT_EQ(out[3], 0.0);
  EXPECT_NE(out[1], 0.0);
}

TEST(CheckNode, MatchesTanhRule) {
  const std::vector<double> in = {1.5, -0.7, 2.2, 4.0};
  std::vector<double> out(4);
  check_node_update(in, true, out);
  for (std::size_t i = 0; i < in.size(); ++i) {
    double p = -1.0;  // syndrome bit 1 flips the sign
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (j != i) p *= std::tanh(in[j] / 2);
    }
    EXPECT_NEAR(out[i], 2 * std::atanh(p), 1e-9);
  }
}

TEST(Decode, PerfectSideInformationNeedsNoIterations) {
  const auto code = small_code(3000, 0.3);
  Rng rng(8);
  const auto a = random_bits(code.n(), rng);
  const std::vector<SettingPair> st(code.n(), SettingPair{0, 2});
  const auto r = decode(code, a, st, DecoderPriors::from_parametric(4.0, 0.0), encode(code, a));
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.a_hat, a);
}

TEST(Decode, SmallHonestInstance) {
  const auto code = small_code(10000, 0.40);
  const auto s = sample_rounds(10000, kS, kQ, 101);
  const auto r = decode(code, s.b, s.settings, DecoderPriors::from_parametric(kS, kQ),
                        encode(code, s.a));
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.a_hat, s.a);
  EXPECT_EQ(encode(code, r.a_hat), encode(code, s.a));
}

TEST(Decode, DeterministicAcrossWorkerCounts) {
  const auto pri = DecoderPriors::from_parametric(kS, kQ);
  // One converging and one failing instance: the failing one runs all
  // iterations, which is where scheduling could leak into the result.
  for (double eta : {0.40, 0.24}) {
    const auto code = small_code(10000, eta);
    const auto s = sample_rounds(10000, kS, kQ, 55);
    const auto syn = encode(code, s.a);
    BpOptions opt;
    opt.max_iters = 60;
    const auto ref = decode(code, s.b, s.settings, pri, syn, opt);
    for (unsigned w : {2u, 3u, 8u}) {
      opt.workers = w;
      const auto r = decode(code, s.b, s.settings, pri, syn, opt);
      EXPECT_EQ(r.success, ref.success) << "workers " << w;
      EXPECT_EQ(r.iterations, ref.iterations) << "workers " << w;
      EXPECT_EQ(r.a_hat, ref.a_hat) << "workers " << w;
    }
  }
}

TEST(Decode, ShuffleNeutrality) {
  const auto code = small_code(8000, 0.32);
  const auto s = sample_rounds(8000, kS, kQ, 9);
  const auto pri = DecoderPriors::from_parametric(kS, kQ);
  const auto ref = decode(code, s.b, s.settings, pri, encode(code, s.a));

  Rng rng(1234);
  const auto pi = random_permutation(code.n(), rng);
  BitVector a2(code.n()), b2(code.n());
  std::vector<SettingPair> st2(code.n());
  for (std::uint32_t i = 0; i < code.n(); ++i) {
    a2.set(pi[i], s.a.get(i));
    b2.set(pi[i], s.b.get(i));
    st2[pi[i]] = s.settings[i];
  }
  std::vector<std::uint32_t> sh2(code.n());
  for (std::uint32_t k = 0; k < code.n(); ++k) sh2[k] = pi[code.shuffle()[k]];
  const auto code2 = code.with_shuffle(sh2);
  const auto syn2 = encode(code2, a2);
  EXPECT_EQ(syn2, encode(code, s.a));
  const auto r = decode(code2, b2, st2, pri, syn2);
  EXPECT_EQ(r.success, ref.success);
  EXPECT_EQ(r.iterations, ref.iterations);
  for (std::uint32_t i = 0; i < code.n(); ++i) ASSERT_EQ(r.a_hat.get(pi[i]), ref.a_hat.get(i));
}

// Success counts must not drop as the syndrome grows. Coupling length 10
// keeps each section large enough at n = 1e4 for the trend to be visible.
TEST(Decode, RateMonotonicityLadder) {
  const std::uint32_t n = 10000;
  const auto pri = DecoderPriors::from_parametric(kS, kQ);
  int prev = -1;
  for (double eta : {0.24, 0.30, 0.36}) {
    const auto code = small_code(n, eta);
    int ok = 0;
    for (int t = 0; t < 4; ++t) {
      const auto s = sample_rounds(n, kS, kQ, 100 + t);
      const auto r = decode(code, s.b, s.settings, pri, encode(code, s.a));
      ok += r.success && r.a_hat == s.a;
    }
    EXPECT_GE(ok, prev) << "eta " << eta;
    prev = ok;
  }
  EXPECT_EQ(prev, 4);
}

int bsc_successes(double eta, int trials) {
  const std::uint32_t n = 100000;
  const double delta = 0.05;
  const auto pri = DecoderPriors::from_parametric(4.0, delta);
  const std::vector<SettingPair> st(n, SettingPair{0, 2});
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(500 + t);
    const auto code = build_code(n, static_cast<std::uint32_t>(std::ceil(eta * n)),
                                 CodeConfig{}, rng, 7 + t);
    BitVector a(n), b(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const bool ai = rng.bit();
      a.set(i, ai);
      b.set(i, ai ^ (rng.uniform() < delta));
    }
    const auto r = decode(code, b, st, pri, encode(code, a));
    ok += r.success && r.a_hat == a;
  }
  return ok;
}

TEST(Decode, PureBscAboveCapacity) {
  EXPECT_GE(bsc_successes(binary_entropy(0.05) + 0.03, 10), 9);
}

TEST(Decode, PureBscBelowCapacity) {
  EXPECT_LE(bsc_successes(binary_entropy(0.05) - 0.02, 10), 1);
}

}  // namespace
}  // namespace diqkd
