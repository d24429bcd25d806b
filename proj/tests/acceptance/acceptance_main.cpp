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

// Acceptance checks. One PASS/FAIL line per criterion, tolerances pinned
// below. Exit status is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "diqkd/diqkd.hpp"
#include "oracle.hpp"

namespace {

using namespace diqkd;
using Clock = std::chrono::steady_clock;

constexpr double kGamma = 13.0 / 256.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& f) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < time_limit_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s  %2d  %-28s %s  [%.3fs, limit %gs%s]\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, time_limit_s, in_time ? "" : ", over time");
  std::fflush(stdout);
}

// Mean wall time of one call, for the sub-millisecond criteria.
template <typename F>
double mean_seconds(F&& f, int reps = 1000) {
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

unsigned worker_count() { return std::max(1u, std::min(4u, std::thread::hardware_concurrency())); }

BitVector random_bits(std::size_t n, Rng& rng) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng.bit());
  return v;
}

// ---- 1, 2

Outcome completeness() {
  double w = 0;
  const double per_call =
      mean_seconds([&] { w = completeness_threshold(0.83, kGamma, 1.5e6, 3.0); });
  const bool ok = std::abs(w - 0.825538) < 5e-7 && per_call < 1e-3;
  return {ok, fmt("omega_thresh=%.9f want 0.825538 (6 s.f.), %.2e s/call", w, per_call)};
}

Outcome syndrome() {
  std::uint64_t m = 0;
  const double per_call = mean_seconds([&] { m = syndrome_length(1.5e6, kGamma, 2.64, 0.018); });
  const bool ok = m >= 296457 && m <= 296577 && per_call < 1e-3;
  return {ok, fmt("m=%llu want [296457, 296577], %.2e s/call",
                  static_cast<unsigned long long>(m), per_call)};
}

// ---- 3, 4

OptimizeResult reference_point(double n) {
  const double w = completeness_threshold(0.83, kGamma, n);
  const double m = static_cast<double>(syndrome_length(n, kGamma, 2.64, 0.018));
  return optimize(n, kGamma, w, m, 1e-10);
}

Outcome key_length_band() {
  const auto r = reference_point(1.5e6);
  const auto ell = r.feasible ? r.breakdown.ell : 0;
  const bool ok = r.feasible && ell >= 90000 && ell <= 97000 && r.breakdown.soundness <= 1e-10;
  return {ok, fmt("ell=%llu rate=%.4f%% want [90000, 97000], soundness=%.3e",
                  static_cast<unsigned long long>(ell), 100.0 * ell / 1.5e6,
                  r.breakdown.soundness)};
}

Outcome rate_curve() {
  std::ostringstream d;
  double prev = -1;
  bool ok = true;
  for (double n : {5e5, 1e6, 1.5e6, 3e6}) {
    const auto r = reference_point(n);
    const double rate = r.feasible ? r.breakdown.ell / n : 0.0;
    d << fmt("n=%.1e:rate=%.5f(pre=%.0f) ", n, rate, r.breakdown.pre_upsilon);
    ok = ok && rate > prev;
    prev = rate;
  }
  d << "want strictly increasing";
  return {ok, d.str()};
}

// ---- 5

Outcome overheads() {
  const auto b = overhead_bounds(5e6, kGamma, 2.6507, 0.0239, 1e-3);
  const double hg = global_bsc_overhead(kGamma, 2.6507, 0.0239);
  const bool a = std::abs(b.eta_inf - 0.1847) <= 0.0005;
  const bool e = std::abs(b.eta_est - 0.189) <= 0.001;
  const bool h = std::abs(hg - 0.204) <= 0.001;
  return {a && e && h,
          fmt("eta_inf=%.5f want 0.1847+-5e-4 [%s]; eta_est(5e6)=%.5f want 0.189+-1e-3 [%s]; "
              "h_global=%.5f want 0.204+-1e-3 [%s]",
              b.eta_inf, a ? "ok" : "off", b.eta_est, e ? "ok" : "off", hg, h ? "ok" : "off")};
}

// ---- 6

int decode_trials(std::uint32_t n, std::uint32_t m, int trials) {
  const double S = 2.6507, Q = 0.0239;
  const auto model = DeviceModel::parametric(S, Q);
  const InputPolicy pol{Rational(13, 256)};
  const auto pri = DecoderPriors::from_parametric(S, Q);
  BpOptions opt;
  opt.workers = worker_count();
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + t);
    const auto code = build_code(n, m, CodeConfig{}, rng, 77 + t);
    BitVector a(n), b(n);
    std::vector<SettingPair> st(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto r = sample_round(model, pol, rng, i);
      a.set(i, r.a);
      b.set(i, r.b);
      st[i] = {r.x, r.y};
    }
    const auto res = decode(code, b, st, pri, encode(code, a), opt);
    ok += res.success && res.a_hat == a;
  }
  return ok;
}

Outcome desk_decoding() {
  const std::uint32_t n = 100000;
  const auto m_hi = static_cast<std::uint32_t>(syndrome_length(n, kGamma, 2.6507, 0.0239));
  const double eta_inf = overhead_bounds(n, kGamma, 2.6507, 0.0239, 1e-3).eta_inf;
  const auto m_lo = static_cast<std::uint32_t>(std::ceil((eta_inf - 0.02) * n));
  const int hi = decode_trials(n, m_hi, 20);
  const int lo = decode_trials(n, m_lo, 20);
  return {hi >= 18 && lo <= 2,
          fmt("m=%u: %d/20 want >=18; m=%u (eta_inf-0.02): %d/20 want <=2", m_hi, hi, m_lo, lo)};
}

// ---- 7

bool design_ok(const WeakDesign& d) {
  const std::uint64_t ell = d.size();
  std::vector<std::set<std::uint64_t>> sets(ell);
  for (std::uint64_t i = 0; i < ell; ++i) {
    const auto s = d.set(i);
    sets[i] = {s.begin(), s.end()};
    if (sets[i].size() != d.set_size()) return false;
  }
  for (std::uint64_t j = 0; j < ell; ++j) {
    double sum = 0;
    for (std::uint64_t i = 0; i < j; ++i) {
      std::size_t common = 0;
      for (auto x : sets[j]) common += sets[i].count(x);
      sum += std::ldexp(1.0, static_cast<int>(common));
    }
    if (sum > static_cast<double>(ell)) return false;
  }
  return true;
}

Outcome extractor_oracle() {
  Rng rng(2026);
  const auto p = plan_with_t(32, 4, 8);
  int match = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto src = random_bits(p.n, rng), seed = random_bits(p.s, rng);
    match += extract(src, seed, p) == oracle::extract(src, seed, p.ell, p.t, p.t_plus);
  }
  int designs = 0, good = 0;
  for (std::uint64_t q : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    for (std::uint64_t t : {std::uint64_t{2}, q - 1, q}) {
      for (std::uint64_t ell : {std::uint64_t{1}, std::uint64_t{4}, std::uint64_t{8}, q,
                                q * q + 3, std::uint64_t{400}}) {
        ++designs;
        good += design_ok(WeakDesign(ell, t, q, 1000));
      }
    }
  }
  return {match == 100 && good == designs,
          fmt("extract==oracle %d/100; overlap invariant %d/%d designs", match, good, designs)};
}

// ---- 8

Outcome upsilon_props() {
  bool ok = upsilon(1.0) == 1.0 && std::abs(upsilon(6.0) - 2.0) <= 1e-10;
  std::ostringstream d;
  d << fmt("U(1)=%.3f U(6)=%.12f", upsilon(1.0), upsilon(6.0));
  for (double x : {10.0, 100.0, 1e5}) {
    const double y = upsilon(x);
    ok = ok && x - kUpsilonB * std::log(x) <= y && y <= x;
    d << fmt(" U(%g)=%.4f", x, y);
  }
  const double per_call = mean_seconds([] { (void)upsilon(1e5); });
  ok = ok && per_call < 1e-3;
  d << fmt(", %.2e s/call", per_call);
  return {ok, d.str()};
}

// ---- 9

Outcome end_to_end() {
  ProtocolSetup s;
  s.ell = 4096;  // demonstration length; the budget at n = 1e5 is zero
  s.enforce_key_budget = false;
  s.bp.workers = worker_count();
  const auto p = make_protocol_params(s);
  int honest = 0, bell = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng kr(splitmix64(seed * 77));
    const auto k0 = SharedKeyK0::generate(kr, p.seed_bits());
    const auto o = run_protocol(p, DeviceModel::parametric(2.64, 0.018), k0, seed);
    honest += o.success && o.k_a == o.k_b && o.alice.extracted.size() == p.ell &&
              o.balance.consumed == 256 && o.leakage_bits() == p.m + 258;
    const auto c = run_protocol(p, DeviceModel::parametric(2.2, 0.018), k0, seed);
    bell += !c.success && c.reason == AbortReason::kBellValidationFailed;
  }
  return {honest >= 19 && bell >= 19,
          fmt("honest %d/20 want >=19 (ell=%llu, m=%llu); S=2.2 BellValidationFailed %d/20 "
              "want >=19",
              honest, static_cast<unsigned long long>(p.ell),
              static_cast<unsigned long long>(p.m), bell)};
}

// ---- 10

Outcome properties() {
  std::ostringstream d;
  bool all = true;
  auto note = [&](const char* name, bool ok) {
    all = all && ok;
    d << name << (ok ? "=ok " : "=FAIL ");
  };

  {
    Rng rng(21);
    std::vector<std::uint8_t> sb;
    for (int w = 0; w < 20; ++w) put_u64_le(sb, rng.next_u64());
    const auto seed = HashSeed::from_bits(BitVector::from_bytes(sb, kHashSeedBits));
    const std::vector<std::uint8_t> msg(33, 0x3c);
    const int draws = 100000;
    std::array<int, 64> ones{};
    for (int i = 0; i < draws; ++i) {
      const auto t = wc_tag(seed, rng.next_u64(), msg);
      for (int b = 0; b < 64; ++b) ones[b] += (t.value >> b) & 1;
    }
    bool ok = true;
    for (int b = 0; b < 64; ++b) ok = ok && std::abs(ones[b] - draws / 2.0) <= 4 * std::sqrt(draws * 0.25);
    note("pad_uniformity", ok);
  }
  {
    Rng rng(23);
    std::vector<std::uint8_t> m(48);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i);
    auto forged = m;
    forged[17] ^= 0x04;
    const int trials = 200000;
    int wins = 0;
    for (int i = 0; i < trials; ++i) {
      std::vector<std::uint8_t> sb;
      for (int w = 0; w < 20; ++w) put_u64_le(sb, rng.next_u64());
      const auto seed = HashSeed::from_bits(BitVector::from_bytes(sb, kHashSeedBits));
      const std::uint64_t pad = rng.next_u64();
      const auto t = wc_tag(seed, pad, m);
      wins += ((wc_tag(seed, pad, forged).value ^ t.value ^ 0x5a) & 0xff) == 0;
    }
    const double pr = 1.0 / 256;
    note("forgery_8bit", wins <= trials * pr + 4 * std::sqrt(trials * pr * (1 - pr)));
  }
  {
    CodeConfig cfg;
    cfg.coupling_length = 10;
    Rng rng(7);
    const auto code = build_code(2000, 800, cfg, rng, 9);
    bool ok = true;
    for (int t = 0; t < 500 && ok; ++t) {
      const auto a = random_bits(code.n(), rng), b = random_bits(code.n(), rng);
      auto ab = a;
      ab ^= b;
      auto lhs = encode(code, a);
      lhs ^= encode(code, b);
      ok = lhs == encode(code, ab);
    }
    note("encode_linearity", ok);
  }
  {
    const double S = 2.6507, Q = 0.0239;
    const std::uint32_t n = 10000;
    CodeConfig cfg;
    cfg.coupling_length = 10;
    const auto model = DeviceModel::parametric(S, Q);
    const InputPolicy pol{Rational(13, 256)};
    bool ok = true;
    for (double eta : {0.40, 0.24}) {
      Rng rng(55);
      const auto code = build_code(n, static_cast<std::uint32_t>(std::ceil(eta * n)), cfg, rng, 9);
      BitVector a(n), b(n);
      std::vector<SettingPair> st(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        const auto r = sample_round(model, pol, rng, i);
        a.set(i, r.a);
        b.set(i, r.b);
        st[i] = {r.x, r.y};
      }
      const auto syn = encode(code, a);
      const auto pri = DecoderPriors::from_parametric(S, Q);
      BpOptions opt;
      opt.max_iters = 60;
      const auto ref = decode(code, b, st, pri, syn, opt);
      for (unsigned w : {2u, 3u, 8u}) {
        opt.workers = w;
        const auto r = decode(code, b, st, pri, syn, opt);
        ok = ok && r.success == ref.success && r.iterations == ref.iterations &&
             r.a_hat == ref.a_hat;
      }
    }
    note("bp_worker_determinism", ok);
  }
  {
    SecurityParams p;
    p.t = 0.81;
    p.alpha1 = 1.0006;
    p.alpha2 = 1.0037;
    p.eps_pa = 2e-11;
    p.eps_ea = 9e-11;
    p.eps_s = 4e-11;
    p.eps_s1 = 1e-11;
    p.eps_s2 = 5e-12;
    bool ok = true;
    for (double n : {1e5, 1.5e6, 3e6}) {
      const double w = completeness_threshold(0.83, kGamma, n);
      const auto b = key_length(n, kGamma, w,
                                static_cast<double>(syndrome_length(n, kGamma, 2.64, 0.018)), p);
      const auto& T = b.terms;
      const double sum = T.entropy_rate + T.eat_gap + T.second_order + T.hmax_cost +
                         T.renyi_costs + T.chain_rule + T.pa_cost + T.leakage + T.constant;
      ok = ok && std::abs(sum - b.pre_upsilon) <= 1e-9 * std::abs(sum) &&
           b.soundness == std::max(p.eps_ea, p.eps_pa + 2 * p.eps_s) + 4 * p.eps_h;
    }
    note("keylen_breakdown_sum", ok);
  }
  return {all, d.str()};
}

}  // namespace

int main() {
  criterion(1, "completeness_threshold", 1.0, completeness);
  criterion(2, "syndrome_length", 1.0, syndrome);
  criterion(3, "key_length_band", 60.0, key_length_band);
  criterion(4, "key_rate_curve", 300.0, rate_curve);
  criterion(5, "ec_overhead_bounds", 1.0, overheads);
  criterion(6, "desk_scale_decoding", 600.0, desk_decoding);
  criterion(7, "extractor_oracle", 30.0, extractor_oracle);
  criterion(8, "upsilon", 1.0, upsilon_props);
  criterion(9, "end_to_end_protocol", 900.0, end_to_end);
  criterion(10, "property_suites", 600.0, properties);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
