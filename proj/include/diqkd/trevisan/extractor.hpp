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

#ifndef DIQKD_TREVISAN_EXTRACTOR_HPP_
#define DIQKD_TREVISAN_EXTRACTOR_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

#include "diqkd/bits.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/trevisan/gf2n.hpp"
#include "diqkd/trevisan/primes.hpp"
#include "diqkd/trevisan/upsilon.hpp"

namespace diqkd {

struct ExtractorParams {
  std::uint64_t n = 0;       // source bits
  std::uint64_t ell = 0;     // output bits
  double eps1 = 0;           // per-bit error
  std::uint64_t t = 0;       // bits per subseed, even
  std::uint64_t t_plus = 0;  // smallest prime >= t
  std::uint64_t blocks = 0;  // design blocks
  std::uint64_t s = 0;       // seed bits = blocks * t_plus^2

  unsigned field_degree() const { return static_cast<unsigned>(t / 2); }
  std::uint64_t source_blocks() const { return (n + field_degree() - 1) / field_degree(); }
};

// Block count of the design: max(2, ceil((ln(l - e) - ln(q - e)) / (1 - ln(e - 1))) + 1),
// falling back to 2 when l <= e or q <= e.
inline std::uint64_t design_block_count(std::uint64_t ell, std::uint64_t t_plus) {
  const double e = std::numbers::e;
  const double l = static_cast<double>(ell), q = static_cast<double>(t_plus);
  if (l <= e || q <= e) return 2;
  const double v =
      std::ceil((std::log(l - e) - std::log(q - e)) / (1.0 - std::log(e - 1.0))) + 1.0;
  return v > 2.0 ? static_cast<std::uint64_t>(v) : 2;
}

// Parameters for an explicit subseed size t (even, >= 2).
inline ExtractorParams plan_with_t(std::uint64_t n, std::uint64_t ell, std::uint64_t t,
                                   double eps1 = 0.0) {
  if (n == 0) throw DomainError("source must be non-empty");
  if (ell == 0) throw DomainError("output length must be at least 1");
  if (t < 2 || t % 2 || t / 2 > kMaxFieldDegree) {
    throw DomainError("t must be even and at most 1024");
  }
  ExtractorParams p;
  p.n = n;
  p.ell = ell;
  p.eps1 = eps1;
  p.t = t;
  p.t_plus = next_prime(t);
  p.blocks = design_block_count(ell, p.t_plus);
  p.s = p.blocks * p.t_plus * p.t_plus;
  return p;
}

inline ExtractorParams plan(std::uint64_t n, std::uint64_t ell, double eps_pa) {
  if (!(eps_pa > 0.0 && eps_pa < 1.0)) throw DomainError("eps_pa outside (0, 1)");
  if (ell == 0) throw DomainError("output length must be at least 1");
  if (n == 0) throw DomainError("source must be non-empty");
  const double eps1 = eps_pa / static_cast<double>(ell);
  const double half =
      std::ceil(std::log2(static_cast<double>(n)) + 2.0 * std::log2(2.0 / eps1));
  return plan_with_t(n, ell, 2 * static_cast<std::uint64_t>(half), eps1);
}

// Block weak design with r = 1 over GF(q), q = t_plus.
//
// Block b owns seed bits [b q^2, (b + 1) q^2). Its i-th set is the graph of the
// polynomial p_i whose coefficients are the base-q digits of i:
// {b q^2 + a q + p_i(a) : a < t}. Blocks are filled greedily: the largest
// prefix m such that (sets in earlier blocks) + U(m) <= ell, where U(m) bounds
// sum_{j != i} 2^{|S_i & S_j|} inside a prefix of m polynomials.
class WeakDesign {
 public:
  WeakDesign(std::uint64_t ell, std::uint64_t t, std::uint64_t q, std::uint64_t max_blocks)
      : ell_(ell), t_(t), q_(q) {
    if (t == 0 || t > q) throw DomainError("need 0 < t <= q");
    std::uint64_t done = 0;
    while (done < ell) {
      std::uint64_t lo = 1, hi = ell - done, best = 1;
      while (lo <= hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(done) + prefix_bound(mid) <= static_cast<double>(ell)) {
          best = mid;
          lo = mid + 1;
        } else {
          hi = mid - 1;
        }
      }
      block_start_.push_back(done);
      done += best;
    }
    if (block_start_.size() > max_blocks) {
      throw ConstructionError("weak design needs more blocks than the seed provides");
    }
    block_start_.push_back(ell);
  }

  explicit WeakDesign(const ExtractorParams& p) : WeakDesign(p.ell, p.t, p.t_plus, p.blocks) {}

  std::uint64_t size() const { return ell_; }
  std::uint64_t set_size() const { return t_; }
  std::uint64_t field() const { return q_; }
  std::uint64_t blocks_used() const { return block_start_.size() - 1; }
  std::uint64_t block_of(std::uint64_t i) const {
    return static_cast<std::uint64_t>(
        std::upper_bound(block_start_.begin(), block_start_.end(), i) - block_start_.begin() - 1);
  }

  // Seed indices of set i, in order of evaluation point a = 0..t-1.
  void set(std::uint64_t i, std::vector<std::uint64_t>& out) const {
    const std::uint64_t b = block_of(i);
    std::uint64_t idx = i - block_start_[b];
    std::vector<std::uint64_t> coeff;
    while (idx) {
      coeff.push_back(idx % q_);
      idx /= q_;
    }
    out.resize(t_);
    for (std::uint64_t a = 0; a < t_; ++a) {
      std::uint64_t v = 0;
      for (std::size_t d = coeff.size(); d-- > 0;) v = (v * a + coeff[d]) % q_;
      out[a] = b * q_ * q_ + a * q_ + v;
    }
  }
  std::vector<std::uint64_t> set(std::uint64_t i) const {
    std::vector<std::uint64_t> out;
    set(i, out);
    return out;
  }

  // Upper bound on sum_{j != i} 2^{|S_i & S_j|} over a prefix of m polynomials.
  double prefix_bound(std::uint64_t m) const {
    unsigned d = 0;
    double qp = static_cast<double>(q_);
    while (qp < static_cast<double>(m)) {
      ++d;
      qp *= static_cast<double>(q_);
    }
    double total = static_cast<double>(m);
    double binom = 1.0, qk = 1.0;
    for (unsigned k = 1; k <= d && k <= t_; ++k) {
      binom = binom * static_cast<double>(t_ - k + 1) / k;
      qk *= static_cast<double>(q_);
      const double agree = std::min(static_cast<double>(m),
                                    std::floor(static_cast<double>(m) / qk) + k);
      total += binom * agree;
    }
    return total - 1.0;
  }

 private:
  std::uint64_t ell_, t_, q_;
  std::vector<std::uint64_t> block_start_;
};

inline WeakDesign block_weak_design(const ExtractorParams& p) { return WeakDesign(p); }

// One-bit extractor: alpha = subseed bits [0, l), beta = [l, 2l). The source,
// cut into l-bit blocks c_0.. c_{N-1} (last one zero padded), is evaluated
// as y = sum c_j alpha^{N-1-j}; the output is the parity of y & beta.
template <std::size_t W>
class OneBitExtractor {
 public:
  using Elem = typename Gf2n<W>::Elem;

  OneBitExtractor(const BitVector& source, unsigned l) : field_(l), l_(l) {
    const std::size_t N = (source.size() + l - 1) / l;
    blocks_.resize(N);
    for (std::size_t j = 0; j < N; ++j) blocks_[j] = load(source, j * l, l);
  }

  bool operator()(const Elem& alpha, const Elem& beta) const {
    Elem y{};
    for (const auto& c : blocks_) {
      y = field_.mul(y, alpha);
      for (std::size_t w = 0; w < W; ++w) y[w] ^= c[w];
    }
    unsigned parity = 0;
    for (std::size_t w = 0; w < W; ++w) parity ^= std::popcount(y[w] & beta[w]) & 1u;
    return parity != 0;
  }

  static Elem load(const BitVector& bits, std::size_t pos, unsigned l) {
    Elem e{};
    for (unsigned k = 0; k < l; k += 64) {
      e[k / 64] = bits.word_at(pos + k, std::min(64u, l - k));
    }
    return e;
  }

 private:
  Gf2n<W> field_;
  unsigned l_;
  std::vector<Elem> blocks_;
};

// Trevisan extraction. Output bits are independent; `workers` only changes
// scheduling.
inline BitVector extract(const BitVector& source, const BitVector& seed,
                         const ExtractorParams& p, unsigned workers = 1) {
  if (source.size() != p.n) throw DomainError("source length does not match params");
  if (seed.size() != p.s) throw DomainError("seed length does not match params");
  const WeakDesign design(p);
  const unsigned l = p.field_degree();
  return with_field_width(l, [&](auto width) {
    constexpr std::size_t W = decltype(width)::value;
    const OneBitExtractor<W> ext(source, l);
    BitVector out(p.ell);
    std::vector<std::uint8_t> bits(p.ell);
    auto run = [&](std::uint64_t lo, std::uint64_t hi) {
      std::vector<std::uint64_t> idx;
      BitVector sub(p.t);
      for (std::uint64_t i = lo; i < hi; ++i) {
        design.set(i, idx);
        for (std::uint64_t k = 0; k < p.t; ++k) sub.set(k, seed.get(idx[k]));
        bits[i] = ext(OneBitExtractor<W>::load(sub, 0, l), OneBitExtractor<W>::load(sub, l, l));
      }
    };
    const unsigned nw = std::max(1u, std::min<unsigned>(workers, 64));
    if (nw == 1) {
      run(0, p.ell);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < nw; ++w) {
        pool.emplace_back(run, p.ell * w / nw, p.ell * (w + 1) / nw);
      }
    }
    for (std::uint64_t i = 0; i < p.ell; ++i) out.set(i, bits[i]);
    return out;
  });
}

// floor(upsilon(hmin - 6 - 5 log2(1/eps_pa))), or 0 below the domain.
inline std::uint64_t max_extractable(double hmin, double eps_pa) {
  if (!(eps_pa > 0.0 && eps_pa < 1.0)) throw DomainError("eps_pa outside (0, 1)");
  const double x = hmin - 6.0 - 5.0 * std::log2(1.0 / eps_pa);
  if (!(x >= 1.0)) return 0;
  return static_cast<std::uint64_t>(std::floor(upsilon(x)));
}

}  // namespace diqkd

#endif  // DIQKD_TREVISAN_EXTRACTOR_HPP_
