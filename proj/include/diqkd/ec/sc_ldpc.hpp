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

#ifndef DIQKD_EC_SC_LDPC_HPP_
#define DIQKD_EC_SC_LDPC_HPP_

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diqkd/bits.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

// Base biadjacency matrix; entry (i, j) counts edges between check i and
// variable j.
class Protograph {
 public:
  Protograph(std::uint32_t rows, std::uint32_t cols, std::vector<std::uint32_t> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0 || entries_.size() != std::size_t{rows} * cols) {
      throw DomainError("protograph shape mismatch");
    }
    for (std::uint32_t i = 0; i < rows; ++i) {
      if (row_degree(i) == 0) throw DomainError("protograph has an empty row");
    }
    for (std::uint32_t j = 0; j < cols; ++j) {
      if (col_degree(j) == 0) throw DomainError("protograph has an empty column");
    }
  }

  // (dv, dc)-regular base of size (dv/g) x (dc/g), every entry g = gcd(dv, dc).
  static Protograph regular(std::uint32_t dv, std::uint32_t dc) {
    if (dv == 0 || dc <= dv) throw DomainError("regular base needs 0 < dv < dc");
    const std::uint32_t g = std::gcd(dv, dc);
    return Protograph(dv / g, dc / g,
                      std::vector<std::uint32_t>(std::size_t{dv / g} * (dc / g), g));
  }

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::uint32_t at(std::uint32_t i, std::uint32_t j) const {
    return entries_[std::size_t{i} * cols_ + j];
  }
  std::uint32_t row_degree(std::uint32_t i) const {
    std::uint32_t d = 0;
    for (std::uint32_t j = 0; j < cols_; ++j) d += at(i, j);
    return d;
  }
  std::uint32_t col_degree(std::uint32_t j) const {
    std::uint32_t d = 0;
    for (std::uint32_t i = 0; i < rows_; ++i) d += at(i, j);
    return d;
  }
  double design_rate() const {
    return 1.0 - static_cast<double>(rows_) / static_cast<double>(cols_);
  }

 private:
  std::uint32_t rows_, cols_;
  std::vector<std::uint32_t> entries_;
};

inline double coupled_design_rate(const Protograph& base, std::uint32_t L,
                                  std::uint32_t w) {
  return 1.0 - static_cast<double>(L + w) * base.rows() /
                   (static_cast<double>(L) * base.cols());
}

struct CodeLineage {
  std::uint32_t dv = 0, dc = 0;
  std::uint32_t coupling_length = 0, coupling_width = 0;
  std::uint32_t lifting = 0;
  std::uint32_t removed_vars = 0;
  std::uint32_t merged_checks = 0;
  friend bool operator==(const CodeLineage&, const CodeLineage&) = default;
};

inline std::vector<std::uint32_t> make_shuffle(std::uint32_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_permutation(n, rng);
}

// Sparse parity-check matrix in CSR form (by row and by column) plus the
// public shuffle. Column k of H acts on a[shuffle[k]].
class ScLdpcCode {
 public:
  ScLdpcCode(std::uint32_t n, const std::vector<std::vector<std::uint32_t>>& rows,
             CodeLineage lineage, std::uint64_t shuffle_seed)
      : ScLdpcCode(n, rows, lineage, make_shuffle(n, shuffle_seed)) {
    shuffle_seed_ = shuffle_seed;
  }

  ScLdpcCode(std::uint32_t n, const std::vector<std::vector<std::uint32_t>>& rows,
             CodeLineage lineage, std::vector<std::uint32_t> shuffle)
      : n_(n), lineage_(lineage), shuffle_(std::move(shuffle)) {
    if (shuffle_.size() != n) throw DomainError("shuffle length mismatch");
    std::vector<bool> seen(n, false);
    for (auto s : shuffle_) {
      if (s >= n || seen[s]) throw DomainError("shuffle is not a permutation");
      seen[s] = true;
    }
    row_ptr_.assign(1, 0);
    for (const auto& r : rows) {
      for (auto v : r) {
        if (v >= n) throw DomainError("column index out of range");
        row_idx_.push_back(v);
      }
      row_ptr_.push_back(static_cast<std::uint32_t>(row_idx_.size()));
    }
    std::vector<std::uint32_t> deg(n, 0);
    for (auto v : row_idx_) ++deg[v];
    col_ptr_.assign(n + 1, 0);
    for (std::uint32_t v = 0; v < n; ++v) col_ptr_[v + 1] = col_ptr_[v] + deg[v];
    col_idx_.resize(row_idx_.size());
    col_edge_.resize(row_idx_.size());
    std::vector<std::uint32_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::uint32_t c = 0; c + 1 < row_ptr_.size(); ++c) {
      for (auto e = row_ptr_[c]; e < row_ptr_[c + 1]; ++e) {
        const auto slot = fill[row_idx_[e]]++;
        col_idx_[slot] = c;
        col_edge_[slot] = e;
      }
    }
  }

  std::uint32_t n() const { return n_; }
  std::uint32_t m() const { return static_cast<std::uint32_t>(row_ptr_.size() - 1); }
  std::size_t edges() const { return row_idx_.size(); }

  std::span<const std::uint32_t> row(std::uint32_t c) const {
    return {row_idx_.data() + row_ptr_[c], row_ptr_[c + 1] - row_ptr_[c]};
  }
  std::span<const std::uint32_t> col(std::uint32_t v) const {
    return {col_idx_.data() + col_ptr_[v], col_ptr_[v + 1] - col_ptr_[v]};
  }
  // Row-ordered edge ids of the edges in column v.
  std::span<const std::uint32_t> col_edges(std::uint32_t v) const {
    return {col_edge_.data() + col_ptr_[v], col_ptr_[v + 1] - col_ptr_[v]};
  }
  const std::vector<std::uint32_t>& row_ptr() const { return row_ptr_; }

  const CodeLineage& lineage() const { return lineage_; }
  const std::vector<std::uint32_t>& shuffle() const { return shuffle_; }
  // Empty when the shuffle was supplied explicitly.
  std::optional<std::uint64_t> shuffle_seed() const { return shuffle_seed_; }

  std::vector<std::vector<std::uint32_t>> rows() const {
    std::vector<std::vector<std::uint32_t>> out(m());
    for (std::uint32_t c = 0; c < m(); ++c) {
      auto r = row(c);
      out[c].assign(r.begin(), r.end());
    }
    return out;
  }

  ScLdpcCode with_shuffle(std::vector<std::uint32_t> shuffle) const {
    return ScLdpcCode(n_, rows(), lineage_, std::move(shuffle));
  }

  friend bool operator==(const ScLdpcCode& a, const ScLdpcCode& b) {
    return a.n_ == b.n_ && a.row_ptr_ == b.row_ptr_ && a.row_idx_ == b.row_idx_ &&
           a.lineage_ == b.lineage_ && a.shuffle_ == b.shuffle_;
  }

 private:
  std::uint32_t n_;
  std::vector<std::uint32_t> row_ptr_, row_idx_;
  std::vector<std::uint32_t> col_ptr_, col_idx_, col_edge_;
  CodeLineage lineage_;
  std::vector<std::uint32_t> shuffle_;
  std::optional<std::uint64_t> shuffle_seed_;
};

struct CodeConfig {
  std::uint32_t coupling_length = 80;
  std::optional<std::uint32_t> coupling_width;  // default dv - 1
  std::optional<std::uint32_t> lifting;         // default ceil(n / (L n_v))
  std::uint32_t max_check_degree = 100;
};

struct RegularFamily {
  std::uint32_t dv, dc;
  double coupled_rate;
};

// Regular (dv, dc) with dv in {3,4,5} whose coupled rate is closest below
// 1 - m/n.
inline RegularFamily choose_regular_family(double n, double m,
                                           const CodeConfig& cfg = {}) {
  const double target = 1.0 - m / n;
  std::optional<RegularFamily> best;
  for (std::uint32_t dv = 3; dv <= 5; ++dv) {
    const std::uint32_t w = cfg.coupling_width.value_or(dv - 1);
    for (std::uint32_t dc = dv + 1; dc <= cfg.max_check_degree; ++dc) {
      const double r = coupled_design_rate(Protograph::regular(dv, dc),
                                           cfg.coupling_length, w);
      if (r <= target && (!best || r > best->coupled_rate)) best = {dv, dc, r};
    }
  }
  if (!best) {
    throw ConstructionError("no regular family has a coupled rate below " +
                            std::to_string(target));
  }
  return *best;
}

inline ScLdpcCode build_code(std::uint32_t n, std::uint32_t m, const Protograph& base,
                             const CodeConfig& cfg, Rng& rng,
                             std::uint64_t shuffle_seed) {
  const std::uint32_t L = cfg.coupling_length;
  if (L < 2) throw DomainError("coupling length must be at least 2");
  if (n == 0 || m == 0 || m >= n) throw DomainError("need 0 < m < n");
  std::uint32_t max_col_degree = 0;
  for (std::uint32_t j = 0; j < base.cols(); ++j) {
    max_col_degree = std::max(max_col_degree, base.col_degree(j));
  }
  const std::uint32_t w = cfg.coupling_width.value_or(max_col_degree - 1);
  const std::uint32_t nc = base.rows(), nv = base.cols();
  const std::uint64_t block_vars = std::uint64_t{L} * nv;
  const std::uint32_t M = cfg.lifting.value_or(
      static_cast<std::uint32_t>((n + block_vars - 1) / block_vars));
  if (std::uint64_t{M} * block_vars < n) throw DomainError("lifting factor too small");
  const std::uint64_t n_full = std::uint64_t{M} * block_vars;
  const std::uint64_t m_full = std::uint64_t{L + w} * nc * M;
  if (m_full > 0xffffffffULL || n_full > 0xffffffffULL) {
    throw DomainError("code too large");
  }

  // Coupled protograph entries, then lifting with one uniform permutation per
  // protograph edge.
  std::vector<std::vector<std::uint32_t>> rows(m_full);
  for (std::uint32_t tau = 0; tau < L; ++tau) {
    for (std::uint32_t j = 0; j < nv; ++j) {
      std::uint32_t e = 0;
      for (std::uint32_t i = 0; i < nc; ++i) {
        for (std::uint32_t copy = 0; copy < base.at(i, j); ++copy, ++e) {
          const std::uint32_t shift = (e + j) % (w + 1);
          const std::uint64_t cb = std::uint64_t{tau + shift} * nc + i;
          const std::uint64_t vb = std::uint64_t{tau} * nv + j;
          const auto perm = random_permutation(M, rng);
          for (std::uint32_t r = 0; r < M; ++r) {
            rows[cb * M + perm[r]].push_back(static_cast<std::uint32_t>(vb * M + r));
          }
        }
      }
    }
  }
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }

  // Drop the n' - n variable nodes of smallest degree (lowest index first).
  std::vector<std::uint32_t> deg(n_full, 0);
  for (const auto& r : rows) {
    for (auto v : r) ++deg[v];
  }
  std::vector<std::uint32_t> order(n_full);
  std::iota(order.begin(), order.end(), 0u);
  const std::uint64_t n_remove = n_full - n;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_remove),
                    order.end(), [&](std::uint32_t a, std::uint32_t b) {
                      return deg[a] != deg[b] ? deg[a] < deg[b] : a < b;
                    });
  std::vector<std::uint32_t> remap(n_full, 0);
  for (std::uint64_t k = 0; k < n_remove; ++k) remap[order[k]] = ~0u;
  std::uint32_t next = 0;
  for (std::uint64_t v = 0; v < n_full; ++v) {
    if (remap[v] != ~0u) remap[v] = next++;
  }
  for (auto& r : rows) {
    std::vector<std::uint32_t> kept;
    kept.reserve(r.size());
    for (auto v : r) {
      if (remap[v] != ~0u) kept.push_back(remap[v]);
    }
    r = std::move(kept);
  }
  std::erase_if(rows, [](const auto& r) { return r.empty(); });

  if (rows.size() < m) {
    throw ConstructionError("protograph family yields fewer checks than requested");
  }
  const std::size_t k = rows.size() - m;
  if (2 * k > rows.size()) {
    throw ConstructionError("syndrome too short for this protograph family");
  }
  // Take the 2k highest-degree checks. Within the lowest degree tier that is
  // only partly needed, pick evenly spaced indices so merges spread along the
  // chain; then pair selected checks in index order (2i with 2i + 1).
  std::vector<std::uint32_t> by_degree(rows.size());
  std::iota(by_degree.begin(), by_degree.end(), 0u);
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](std::uint32_t a, std::uint32_t b) {
    return rows[a].size() > rows[b].size();
  });
  std::vector<std::uint32_t> picked;
  picked.reserve(2 * k);
  for (std::size_t lo = 0; lo < by_degree.size() && picked.size() < 2 * k;) {
    std::size_t hi = lo;
    while (hi < by_degree.size() && rows[by_degree[hi]].size() == rows[by_degree[lo]].size()) ++hi;
    const std::size_t tier = hi - lo, need = std::min(tier, 2 * k - picked.size());
    for (std::size_t i = 0; i < need; ++i) picked.push_back(by_degree[lo + i * tier / need]);
    lo = hi;
  }
  std::sort(picked.begin(), picked.end());
  std::vector<bool> absorbed(rows.size(), false);
  for (std::size_t i = 0; i < k; ++i) {
    auto& keep = rows[picked[2 * i]];
    const auto& other = rows[picked[2 * i + 1]];
    std::vector<std::uint32_t> merged;
    merged.reserve(keep.size() + other.size());
    std::set_union(keep.begin(), keep.end(), other.begin(), other.end(),
                   std::back_inserter(merged));
    keep = std::move(merged);
    absorbed[picked[2 * i + 1]] = true;
  }
  std::vector<std::vector<std::uint32_t>> final_rows;
  final_rows.reserve(m);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (!absorbed[c]) final_rows.push_back(std::move(rows[c]));
  }

  CodeLineage lineage;
  lineage.dv = max_col_degree;
  lineage.dc = base.row_degree(0);
  lineage.coupling_length = L;
  lineage.coupling_width = w;
  lineage.lifting = M;
  lineage.removed_vars = static_cast<std::uint32_t>(n_remove);
  lineage.merged_checks = static_cast<std::uint32_t>(k);
  return ScLdpcCode(n, final_rows, lineage, shuffle_seed);
}

// Picks the regular family automatically.
inline ScLdpcCode build_code(std::uint32_t n, std::uint32_t m, const CodeConfig& cfg,
                             Rng& rng, std::uint64_t shuffle_seed) {
  const auto fam = choose_regular_family(n, m, cfg);
  return build_code(n, m, Protograph::regular(fam.dv, fam.dc), cfg, rng, shuffle_seed);
}

inline BitVector encode(const ScLdpcCode& code, const BitVector& a) {
  if (a.size() != code.n()) throw DomainError("input length does not match code");
  const auto& sh = code.shuffle();
  BitVector syndrome(code.m());
  for (std::uint32_t c = 0; c < code.m(); ++c) {
    bool p = false;
    for (auto v : code.row(c)) p ^= a.get(sh[v]);
    syndrome.set(c, p);
  }
  return syndrome;
}

namespace detail {

inline void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& off) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (off >= in.size()) throw FormatError("truncated varint");
    const auto b = in[off++];
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if (!(b & 0x80)) return v;
  }
  throw FormatError("varint too long");
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t& off) {
  if (off + 4 > in.size()) throw FormatError("truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[off + i]) << (8 * i);
  off += 4;
  return v;
}

}  // namespace detail

inline constexpr char kCodeMagic[4] = {'S', 'C', 'L', 'D'};
inline constexpr std::uint32_t kCodeFormatVersion = 1;

// Header {magic, version, n, m, lineage}, rows as varint degree plus
// delta-coded columns, then the shuffle: tag 0 + u64 seed, or tag 1 + varints.
inline std::vector<std::uint8_t> serialize_code(const ScLdpcCode& code) {
  using detail::put_u32;
  using detail::put_varint;
  std::vector<std::uint8_t> out(kCodeMagic, kCodeMagic + 4);
  put_u32(out, kCodeFormatVersion);
  put_u32(out, code.n());
  put_u32(out, code.m());
  const auto& l = code.lineage();
  for (auto f : {l.dv, l.dc, l.coupling_length, l.coupling_width, l.lifting,
                 l.removed_vars, l.merged_checks}) {
    put_u32(out, f);
  }
  for (std::uint32_t c = 0; c < code.m(); ++c) {
    auto r = code.row(c);
    put_varint(out, r.size());
    std::uint32_t prev = 0;
    for (auto v : r) {
      put_varint(out, v - prev);
      prev = v;
    }
  }
  if (auto seed = code.shuffle_seed()) {
    out.push_back(0);
    put_u64_le(out, *seed);
  } else {
    out.push_back(1);
    for (auto s : code.shuffle()) put_varint(out, s);
  }
  return out;
}

inline ScLdpcCode deserialize_code(std::span<const std::uint8_t> in) {
  using detail::get_u32;
  using detail::get_varint;
  if (in.size() < 4 || std::memcmp(in.data(), kCodeMagic, 4) != 0) {
    throw FormatError("not a code file");
  }
  std::size_t off = 4;
  if (get_u32(in, off) != kCodeFormatVersion) throw FormatError("unsupported code version");
  const std::uint32_t n = get_u32(in, off);
  const std::uint32_t m = get_u32(in, off);
  CodeLineage l;
  for (auto* f : {&l.dv, &l.dc, &l.coupling_length, &l.coupling_width, &l.lifting,
                  &l.removed_vars, &l.merged_checks}) {
    *f = get_u32(in, off);
  }
  std::vector<std::vector<std::uint32_t>> rows(m);
  for (auto& r : rows) {
    const auto deg = get_varint(in, off);
    if (deg > n) throw FormatError("row degree exceeds n");
    std::uint64_t v = 0;
    for (std::uint64_t k = 0; k < deg; ++k) {
      v += get_varint(in, off);
      if (v >= n) throw FormatError("column index out of range");
      r.push_back(static_cast<std::uint32_t>(v));
    }
  }
  if (off >= in.size()) throw FormatError("missing shuffle");
  const auto tag = in[off++];
  if (tag == 0) {
    const auto seed = get_u64_le(in.subspan(off));
    off += 8;
    if (off != in.size()) throw FormatError("trailing bytes in code");
    return ScLdpcCode(n, rows, l, seed);
  }
  if (tag != 1) throw FormatError("unknown shuffle tag");
  std::vector<std::uint32_t> shuffle(n);
  for (auto& s : shuffle) s = static_cast<std::uint32_t>(get_varint(in, off));
  if (off != in.size()) throw FormatError("trailing bytes in code");
  return ScLdpcCode(n, rows, l, std::move(shuffle));
}

}  // namespace diqkd

#endif  // DIQKD_EC_SC_LDPC_HPP_
