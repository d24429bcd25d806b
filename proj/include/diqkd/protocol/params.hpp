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


#ifndef DIQKD_PROTOCOL_PARAMS_HPP_
#define DIQKD_PROTOCOL_PARAMS_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "diqkd/ec/bounds.hpp"
#include "diqkd/ec/bp_decoder.hpp"
#include "diqkd/ec/sc_ldpc.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/keylen/optimize.hpp"
#include "diqkd/model.hpp"
#include "diqkd/rational.hpp"
#include "diqkd/trevisan/extractor.hpp"

namespace diqkd {

// Fixed before the run and identical on both sides.
struct ProtocolParams {
  std::uint64_t n = 0;
  Rational gamma{13, 256};
  double omega_thresh = 0;
  std::uint64_t m = 0;
  std::uint64_t ell = 0;
  double eps_pa = 1e-11;
  std::optional<ExtractorParams> extractor;  // empty when ell = 0
  std::shared_ptr<const ScLdpcCode> code;
  DecoderPriors priors;
  BpOptions bp;
  unsigned extract_workers = 1;
  std::chrono::milliseconds timeout{60000};
  std::optional<std::uint64_t> key_budget;  // optimizer bound on ell, if computed

  std::uint64_t seed_bits() const { return extractor ? extractor->s : 0; }

  void validate() const {
    if (n == 0) throw DomainError("n must be positive");
    if (!code || code->n() != n || code->m() != m) {
      throw DomainError("code does not match (n, m)");
    }
    if (ell > 0 && (!extractor || extractor->n != n || extractor->ell != ell)) {
      throw DomainError("extractor does not match (n, ell)");
    }
    if (ell == 0 && extractor) throw DomainError("extractor given for ell = 0");
    if (key_budget && ell > *key_budget) {
      throw InfeasibleError("ell exceeds the key-length budget " + std::to_string(*key_budget));
    }
    priors.validate();
  }
};

// Inputs from which ProtocolParams are derived. Unset fields take the
// defaults: omega_thresh from the completeness threshold of the parametric
// model, m from syndrome_length, ell from the optimizer.
struct ProtocolSetup {
  std::uint64_t n = 100000;
  Rational gamma{13, 256};
  double S = 2.64;
  double Q = 0.018;
  double eps_snd = 1e-10;
  std::optional<double> omega_thresh;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> ell;
  // When false and ell is given, the optimizer is skipped and ell is not
  // checked against the budget. For exercising the pipeline at small n.
  bool enforce_key_budget = true;
  double eps_pa = 1e-11;  // used only when the optimizer is skipped
  std::uint64_t code_seed = 1;
  CodeConfig code;
  OptimizerConfig optimizer;
  BpOptions bp;
  unsigned extract_workers = 1;
  std::chrono::milliseconds timeout{60000};
};

inline ProtocolParams make_protocol_params(const ProtocolSetup& s) {
  ProtocolParams p;
  p.n = s.n;
  p.gamma = s.gamma;
  const double omega = (4.0 + s.S) / 8.0;
  p.omega_thresh = s.omega_thresh.value_or(
      completeness_threshold(omega, s.gamma.value(), static_cast<double>(s.n)));
  p.m = s.m.value_or(syndrome_length(static_cast<double>(s.n), s.gamma.value(), s.S, s.Q));
  p.eps_pa = s.eps_pa;
  if (s.enforce_key_budget || !s.ell) {
    const auto opt = optimize(static_cast<double>(s.n), s.gamma.value(), p.omega_thresh,
                              static_cast<double>(p.m), s.eps_snd, s.optimizer);
    p.key_budget = opt.feasible ? opt.breakdown.ell : 0;
    if (opt.feasible) p.eps_pa = opt.params.eps_pa;
  }
  p.ell = s.ell.value_or(p.key_budget.value_or(0));
  if (!s.enforce_key_budget) p.key_budget.reset();
  if (p.ell > 0) p.extractor = plan(p.n, p.ell, p.eps_pa);
  if (p.n > 0xffffffffULL) throw DomainError("n too large for the code construction");
  Rng code_rng(s.code_seed);
  p.code = std::make_shared<const ScLdpcCode>(
      build_code(static_cast<std::uint32_t>(p.n), static_cast<std::uint32_t>(p.m), s.code,
                 code_rng, splitmix64(s.code_seed)));
  p.priors = DecoderPriors::from_parametric(s.S, s.Q);
  p.bp = s.bp;
  p.extract_workers = s.extract_workers;
  p.timeout = s.timeout;
  p.validate();
  return p;
}

}  // namespace diqkd

#endif  // DIQKD_PROTOCOL_PARAMS_HPP_
