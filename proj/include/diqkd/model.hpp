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

#ifndef DIQKD_MODEL_HPP_
#define DIQKD_MODEL_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "diqkd/errors.hpp"
#include "diqkd/rational.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

// P(a, b) indexed [a][b].
using JointTable = std::array<std::array<double, 2>, 2>;

struct SettingPair {
  std::uint8_t x;
  std::uint8_t y;
  friend bool operator==(const SettingPair&, const SettingPair&) = default;
};

inline constexpr std::array<SettingPair, 5> kSettingPairs = {
    {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}}};

inline int setting_index(int x, int y) {
  for (int k = 0; k < 5; ++k) {
    if (kSettingPairs[k].x == x && kSettingPairs[k].y == y) return k;
  }
  throw DomainError("invalid setting pair (" + std::to_string(x) + "," +
                    std::to_string(y) + ")");
}

inline constexpr double kTsirelsonS = 2.0 * std::numbers::sqrt2;

class DeviceModel {
 public:
  static DeviceModel parametric(double S, double Q) {
    if (!(S > 2.0 && S <= kTsirelsonS + 1e-15)) {
      throw DomainError("CHSH score outside (2, 2*sqrt(2)]");
    }
    if (!(Q >= 0.0 && Q < 0.5)) throw DomainError("QBER outside [0, 1/2)");
    DeviceModel m;
    m.S_ = S;
    m.Q_ = Q;
    for (int k = 0; k < 4; ++k) {
      const int xy = kSettingPairs[k].x * kSettingPairs[k].y;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double sign = ((a ^ b ^ xy) & 1) ? -1.0 : 1.0;
          m.tables_[k][a][b] = (1.0 + sign * S / 4.0) / 4.0;
        }
      }
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double sign = ((a ^ b) & 1) ? -1.0 : 1.0;
        m.tables_[4][a][b] = ((a == b ? 1.0 : 0.0) - sign * Q) / 2.0;
      }
    }
    return m;
  }

  // Tables in kSettingPairs order. Each must sum to 1 within 1e-6 and is then
  // renormalized.
  static DeviceModel empirical(const std::array<JointTable, 5>& tables) {
    DeviceModel m;
    for (int k = 0; k < 5; ++k) {
      double sum = 0;
      for (auto& row : tables[k]) {
        for (double p : row) {
          if (!(p >= 0.0)) throw DomainError("negative probability in table");
          sum += p;
        }
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw DomainError("probability table does not sum to 1");
      }
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) m.tables_[k][a][b] = tables[k][a][b] / sum;
      }
    }
    return m;
  }

  // Text format: five lines `x y p00 p01 p10 p11`, '#' starts a comment.
  // invert_alice swaps Alice's outcome labels.
  static DeviceModel load_empirical(const std::string& path,
                                    bool invert_alice = false) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open " + path);
    std::array<JointTable, 5> tables{};
    std::array<bool, 5> seen{};
    std::string line;
    while (std::getline(f, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream in(line);
      int x, y;
      if (!(in >> x)) continue;
      double p[4];
      if (!(in >> y >> p[0] >> p[1] >> p[2] >> p[3])) {
        throw FormatError("malformed table line: " + line);
      }
      const int k = setting_index(x, y);
      if (seen[k]) throw FormatError("duplicate setting in table");
      seen[k] = true;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          tables[k][invert_alice ? 1 - a : a][b] = p[2 * a + b];
        }
      }
    }
    for (bool s : seen) {
      if (!s) throw FormatError("table is missing a setting pair");
    }
    return empirical(tables);
  }

  double joint_prob(int a, int b, int x, int y) const {
    if ((a | b) & ~1) throw DomainError("outcome must be a bit");
    return tables_[setting_index(x, y)][a][b];
  }

  const JointTable& table(int x, int y) const { return tables_[setting_index(x, y)]; }

  bool is_parametric() const { return S_.has_value(); }
  std::optional<double> S() const { return S_; }
  std::optional<double> Q() const { return Q_; }

  // Winning probability averaged over the four test settings.
  double expected_winning_probability() const {
    double w = 0;
    for (int k = 0; k < 4; ++k) {
      const int xy = kSettingPairs[k].x * kSettingPairs[k].y;
      for (int a = 0; a < 2; ++a) w += tables_[k][a][a ^ xy];
    }
    return w / 4.0;
  }

 private:
  DeviceModel() = default;
  std::array<JointTable, 5> tables_{};
  std::optional<double> S_;
  std::optional<double> Q_;
};

class InputPolicy {
 public:
  explicit InputPolicy(Rational gamma) : gamma_(gamma) {
    if (gamma.num() == 0 || gamma.num() > gamma.den()) {
      throw DomainError("gamma outside (0, 1]");
    }
  }

  const Rational& gamma() const { return gamma_; }

  static Rational alice_prob(int) { return Rational(1, 2); }
  Rational bob_prob(int y) const {
    if (y == 0 || y == 1) return Rational(gamma_.num(), 2 * gamma_.den());
    if (y == 2) return Rational(gamma_.den() - gamma_.num(), gamma_.den());
    throw DomainError("Bob input outside {0,1,2}");
  }

  // Exact draw: uniform over 2*den slots, 2*num of which are test rounds.
  int sample_bob(Rng& rng) const {
    const std::uint64_t r = rng.below(2 * gamma_.den());
    if (r < gamma_.num()) return 0;
    if (r < 2 * gamma_.num()) return 1;
    return 2;
  }
  static int sample_alice(Rng& rng) { return rng.bit() ? 1 : 0; }

 private:
  Rational gamma_;
};

enum class Score : std::uint8_t { kLost = 0, kWon = 1, kNone = 2 };

inline Score score_round(int x, int y, int a, int b) {
  if (y == 2) return Score::kNone;
  return ((a ^ b) == (x & y)) ? Score::kWon : Score::kLost;
}

struct RoundData {
  std::uint64_t index = 0;
  std::uint8_t x = 0, y = 0, t = 0, a = 0, b = 0;
  Score u = Score::kNone;
  friend bool operator==(const RoundData&, const RoundData&) = default;
};

// Draws (a, b) from a joint table with one uniform.
inline std::pair<int, int> sample_outcomes(const JointTable& p, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      acc += p[a][b];
      if (u < acc) return {a, b};
    }
  }
  for (int k = 3; k >= 0; --k) {
    if (p[k >> 1][k & 1] > 0) return {k >> 1, k & 1};
  }
  return {1, 1};
}

inline RoundData sample_round(const DeviceModel& model, const InputPolicy& policy,
                              Rng& rng, std::uint64_t index = 0) {
  RoundData r;
  r.index = index;
  r.x = static_cast<std::uint8_t>(InputPolicy::sample_alice(rng));
  r.y = static_cast<std::uint8_t>(policy.sample_bob(rng));
  r.t = r.y != 2;
  if (!r.t) r.x = 0;
  auto [a, b] = sample_outcomes(model.table(r.x, r.y), rng);
  r.a = static_cast<std::uint8_t>(a);
  r.b = static_cast<std::uint8_t>(b);
  r.u = score_round(r.x, r.y, a, b);
  return r;
}

struct ChshStatistics {
  double omega;
  double S;
  double q_hat;
  std::uint64_t test_rounds;
  std::uint64_t key_rounds;
};

inline ChshStatistics chsh_statistics(const std::vector<RoundData>& rounds) {
  std::uint64_t tests = 0, wins = 0, keys = 0, errors = 0;
  for (const auto& r : rounds) {
    if (r.t) {
      ++tests;
      wins += ((r.a ^ r.b) == (r.x & r.y));
    } else {
      ++keys;
      errors += (r.a != r.b);
    }
  }
  if (tests == 0) throw InfeasibleError("no test rounds: CHSH score undefined");
  if (keys == 0) throw InfeasibleError("no key rounds: QBER undefined");
  const double omega = static_cast<double>(wins) / static_cast<double>(tests);
  return {omega, 4.0 * (2.0 * omega - 1.0),
          static_cast<double>(errors) / static_cast<double>(keys), tests, keys};
}

inline double completeness_threshold(double omega, double gamma, double n,
                                     double k = 3.0) {
  if (!(omega > 0.75 && omega <= 1.0)) throw DomainError("omega outside (3/4, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma outside (0, 1)");
  if (!(n >= 1.0)) throw DomainError("n must be at least 1");
  if (!(k >= 0.0)) throw DomainError("k must be non-negative");
  const double q = gamma * (1.0 - omega);
  const double q_th = q + k * std::sqrt(q * (1.0 - q) / n);
  if (q_th >= gamma) throw InfeasibleError("threshold allows no winning rounds");
  return 1.0 - q_th / gamma;
}

}  // namespace diqkd

#endif  // DIQKD_MODEL_HPP_
