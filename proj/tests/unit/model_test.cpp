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
#include <filesystem>
#include <fstream>

#include "diqkd/model.hpp"

namespace diqkd {
namespace {

constexpr double kGamma = 13.0 / 256.0;

TEST(DeviceModel, ParametricTablesNormalizedWithFairMarginals) {
  for (double S : {2.05, 2.64, kTsirelsonS}) {
    const auto m = DeviceModel::parametric(S, 0.018);
    for (const auto& sp : kSettingPairs) {
      double sum = 0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          EXPECT_GE(m.joint_prob(a, b, sp.x, sp.y), 0.0);
          sum += m.joint_prob(a, b, sp.x, sp.y);
        }
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
      if (sp.y != 2) {
        EXPECT_NEAR(m.joint_prob(0, 0, sp.x, sp.y) + m.joint_prob(0, 1, sp.x, sp.y), 0.5, 1e-12);
      }
    }
  }
}

TEST(DeviceModel, ParametricEntries) {
  const auto m = DeviceModel::parametric(2.64, 0.018);
  EXPECT_NEAR(m.joint_prob(0, 0, 0, 0), 0.415, 1e-12);
  EXPECT_NEAR(m.joint_prob(0, 1, 0, 2), 0.009, 1e-12);
  EXPECT_NEAR(m.joint_prob(0, 0, 0, 2), 0.491, 1e-12);
}

TEST(DeviceModel, ExpectedWinningProbability) {
  for (double S : {2.2, 2.64, 2.8}) {
    EXPECT_NEAR(DeviceModel::parametric(S, 0.02).expected_winning_probability(), (4 + S) / 8,
                1e-12);
  }
}

TEST(DeviceModel, RejectsOutOfDomain) {
  EXPECT_THROW(DeviceModel::parametric(2.0, 0.01), DomainError);
  EXPECT_THROW(DeviceModel::parametric(2.9, 0.01), DomainError);
  EXPECT_THROW(DeviceModel::parametric(2.5, 0.5), DomainError);
  EXPECT_THROW(setting_index(1, 2), DomainError);
}

TEST(DeviceModel, EmpiricalRenormalizesOrRejects) {
  std::array<JointTable, 5> t{};
  for (auto& tab : t) tab = {{{0.25, 0.25}, {0.25, 0.25 + 5e-7}}};
  const auto m = DeviceModel::empirical(t);
  double sum = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) sum += m.joint_prob(a, b, 0, 0);
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  t[2][1][1] = 0.26;
  EXPECT_THROW(DeviceModel::empirical(t), DomainError);
}

TEST(DeviceModel, LoadsTextTables) {
  const auto path = std::filesystem::temp_directory_path() / "diqkd_model_test.txt";
  {
    std::ofstream f(path);
    f << "# x y p00 p01 p10 p11\n"
         "0 0 0.415 0.085 0.085 0.415\n0 1 0.415 0.085 0.085 0.415\n"
         "1 0 0.415 0.085 0.085 0.415\n1 1 0.085 0.415 0.415 0.085\n"
         "0 2 0.491 0.009 0.009 0.491\n";
  }
  const auto m = DeviceModel::load_empirical(path.string());
  EXPECT_NEAR(m.expected_winning_probability(), 0.83, 1e-12);
  const auto inv = DeviceModel::load_empirical(path.string(), true);
  EXPECT_NEAR(inv.joint_prob(1, 0, 0, 0), 0.415, 1e-12);
  {
    std::ofstream f(path);
    f << "0 0 0.25 0.25 0.25 0.25\n";
  }
  EXPECT_THROW(DeviceModel::load_empirical(path.string()), FormatError);
  std::filesystem::remove(path);
}

TEST(InputPolicy, ExactProbabilities) {
  const InputPolicy p(Rational(13, 256));
  EXPECT_EQ(p.bob_prob(0), Rational(13, 512));
  EXPECT_EQ(p.bob_prob(0) + p.bob_prob(1) + p.bob_prob(2), Rational(1, 1));
  EXPECT_EQ(InputPolicy::alice_prob(0) + InputPolicy::alice_prob(1), Rational(1, 1));
}

TEST(SampleRound, GammaOneAlwaysTests) {
  const auto m = DeviceModel::parametric(2.64, 0.018);
  const InputPolicy p(Rational(1, 1));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto r = sample_round(m, p, rng, i);
    ASSERT_EQ(r.t, 1);
    ASSERT_NE(r.y, 2);
    ASSERT_NE(r.u, Score::kNone);
  }
}

TEST(SampleRound, Deterministic) {
  const auto m = DeviceModel::parametric(2.64, 0.018);
  const InputPolicy p(Rational(13, 256));
  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_round(m, p, a, i), sample_round(m, p, b, i));
}

TEST(SampleRound, StatisticsConcentrate) {
  const auto m = DeviceModel::parametric(2.64, 0.018);
  const InputPolicy p(Rational(13, 256));
  Rng rng(2024);
  const std::size_t n = 1000000;
  std::vector<RoundData> rounds;
  rounds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rounds.push_back(sample_round(m, p, rng, i));
    const auto& r = rounds.back();
    ASSERT_EQ(r.t == 1, r.y != 2);
    ASSERT_EQ(r.u == Score::kNone, r.t == 0);
  }
  const auto st = chsh_statistics(rounds);
  const double nt = static_cast<double>(st.test_rounds), nk = static_cast<double>(st.key_rounds);
  EXPECT_NEAR(nt / n, kGamma, 3 * std::sqrt(kGamma * (1 - kGamma) / n));
  // S = 8 omega - 4, so its sd is 8 sd(omega).
  EXPECT_NEAR(st.S, 2.64, 3 * 8 * std::sqrt(0.83 * 0.17 / nt));
  EXPECT_NEAR(st.q_hat, 0.018, 3 * std::sqrt(0.018 * 0.982 / nk));
}

TEST(ChshStatistics, Extremes) {
  std::vector<RoundData> rounds;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      RoundData r;
      r.x = x, r.y = y, r.t = 1, r.a = 0, r.b = x & y;
      rounds.push_back(r);
    }
  }
  RoundData key;
  key.y = 2;
  rounds.push_back(key);
  auto st = chsh_statistics(rounds);
  EXPECT_DOUBLE_EQ(st.omega, 1.0);
  EXPECT_DOUBLE_EQ(st.S, 4.0);
  rounds[0].b = 1;
  st = chsh_statistics(rounds);
  EXPECT_DOUBLE_EQ(st.omega, 0.75);
  EXPECT_DOUBLE_EQ(st.S, 2.0);
  rounds.pop_back();
  EXPECT_THROW(chsh_statistics(rounds), InfeasibleError);
}

TEST(CompletenessThreshold, FrozenValues) {
  EXPECT_NEAR(completeness_threshold(0.83, kGamma, 1.5e6, 3), 0.8255376291227472, 1e-13);
  EXPECT_NEAR(completeness_threshold(0.83, kGamma, 1e5, 3), 0.812717311907799, 1e-13);
  EXPECT_DOUBLE_EQ(completeness_threshold(0.83, kGamma, 1e5, 0), 0.83);
}

TEST(CompletenessThreshold, Monotone) {
  double prev = 1;
  for (double k : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    const double v = completeness_threshold(0.83, kGamma, 1e6, k);
    EXPECT_LT(v, prev);
    prev = v;
  }
  prev = 0;
  for (double n : {1e6, 1e8, 1e10}) {
    const double v = completeness_threshold(0.83, kGamma, n, 3);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 0.83);
    prev = v;
  }
  EXPECT_THROW(completeness_threshold(0.83, kGamma, 10, 3), InfeasibleError);
  EXPECT_THROW(completeness_threshold(0.7, kGamma, 10, 3), DomainError);
}

}  // namespace
}  // namespace diqkd
