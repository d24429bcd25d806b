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

#ifndef DIQKD_RATIONAL_HPP_
#define DIQKD_RATIONAL_HPP_

#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "diqkd/errors.hpp"

namespace diqkd {

// Exact probability num/den in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw DomainError("zero denominator");
    const auto g = std::gcd(num, den);
    num_ = g ? num / g : 0;
    den_ = g ? den / g : 1;
  }

  // Accepts "a/b" or a plain integer.
  static Rational parse(std::string_view s) {
    auto parse_u = [&](std::string_view part) {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || p != part.data() + part.size() || part.empty()) {
        throw FormatError("bad rational '" + std::string(s) + "'");
      }
      return v;
    };
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_u(s), 1);
    return Rational(parse_u(s.substr(0, slash)), parse_u(s.substr(slash + 1)));
  }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend Rational operator+(const Rational& a, const Rational& b) {
    const auto l = std::lcm(a.den_, b.den_);
    return Rational(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace diqkd

#endif  // DIQKD_RATIONAL_HPP_
