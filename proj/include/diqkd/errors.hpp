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

#ifndef DIQKD_ERRORS_HPP_
#define DIQKD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace diqkd {

// Parameter outside its documented domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inputs are in range but admit no solution (e.g. an empty statistic or a
// threshold that cannot be met).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file or wire data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A code could not be built for the requested shape.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A one-time pad was requested twice.
class PadReuseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Transport failure: peer closed, timeout, or malformed frame.
class ChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diqkd

#endif  // DIQKD_ERRORS_HPP_
