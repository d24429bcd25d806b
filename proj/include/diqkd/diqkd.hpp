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


#ifndef DIQKD_DIQKD_HPP_
#define DIQKD_DIQKD_HPP_

#include "diqkd/auth/hash.hpp"
#include "diqkd/auth/shared_key.hpp"
#include "diqkd/bits.hpp"
#include "diqkd/ec/bounds.hpp"
#include "diqkd/ec/bp_decoder.hpp"
#include "diqkd/ec/sc_ldpc.hpp"
#include "diqkd/errors.hpp"
#include "diqkd/keylen/entropy_bound.hpp"
#include "diqkd/keylen/key_length.hpp"
#include "diqkd/keylen/optimize.hpp"
#include "diqkd/model.hpp"
#include "diqkd/protocol/engine.hpp"
#include "diqkd/rational.hpp"
#include "diqkd/trevisan/extractor.hpp"
#include "diqkd/trevisan/upsilon.hpp"

#endif  // DIQKD_DIQKD_HPP_
