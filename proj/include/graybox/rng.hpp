// Copyright 2026 The Graybox Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace graybox {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from (master seed, purpose label, index).
/// The label is hashed with 64-bit FNV-1a and the three words are mixed through
/// std::seed_seq, so results do not depend on thread scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::string_view purpose, std::uint64_t index) {
  return Rng(derive_seed(master, purpose, index));
}

/// 64-bit FNV-1a, also used for dataset fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace graybox
