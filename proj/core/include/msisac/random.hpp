// SPDX-License-Identifier: Apache-2.0
//
// msisac: multistatic OFDM sensing simulator for cellular layouts
// Copyright (C) 2026 The msisac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace msisac {

using Rng = std::mt19937_64;

/// Independent stream keyed by a base seed and a path of tags, e.g.
/// (seed, {kTrial, t}) or (seed, {kNoise, rx_index}). The same key always
/// yields the same stream; streams never depend on the order they are drawn.
Rng derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// Folds a key into a single 64-bit seed, for passing sub-seeds through APIs.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

namespace stream_tag {
inline constexpr std::uint64_t kTxSymbols = 0x7853;
inline constexpr std::uint64_t kNoise = 0x6e6f;
inline constexpr std::uint64_t kPathPhase = 0x7068;
inline constexpr std::uint64_t kTrial = 0x7472;
inline constexpr std::uint64_t kScene = 0x7363;
}  // namespace stream_tag

}  // namespace msisac
