// Copyright 2026 The advtrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADVTRAIN_HASH_H_
#define ADVTRAIN_HASH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace advtrain {

// 64-bit FNV-1a. Used for content fingerprints in checkpoints and run
// manifests; not a cryptographic hash.
std::uint64_t Fnv1a64(std::string_view bytes);
std::string Fnv1a64Hex(std::string_view bytes);
std::string HashFileHex(const std::filesystem::path& path);

// SplitMix64 finalizer; mixes a base seed with stream identifiers so that
// per-epoch and per-purpose random streams are decorrelated.
std::uint64_t MixSeed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace advtrain

#endif  // ADVTRAIN_HASH_H_
