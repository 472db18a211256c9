// Copyright 2026 The actpoison Authors.
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

namespace actpoison {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of substream `index` of `seed`. Distinct (seed, index) pairs give
// unrelated streams; the map is a pure function so derivations replay.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

// Uniform double in [0, 1) from exactly one engine call.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Bernoulli(p) consuming exactly one engine call.
inline bool coin(Rng& rng, double p) { return uniform01(rng) < p; }

// Independent streams used by one trial.
struct TrialStreams {
  Rng context;
  Rng noise;
  Rng agent;
  Rng attacker;

  explicit TrialStreams(std::uint64_t trial_seed)
      : context(derive_seed(trial_seed, 1)),
        noise(derive_seed(trial_seed, 2)),
        agent(derive_seed(trial_seed, 3)),
        attacker(derive_seed(trial_seed, 4)) {}
};

}  // namespace actpoison
