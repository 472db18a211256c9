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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actpoison/ridge.hpp"
#include "actpoison/rng.hpp"

namespace actpoison {

// Zero-mean Gaussian reward noise.
struct NoiseModel {
  double variance = 0.01;
  double draw(Rng& rng) const;
};

// Emits contexts either from the synthetic recipe (first entry 1, the rest
// uniform on (-1/sqrt(d-1), 1/sqrt(d-1))) or by uniform replay of a pool.
class ContextSampler {
 public:
  enum class Mode { kSynthetic, kReplay };

  static ContextSampler synthetic(std::size_t d);
  // Rows of `pool` are the contexts. Throws DataError on an empty pool.
  static ContextSampler replay(std::shared_ptr<const Matrix> pool);

  Mode mode() const noexcept { return mode_; }
  std::size_t dim() const noexcept { return d_; }
  const Matrix* pool() const noexcept { return pool_.get(); }

  // Writes the next context into `out` (resized as needed). Returns the pool
  // row used, or -1 in synthetic mode.
  std::ptrdiff_t sample_into(Vector& out, Rng& rng) const;
  Vector sample(Rng& rng) const;

 private:
  Mode mode_ = Mode::kSynthetic;
  std::size_t d_ = 0;
  std::shared_ptr<const Matrix> pool_;
};

struct ArmValue {
  std::size_t arm;
  double value;
};

// Summary of a successful probe validation.
struct ValidationStats {
  std::size_t n_probes = 0;
  double min_mean = 0.0;       // smallest mean reward over probes and arms
  double max_ratio = 0.0;      // max over probes of min_i mean_i / mean_target
  std::size_t target_best = 0; // probes where the target is the optimal arm
};

// Ground-truth linear bandit: K coefficient rows, a context sampler, a noise
// model and a designated target arm. Immutable after construction.
class Environment {
 public:
  // `thetas` is K x d. Throws ConfigError on shape problems.
  Environment(Matrix thetas, std::size_t target, ContextSampler sampler, NoiseModel noise);

  std::size_t num_arms() const noexcept { return static_cast<std::size_t>(thetas_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(thetas_.cols()); }
  std::size_t target() const noexcept { return target_; }
  const Matrix& thetas() const noexcept { return thetas_; }
  const ContextSampler& sampler() const noexcept { return sampler_; }
  const NoiseModel& noise() const noexcept { return noise_; }

  double mean_reward(const Vector& x, std::size_t arm) const;
  double draw_reward(const Vector& x, std::size_t arm, Rng& rng) const;
  // Mean of every arm at x, written into `out`.
  void all_means(const Vector& x, Vector& out) const;
  // Lowest-index arm minimizing <x, theta_i> over all arms.
  ArmValue worst_arm(const Vector& x) const;
  ArmValue best_arm(const Vector& x) const;

  // Checks positivity of every mean and that the target is never a worst arm
  // on the probe rows. Throws DataError / AssumptionViolated naming the
  // offending probe row.
  ValidationStats validate(const Matrix& probes) const;

 private:
  Matrix thetas_;
  std::size_t target_;
  ContextSampler sampler_;
  NoiseModel noise_;
};

// alpha = (1 - max_probe min_i<x,theta_i>/<x,theta_target>) / 2, floored at
// alpha_min. Throws AssumptionViolated when the ratio reaches 1 on a probe.
double compute_alpha(const Environment& env, const Matrix& probes, double alpha_min = 1e-9);

// n contexts drawn from `sampler` with a dedicated stream, one per row.
Matrix sample_probes(const ContextSampler& sampler, std::size_t n, std::uint64_t seed);

// Synthetic arm set. Non-target rows follow the context recipe (first entry
// 1, rest uniform). With kCentroid the target is the last arm and its free
// entries are the mean of the other arms' free entries, which places it
// strictly inside their convex hull: never the worst arm, never the best.
struct SyntheticSpec {
  enum class Target { kCentroid, kIndex };
  std::size_t d = 6;
  std::size_t K = 10;
  std::uint64_t seed = 0;
  Target target_mode = Target::kCentroid;
  std::size_t target_index = 9;
  double noise_variance = 0.01;
};

Matrix synthetic_thetas(const SyntheticSpec& spec);
Environment make_synthetic(const SyntheticSpec& spec);

// Picks the arm that is never a worst arm over the rows of `contexts` and is
// optimal on the fewest rows. Throws AssumptionViolated, naming the first
// violating row of the least-violating arm, when no arm qualifies.
std::size_t select_target(const Matrix& thetas, const Matrix& contexts);

}  // namespace actpoison
