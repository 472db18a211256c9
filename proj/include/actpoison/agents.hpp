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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "actpoison/params.hpp"
#include "actpoison/ridge.hpp"
#include "actpoison/rng.hpp"

namespace actpoison {

enum class AgentKind { kLinUcb, kLinTs, kEpsGreedy };

std::string_view to_string(AgentKind kind);
AgentKind parse_agent_kind(std::string_view text);

// Knobs for the victim algorithms.
struct AgentSpec {
  AgentKind kind = AgentKind::kLinUcb;
  // epsilon-Greedy: explore with probability min(1, explore_c * K / t), or
  // with the constant `explore_fixed` when set.
  double explore_c = 1.0;
  std::optional<double> explore_fixed;
  // LinTS: posterior standard-deviation multiplier; omega(N_i) when unset.
  std::optional<double> posterior_scale;

  bool operator==(const AgentSpec&) const = default;
};

// Common state of the victims: one ridge accumulator per arm, fed only with
// the (context, own arm, reward) triples the agent observed.
class Agent {
 public:
  Agent(const ModelParams& params);
  virtual ~Agent() = default;

  virtual std::size_t select(const Vector& x, Rng& rng) = 0;

  // Credits `reward` to `arm`, the agent's own choice. Throws ConfigError on
  // an out-of-range arm.
  void observe(const Vector& x, std::size_t arm, double reward);

  const ModelParams& params() const noexcept { return params_; }
  std::size_t num_arms() const noexcept { return arms_.size(); }
  const RidgeState& arm_state(std::size_t i) const { return arms_.at(i); }
  std::uint64_t pulls(std::size_t i) const { return arms_.at(i).count(); }
  std::uint64_t rounds() const noexcept { return rounds_; }
  // omega(N_i) at the current pull count.
  double width(std::size_t i) const { return widths_.at(i); }

 protected:
  std::size_t greedy_arm(const Vector& x) const;

  ModelParams params_;
  std::vector<RidgeState> arms_;
  std::vector<double> widths_;
  std::uint64_t rounds_ = 0;
};

// argmax_i <x, theta_i> + omega(N_i) ||x||_{V_i^{-1}}, lowest index on ties.
class LinUcbAgent final : public Agent {
 public:
  using Agent::Agent;
  std::size_t select(const Vector& x, Rng& rng) override;
  double ucb(const Vector& x, std::size_t i) const;
};

// Gaussian Thompson sampling. Only <x, theta_tilde_i> is needed, and under
// theta_tilde_i ~ N(theta_hat_i, v^2 V_i^{-1}) that projection is a scalar
// normal with mean <x, theta_hat_i> and deviation v ||x||_{V_i^{-1}}.
class LinTsAgent final : public Agent {
 public:
  LinTsAgent(const ModelParams& params, std::optional<double> posterior_scale);
  std::size_t select(const Vector& x, Rng& rng) override;

 private:
  std::optional<double> scale_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

class EpsGreedyAgent final : public Agent {
 public:
  EpsGreedyAgent(const ModelParams& params, double explore_c, std::optional<double> explore_fixed);
  std::size_t select(const Vector& x, Rng& rng) override;
  // Exploration probability used at round t (1-based).
  double explore_probability(std::uint64_t t) const;

 private:
  double explore_c_;
  std::optional<double> explore_fixed_;
};

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const ModelParams& params);

}  // namespace actpoison
