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
#include <string>
#include <string_view>
#include <vector>

#include "actpoison/environment.hpp"
#include "actpoison/params.hpp"
#include "actpoison/ridge.hpp"
#include "actpoison/rng.hpp"

namespace actpoison {

enum class AttackerKind { kNone, kWhiteBox, kBlackBox };

std::string_view to_string(AttackerKind kind);
AttackerKind parse_attacker_kind(std::string_view text);

// Outcome of intercepting one agent action.
struct AttackDecision {
  std::size_t agent_arm = 0;    // I_t
  std::size_t post_action = 0;  // I_t^0, the arm the environment actually plays
  double epsilon = 1.0;         // probability of serving the target
  bool attacked = false;        // post_action != agent_arm
  std::size_t dag_arm = 0;      // I_t^dag; the target when the agent chose it
};

// Counters for rounds where a formula needed a fallback.
struct AttackDiagnostics {
  std::uint64_t degenerate_epsilon = 0;  // black-box: equal estimates, epsilon = 1 - alpha
  std::uint64_t margin_shortfall = 0;    // white-box: raw epsilon <= 1/2
  std::uint64_t epsilon_clamped = 0;     // white-box: raw epsilon < 0, served worst arm outright
};

class Attacker {
 public:
  virtual ~Attacker() = default;
  virtual AttackerKind kind() const = 0;
  // `t` is the 1-based round index.
  virtual AttackDecision decide(const Vector& x, std::size_t agent_arm, std::uint64_t t, Rng& rng) = 0;
  // Called once per round after the reward of post_action is revealed.
  virtual void observe(const Vector& /*x*/, const AttackDecision& /*d*/, double /*reward*/) {}
  const AttackDiagnostics& diagnostics() const noexcept { return diag_; }

 protected:
  AttackDecision unattacked(std::size_t agent_arm) const;
  std::size_t target_ = 0;
  AttackDiagnostics diag_;
};

class NoAttacker final : public Attacker {
 public:
  explicit NoAttacker(std::size_t target) { target_ = target; }
  AttackerKind kind() const override { return AttackerKind::kNone; }
  AttackDecision decide(const Vector& x, std::size_t agent_arm, std::uint64_t t, Rng& rng) override;
};

// Knows every theta. A non-target pull is replaced by the target with
// probability eps and by the worst arm otherwise, where
//   eps = ((1-alpha) m_K - m_min) / (m_K - m_min)
// makes the served mean exactly (1-alpha) m_K.
//
// A raw eps below zero means no mixture reaches (1-alpha) m_K at this context
// (the configured alpha exceeds the context's margin). It is clamped to 0 and
// counted; the served mean is then m_min, still strictly below m_K.
class WhiteBoxAttacker final : public Attacker {
 public:
  WhiteBoxAttacker(const Environment& env, double alpha);
  AttackerKind kind() const override { return AttackerKind::kWhiteBox; }
  AttackDecision decide(const Vector& x, std::size_t agent_arm, std::uint64_t t, Rng& rng) override;

  // Unclamped mixing probability at x. Throws DegenerateDenominator when the
  // target mean equals the minimum mean.
  double raw_epsilon(const Vector& x) const;
  double alpha() const noexcept { return alpha_; }

 private:
  const Environment* env_;
  double alpha_;
};

// Knows only alpha. Keeps importance-weighted ridge estimates of every arm,
// picks the non-target arm with the lowest confidence bound as I^dag and
// clips the plug-in mixing probability to [1/2, 1 - alpha].
class BlackBoxAttacker final : public Attacker {
 public:
  BlackBoxAttacker(const ModelParams& params, std::size_t target);
  AttackerKind kind() const override { return AttackerKind::kBlackBox; }
  AttackDecision decide(const Vector& x, std::size_t agent_arm, std::uint64_t t, Rng& rng) override;
  void observe(const Vector& x, const AttackDecision& d, double reward) override;

  const ModelParams& params() const noexcept { return params_; }
  const RidgeState& arm_state(std::size_t i) const { return arms_.at(i); }
  // N_i^dag: rounds whose I^dag was i (every round for the target).
  std::uint64_t dag_count(std::size_t i) const { return arms_.at(i).count(); }
  // beta^0_i at the current N_i^dag.
  double width(std::size_t i) const { return widths_.at(i); }
  double lcb(const Vector& x, std::size_t i) const;

  // clip(1/2, ((1-alpha) mk - md) / (mk - md), 1-alpha); the 1-alpha rail when
  // mk == md.
  static double clipped_epsilon(double target_estimate, double dag_estimate, double alpha);

 private:
  ModelParams params_;
  std::vector<RidgeState> arms_;
  std::vector<double> widths_;
};

std::unique_ptr<Attacker> make_attacker(AttackerKind kind, const Environment& env,
                                        const ModelParams& params);

}  // namespace actpoison
