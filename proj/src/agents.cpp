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

#include "actpoison/agents.hpp"

#include <algorithm>

#include "actpoison/errors.hpp"

namespace actpoison {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kLinUcb: return "linucb";
    case AgentKind::kLinTs: return "lints";
    case AgentKind::kEpsGreedy: return "egreedy";
  }
  return "?";
}

AgentKind parse_agent_kind(std::string_view text) {
  if (text == "linucb") return AgentKind::kLinUcb;
  if (text == "lints") return AgentKind::kLinTs;
  if (text == "egreedy") return AgentKind::kEpsGreedy;
  throw ConfigError("unknown agent kind '" + std::string(text) + "'");
}

Agent::Agent(const ModelParams& params) : params_(params) {
  params_.validate();
  arms_.assign(params_.K, RidgeState(params_.d, params_.lambda));
  widths_.assign(params_.K, omega(0.0, params_));
}

void Agent::observe(const Vector& x, std::size_t arm, double reward) {
  if (arm >= arms_.size()) throw ConfigError("agent observed an out-of-range arm");
  arms_[arm].update(x, reward);
  widths_[arm] = omega(static_cast<double>(arms_[arm].count()), params_);
  ++rounds_;
}

std::size_t Agent::greedy_arm(const Vector& x) const {
  std::size_t best = 0;
  double best_value = arms_[0].estimate(x);
  for (std::size_t i = 1; i < arms_.size(); ++i) {
    const double v = arms_[i].estimate(x);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

double LinUcbAgent::ucb(const Vector& x, std::size_t i) const {
  return arms_.at(i).estimate(x) + widths_.at(i) * arms_.at(i).mahalanobis(x);
}

std::size_t LinUcbAgent::select(const Vector& x, Rng& /*rng*/) {
  std::size_t best = 0;
  double best_value = ucb(x, 0);
  for (std::size_t i = 1; i < arms_.size(); ++i) {
    const double v = ucb(x, i);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

LinTsAgent::LinTsAgent(const ModelParams& params, std::optional<double> posterior_scale)
    : Agent(params), scale_(posterior_scale) {
  if (scale_ && !(*scale_ >= 0.0)) throw ConfigError("LinTS posterior scale must be >= 0");
}

std::size_t LinTsAgent::select(const Vector& x, Rng& rng) {
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    const double v = scale_ ? *scale_ : widths_[i];
    double sample = arms_[i].estimate(x);
    if (v > 0.0) sample += v * arms_[i].mahalanobis(x) * gauss_(rng);
    if (i == 0 || sample > best_value) {
      best = i;
      best_value = sample;
    }
  }
  return best;
}

EpsGreedyAgent::EpsGreedyAgent(const ModelParams& params, double explore_c,
                               std::optional<double> explore_fixed)
    : Agent(params), explore_c_(explore_c), explore_fixed_(explore_fixed) {
  if (!(explore_c_ >= 0.0)) throw ConfigError("epsilon-greedy explore_c must be >= 0");
  if (explore_fixed_ && !(*explore_fixed_ >= 0.0 && *explore_fixed_ <= 1.0)) {
    throw ConfigError("epsilon-greedy fixed exploration must lie in [0, 1]");
  }
}

double EpsGreedyAgent::explore_probability(std::uint64_t t) const {
  if (explore_fixed_) return *explore_fixed_;
  const double scheduled = explore_c_ * static_cast<double>(arms_.size()) /
                           static_cast<double>(std::max<std::uint64_t>(t, 1));
  return std::min(1.0, scheduled);
}

std::size_t EpsGreedyAgent::select(const Vector& x, Rng& rng) {
  const double p = explore_probability(rounds_ + 1);
  if (coin(rng, p)) {
    const auto k = static_cast<double>(arms_.size());
    return std::min(arms_.size() - 1, static_cast<std::size_t>(uniform01(rng) * k));
  }
  return greedy_arm(x);
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const ModelParams& params) {
  switch (spec.kind) {
    case AgentKind::kLinUcb: return std::make_unique<LinUcbAgent>(params);
    case AgentKind::kLinTs: return std::make_unique<LinTsAgent>(params, spec.posterior_scale);
    case AgentKind::kEpsGreedy:
      return std::make_unique<EpsGreedyAgent>(params, spec.explore_c, spec.explore_fixed);
  }
  throw ConfigError("unknown agent kind");
}

}  // namespace actpoison
