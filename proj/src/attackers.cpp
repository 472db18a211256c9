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

#include "actpoison/attackers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "actpoison/errors.hpp"

namespace actpoison {

std::string_view to_string(AttackerKind kind) {
  switch (kind) {
    case AttackerKind::kNone: return "none";
    case AttackerKind::kWhiteBox: return "whitebox";
    case AttackerKind::kBlackBox: return "blackbox";
  }
  return "?";
}

AttackerKind parse_attacker_kind(std::string_view text) {
  if (text == "none") return AttackerKind::kNone;
  if (text == "whitebox") return AttackerKind::kWhiteBox;
  if (text == "blackbox") return AttackerKind::kBlackBox;
  throw ConfigError("unknown attacker kind '" + std::string(text) + "'");
}

AttackDecision Attacker::unattacked(std::size_t agent_arm) const {
  AttackDecision d;
  d.agent_arm = agent_arm;
  d.post_action = agent_arm;
  d.epsilon = 1.0;
  d.attacked = false;
  d.dag_arm = target_;
  return d;
}

AttackDecision NoAttacker::decide(const Vector&, std::size_t agent_arm, std::uint64_t, Rng&) {
  return unattacked(agent_arm);
}

WhiteBoxAttacker::WhiteBoxAttacker(const Environment& env, double alpha) : env_(&env), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("white-box alpha must lie in (0, 1/2)");
  target_ = env.target();
}

double WhiteBoxAttacker::raw_epsilon(const Vector& x) const {
  const double target_mean = env_->mean_reward(x, target_);
  const double worst = env_->worst_arm(x).value;
  const double gap = target_mean - worst;
  if (!(gap > 0.0)) {
    std::ostringstream os;
    os << "target mean " << target_mean << " equals the minimum mean; no mixing probability exists";
    throw DegenerateDenominator(os.str());
  }
  return ((1.0 - alpha_) * target_mean - worst) / gap;
}

AttackDecision WhiteBoxAttacker::decide(const Vector& x, std::size_t agent_arm, std::uint64_t,
                                        Rng& rng) {
  if (agent_arm == target_) return unattacked(agent_arm);
  double eps = raw_epsilon(x);
  if (eps <= 0.5) ++diag_.margin_shortfall;
  if (eps < 0.0) {
    ++diag_.epsilon_clamped;
    eps = 0.0;
  }
  AttackDecision d;
  d.agent_arm = agent_arm;
  d.epsilon = eps;
  d.dag_arm = env_->worst_arm(x).arm;
  d.post_action = coin(rng, eps) ? target_ : d.dag_arm;
  d.attacked = d.post_action != agent_arm;
  return d;
}

BlackBoxAttacker::BlackBoxAttacker(const ModelParams& params, std::size_t target) : params_(params) {
  params_.validate();
  if (target >= params_.K) throw ConfigError("target arm index out of range");
  target_ = target;
  arms_.assign(params_.K, RidgeState(params_.d, params_.lambda));
  widths_.resize(params_.K);
  for (std::size_t i = 0; i < params_.K; ++i) widths_[i] = beta_attacker(0.0, i == target_, params_);
}

double BlackBoxAttacker::lcb(const Vector& x, std::size_t i) const {
  return arms_.at(i).estimate(x) - widths_.at(i) * arms_.at(i).mahalanobis(x);
}

double BlackBoxAttacker::clipped_epsilon(double target_estimate, double dag_estimate, double alpha) {
  const double gap = target_estimate - dag_estimate;
  if (gap == 0.0) return 1.0 - alpha;
  const double raw = ((1.0 - alpha) * target_estimate - dag_estimate) / gap;
  return std::clamp(raw, 0.5, 1.0 - alpha);
}

AttackDecision BlackBoxAttacker::decide(const Vector& x, std::size_t agent_arm, std::uint64_t,
                                        Rng& rng) {
  if (agent_arm == target_) return unattacked(agent_arm);
  std::size_t dag = params_.K;
  double dag_lcb = 0.0;
  for (std::size_t i = 0; i < params_.K; ++i) {
    if (i == target_) continue;
    const double v = lcb(x, i);
    if (dag == params_.K || v < dag_lcb) {
      dag = i;
      dag_lcb = v;
    }
  }
  const double target_estimate = arms_[target_].estimate(x);
  const double dag_estimate = arms_[dag].estimate(x);
  if (target_estimate == dag_estimate) ++diag_.degenerate_epsilon;
  AttackDecision d;
  d.agent_arm = agent_arm;
  d.epsilon = clipped_epsilon(target_estimate, dag_estimate, params_.alpha);
  d.dag_arm = dag;
  d.post_action = coin(rng, d.epsilon) ? target_ : dag;
  d.attacked = d.post_action != agent_arm;
  return d;
}

void BlackBoxAttacker::observe(const Vector& x, const AttackDecision& d, double reward) {
  const double eps = d.epsilon;
  if (!(eps > 0.0 && eps <= 1.0)) throw NumericError("black-box weight needs epsilon in (0, 1]");
  auto& target = arms_[target_];
  target.update(x, d.post_action == target_ ? reward / eps : 0.0);
  widths_[target_] = beta_attacker(static_cast<double>(target.count()), true, params_);
  if (d.dag_arm == target_) return;
  if (!(eps < 1.0)) throw NumericError("black-box weight needs epsilon < 1 on attacked rounds");
  auto& dag = arms_.at(d.dag_arm);
  dag.update(x, d.post_action == d.dag_arm ? reward / (1.0 - eps) : 0.0);
  widths_[d.dag_arm] = beta_attacker(static_cast<double>(dag.count()), false, params_);
}

std::unique_ptr<Attacker> make_attacker(AttackerKind kind, const Environment& env,
                                        const ModelParams& params) {
  switch (kind) {
    case AttackerKind::kNone: return std::make_unique<NoAttacker>(env.target());
    case AttackerKind::kWhiteBox: return std::make_unique<WhiteBoxAttacker>(env, params.alpha);
    case AttackerKind::kBlackBox: return std::make_unique<BlackBoxAttacker>(params, env.target());
  }
  throw ConfigError("unknown attacker kind");
}

}  // namespace actpoison
