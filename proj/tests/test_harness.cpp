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

#include <cmath>
#include <memory>
#include <numeric>

#include <doctest.h>

#include "actpoison/errors.hpp"
#include "actpoison/harness.hpp"

using namespace actpoison;

namespace {

ExperimentConfig small_config(AttackerKind attacker, std::uint64_t T = 2000, std::size_t trials = 4) {
  ExperimentConfig cfg;
  cfg.attacker = attacker;
  cfg.environment.probes = 2000;
  cfg.run.T = T;
  cfg.run.trials = trials;
  cfg.run.checkpoints = {T / 2, T};
  return cfg;
}

// Replay environment on two fixed contexts with noiseless rewards.
Environment replay_env() {
  auto pool = std::make_shared<Matrix>(2, 2);
  *pool << 1.0, 0.2,
           1.0, -0.2;
  Matrix th(3, 2);
  th << 1.0, 0.5,
        1.0, -0.5,
        1.0, 0.0;
  return Environment(th, 2, ContextSampler::replay(pool), NoiseModel{0.0});
}

// Picks arms uniformly at random so every arm gets attacked.
class SpyAgent final : public Agent {
 public:
  using Agent::Agent;
  std::size_t select(const Vector&, Rng& rng) override { return static_cast<std::size_t>(rng() % num_arms()); }
};

ModelParams replay_params(std::uint64_t T) {
  ModelParams p;
  p.d = 2;
  p.K = 3;
  p.T = T;
  return p;
}

}  // namespace

TEST_CASE("no attacker means no cost") {
  auto env = make_synthetic(SyntheticSpec{});
  auto p = ModelParams::paper_defaults();
  p.T = 3000;
  for (auto kind : {AgentKind::kLinUcb, AgentKind::kLinTs, AgentKind::kEpsGreedy}) {
    AgentSpec spec;
    spec.kind = kind;
    auto r = run_trial(env, spec, AttackerKind::kNone, p, 9);
    CHECK(r.attack_cost == 0);
    CHECK(!r.epsilon_min.has_value());
  }
}

TEST_CASE("round accounting is consistent") {
  Matrix th(3, 1);
  th << 1.0, 0.6, 0.2;
  Environment env(th, 1, ContextSampler::synthetic(1), NoiseModel{0.0});
  ModelParams p;
  p.d = 1;
  p.K = 3;
  p.L = 1.0;
  p.S = 1.0;
  p.T = 1000;
  p.alpha = 0.1;
  TrialOptions opts;
  opts.record_rounds = true;
  opts.checkpoints = {10, 500, 1000};
  auto r = run_trial(env, AgentSpec{}, AttackerKind::kWhiteBox, p, 4, opts);
  REQUIRE(r.records.size() == 1000);
  std::uint64_t attacked = 0, target = 0;
  for (const auto& rec : r.records) {
    attacked += rec.attacked;
    target += rec.agent_arm == 1;
    CHECK(rec.attacked == (rec.agent_arm != rec.post_action));
    if (rec.agent_arm == 1) CHECK(rec.post_action == 1);
  }
  CHECK(r.attack_cost == attacked);
  CHECK(r.target_pulls == target);
  CHECK(std::accumulate(r.pulls.begin(), r.pulls.end(), std::uint64_t{0}) == 1000);
  CHECK(r.pulls[1] == target);
  REQUIRE(r.checkpoints.size() == 3);
  CHECK(r.checkpoints.back().attack_cost == r.attack_cost);
  CHECK(r.checkpoints[0].attack_cost <= r.checkpoints[1].attack_cost);
  CHECK(r.checkpoints[1].target_pulls <= r.checkpoints[2].target_pulls);
}

TEST_CASE("same seed replays bit for bit") {
  auto env = make_synthetic(SyntheticSpec{});
  auto p = ModelParams::paper_defaults();
  p.T = 2000;
  TrialOptions opts;
  opts.record_rounds = true;
  for (auto atk : {AttackerKind::kWhiteBox, AttackerKind::kBlackBox}) {
    AgentSpec spec;
    spec.kind = AgentKind::kLinTs;
    auto a = run_trial(env, spec, atk, p, 77, opts);
    auto b = run_trial(env, spec, atk, p, 77, opts);
    CHECK(a == b);
    auto c = run_trial(env, spec, atk, p, 78, opts);
    CHECK(!(a.records == c.records));
  }
}

TEST_CASE("the agent learns the reward of the arm actually played") {
  auto env = replay_env();
  auto p = replay_params(500);
  p.alpha = 0.1;
  SpyAgent agent(p);
  BlackBoxAttacker attacker(p, env.target());
  TrialStreams streams(5);
  TrialOptions opts;
  opts.record_rounds = true;
  auto r = run_trial(env, agent, attacker, p, streams, opts);
  const Matrix& pool = *env.sampler().pool();
  int attacked = 0;
  for (const auto& rec : r.records) {
    REQUIRE(rec.context_index >= 0);
    Vector x = pool.row(rec.context_index).transpose();
    CHECK(rec.reward == env.mean_reward(x, rec.post_action));
    attacked += rec.attacked;
  }
  CHECK(attacked > 0);
  // The agent's own statistics are indexed by I_t but fed with r(I_t^0).
  for (std::size_t i = 0; i < p.K; ++i) {
    Vector b = Vector::Zero(2);
    std::uint64_t n = 0;
    for (const auto& rec : r.records) {
      if (rec.agent_arm != i) continue;
      b += rec.reward * pool.row(rec.context_index).transpose();
      ++n;
    }
    CHECK(agent.pulls(i) == n);
    CHECK((agent.arm_state(i).response() - b).norm() <= 1e-9);
  }
}

TEST_CASE("cumulative regret is the sum of per-round regret") {
  auto env = make_synthetic(SyntheticSpec{});
  auto p = ModelParams::paper_defaults();
  p.T = 5000;
  TrialOptions opts;
  opts.record_rounds = true;
  auto r = run_trial(env, AgentSpec{}, AttackerKind::kBlackBox, p, 3, opts);
  double sum = 0.0;
  for (const auto& rec : r.records) {
    CHECK(rec.regret >= 0.0);
    sum += rec.regret;
  }
  CHECK(r.final_regret == doctest::Approx(sum).epsilon(1e-9));
}

TEST_CASE("trial results do not depend on scheduling") {
  auto cfg = small_config(AttackerKind::kBlackBox);
  auto one = run_experiment(cfg, 1);
  auto many = run_experiment(cfg, 3);
  REQUIRE(one.trials.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(one.trials[k] == many.trials[k]);
    CHECK(one.trials[k].seed == trial_seed(cfg.run.seed, k));
  }
}

TEST_CASE("single trial summary") {
  auto cfg = small_config(AttackerKind::kWhiteBox, 1000, 1);
  auto rep = run_experiment(cfg, 1);
  CHECK(rep.attack_cost.mean == double(rep.trials[0].attack_cost));
  CHECK(rep.attack_cost.stddev == 0.0);
  CHECK(rep.curve.size() == 2);
  CHECK(rep.alpha >= cfg.alpha.floor);
}

TEST_CASE("summary statistics") {
  auto s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("cost growth summary") {
  auto g = cost_growth_summary({{1000, 10.0}, {10000, 20.0}, {100000, 30.0}});
  REQUIRE(g.ratios.size() == 2);
  CHECK(*g.ratios[0] == doctest::Approx(2.0));
  CHECK(*g.ratios[1] == doctest::Approx(1.5));
  auto z = cost_growth_summary({{10, 0.0}, {100, 5.0}});
  CHECK(!z.ratios[0].has_value());
  CHECK_THROWS_AS(cost_growth_summary({{10, 1.0}}), ConfigError);
}

TEST_CASE("probe alpha respects the floor") {
  auto cfg = small_config(AttackerKind::kWhiteBox);
  auto prep = prepare_environment(cfg);
  CHECK(prep.alpha == doctest::Approx(std::max(cfg.alpha.shrink * prep.alpha_probe, cfg.alpha.floor)));
  CHECK(prep.alpha_floored == (cfg.alpha.shrink * prep.alpha_probe < cfg.alpha.floor));
  cfg.alpha.source = AlphaConfig::Source::kFixed;
  cfg.alpha.value = 0.3;
  CHECK(prepare_environment(cfg).alpha == 0.3);
}
