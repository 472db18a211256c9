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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actpoison/agents.hpp"
#include "actpoison/attackers.hpp"
#include "actpoison/config.hpp"
#include "actpoison/environment.hpp"
#include "actpoison/params.hpp"
#include "actpoison/rng.hpp"

namespace actpoison {

struct RoundRecord {
  std::uint64_t t = 0;
  std::ptrdiff_t context_index = -1;  // pool row in replay mode
  std::size_t agent_arm = 0;          // I_t
  std::size_t post_action = 0;        // I_t^0, the arm that generated the reward
  double epsilon = 1.0;
  double reward = 0.0;
  bool attacked = false;
  double regret = 0.0;                // best mean minus mean of I_t

  bool operator==(const RoundRecord&) const = default;
};

struct Checkpoint {
  std::uint64_t t = 0;
  std::uint64_t attack_cost = 0;
  std::uint64_t target_pulls = 0;
  double regret = 0.0;

  bool operator==(const Checkpoint&) const = default;
};

// Per-arm count of rounds whose attacker confidence interval contained the
// true mean, over rounds where N_i^dag >= the coverage threshold.
struct Coverage {
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  double rate() const { return total ? static_cast<double>(covered) / static_cast<double>(total) : 1.0; }

  bool operator==(const Coverage&) const = default;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  std::uint64_t target_pulls = 0;
  std::uint64_t attack_cost = 0;
  double final_regret = 0.0;
  std::vector<std::uint64_t> pulls;
  std::vector<Checkpoint> checkpoints;
  AttackDiagnostics diagnostics;
  // Range of epsilon over rounds where the agent chose a non-target arm
  // (unset when there were none or no attacker ran).
  std::optional<double> epsilon_min;
  std::optional<double> epsilon_max;
  std::vector<Coverage> coverage;    // black-box with coverage tracking only
  std::vector<RoundRecord> records;  // when record_rounds is set

  bool operator==(const TrialResult& o) const;
};

struct TrialOptions {
  std::vector<std::uint64_t> checkpoints;
  bool record_rounds = false;
  bool track_coverage = false;
  std::uint64_t coverage_min_count = 50;
};

// One trial of `params.T` rounds. Each round: draw x_t, the agent picks I_t,
// the attacker maps it to I_t^0, the environment rewards I_t^0, the agent
// learns (x_t, I_t, r_t) and the attacker learns its own view. Deterministic
// in (streams, inputs).
TrialResult run_trial(const Environment& env, Agent& agent, Attacker& attacker,
                      const ModelParams& params, TrialStreams& streams, const TrialOptions& opts);

TrialResult run_trial(const Environment& env, const AgentSpec& agent, AttackerKind attacker,
                      const ModelParams& params, std::uint64_t seed, const TrialOptions& opts = {});

// Environment plus the attack margin actually used.
struct PreparedEnvironment {
  Environment env;
  ValidationStats validation;
  double alpha_probe = 0.0;  // unshrunk, unfloored probe estimate
  double alpha = 0.0;        // value fed to the attackers
  bool alpha_floored = false;
};

PreparedEnvironment prepare_environment(const ExperimentConfig& cfg);
ModelParams model_params(const ExperimentConfig& cfg, double alpha);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one trial
};
Summary summarize(const std::vector<double>& values);

struct CurvePoint {
  std::uint64_t t = 0;
  Summary cost;
  Summary target_pulls;
  Summary regret;
};

struct ExperimentReport {
  ExperimentConfig config;
  ValidationStats validation;
  double alpha_probe = 0.0;
  double alpha = 0.0;
  bool alpha_floored = false;
  std::vector<TrialResult> trials;
  Summary target_pulls;
  Summary attack_cost;
  Summary final_regret;
  std::vector<CurvePoint> curve;
};

// Seed of trial k under `master`.
std::uint64_t trial_seed(std::uint64_t master, std::size_t k);

// Runs cfg.run.trials trials on `threads` workers (0: ACTPOISON_THREADS or
// the hardware concurrency). A failing trial rethrows with its seed attached.
ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);
ExperimentReport aggregate(const ExperimentConfig& cfg, const PreparedEnvironment& prepared,
                           std::vector<TrialResult> trials);

struct GrowthSummary {
  std::vector<std::pair<std::uint64_t, double>> points;
  // ratios[k] = cost(points[k+1]) / cost(points[k]); unset when cost(points[k]) == 0.
  std::vector<std::optional<double>> ratios;
};

// Throws ConfigError for fewer than two checkpoints.
GrowthSummary cost_growth_summary(const std::vector<std::pair<std::uint64_t, double>>& curve);

}  // namespace actpoison
