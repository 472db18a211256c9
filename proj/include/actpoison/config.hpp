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
#include <filesystem>
#include <string>
#include <vector>

#include "actpoison/agents.hpp"
#include "actpoison/attackers.hpp"

namespace actpoison {

struct EnvironmentConfig {
  enum class Kind { kSynthetic, kFeatures };
  Kind kind = Kind::kSynthetic;
  std::string label = "synthetic";  // column name in combined tables
  std::size_t d = 6;
  std::size_t K = 10;
  std::uint64_t seed = 2021;
  // synthetic: "centroid" or an arm index; features: "auto" or an arm index.
  std::string target = "centroid";
  std::string features;  // feature file path (features kind)
  double noise_variance = 0.01;
  std::size_t probes = 10000;  // synthetic validation sample size

  bool operator==(const EnvironmentConfig&) const = default;
};

struct ModelConfig {
  double L = 1.4142135623730951;
  double S = 1.4142135623730951;
  double R = 0.1;
  double lambda = 2.0;
  double delta = 0.1;

  bool operator==(const ModelConfig&) const = default;
};

// Attack margin. `probe`: max(shrink * probe estimate, floor). `fixed`: value.
struct AlphaConfig {
  enum class Source { kProbe, kFixed };
  Source source = Source::kProbe;
  double value = 0.2;
  double shrink = 0.9;
  double floor = 0.2;

  bool operator==(const AlphaConfig&) const = default;
};

struct RunConfig {
  std::uint64_t T = 1000000;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> checkpoints;  // empty: powers of ten up to T, plus T
  std::string output = "out";
  bool record_rounds = false;
  bool track_coverage = false;

  bool operator==(const RunConfig&) const = default;
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  ModelConfig model;
  AlphaConfig alpha;
  AgentSpec agent;
  AttackerKind attacker = AttackerKind::kNone;
  RunConfig run;

  // Throws ConfigError on any inconsistency.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// YAML text with sections environment / model / alpha / agent / attacker / run.
// Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

// Reads a config file; relative `features` and `output` paths are resolved
// against the file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<std::uint64_t> default_checkpoints(std::uint64_t T);

}  // namespace actpoison
