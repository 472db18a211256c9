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

#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "actpoison/config.hpp"
#include "actpoison/errors.hpp"

using namespace actpoison;
namespace fs = std::filesystem;

TEST_CASE("shipped synthetic config parses") {
  auto cfg = load_config(fs::path(ACTPOISON_SOURCE_DIR) / "configs" / "paper_synthetic.yaml");
  CHECK(cfg.environment.d == 6);
  CHECK(cfg.environment.K == 10);
  CHECK(cfg.environment.noise_variance == 0.01);
  CHECK(cfg.model.lambda == 2.0);
  CHECK(cfg.model.delta == 0.1);
  CHECK(cfg.run.T == 1000000);
  CHECK(cfg.run.trials == 10);
  CHECK(cfg.attacker == AttackerKind::kWhiteBox);
  CHECK(fs::path(cfg.run.output).is_absolute());
}

TEST_CASE("serialization round-trips") {
  ExperimentConfig cfg;
  cfg.agent.kind = AgentKind::kLinTs;
  cfg.agent.posterior_scale = 0.3;
  cfg.agent.explore_fixed = 0.05;
  cfg.attacker = AttackerKind::kBlackBox;
  cfg.alpha.source = AlphaConfig::Source::kFixed;
  cfg.alpha.value = 0.1 + 1e-15;
  cfg.run.checkpoints = {10, 100};
  cfg.run.T = 100;
  auto back = parse_config(serialize_config(cfg));
  CHECK(back == cfg);
}

TEST_CASE("bad configs are rejected") {
  CHECK_THROWS_AS(parse_config("environment: {colour: red}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("bogus: {}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("run: {T: 100, checkpoints: [1000]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha: {source: fixed, value: 0.5}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha: {source: fixed, value: 0}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: {lambda: 1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("agent: {kind: ucb1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("environment: {K: ten}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("default checkpoints") {
  CHECK(default_checkpoints(1000000) == std::vector<std::uint64_t>{10, 100, 1000, 10000, 100000, 1000000});
  CHECK(default_checkpoints(250) == std::vector<std::uint64_t>{10, 100, 250});
  CHECK(default_checkpoints(5) == std::vector<std::uint64_t>{5});
}
