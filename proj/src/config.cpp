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

#include "actpoison/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "actpoison/errors.hpp"

namespace actpoison {
namespace {

void check_keys(const YAML::Node& node, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("section '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const std::string& key, const std::string& section, T& out) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + section + "." + key + "'");
  }
}

std::string scalar_text(const YAML::Node& node, const std::string& key) {
  return node[key] ? node[key].as<std::string>() : std::string();
}

}  // namespace

std::vector<std::uint64_t> default_checkpoints(std::uint64_t T) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 10; t < T; t *= 10) out.push_back(t);
  out.push_back(T);
  return out;
}

void ExperimentConfig::validate() const {
  const auto& env = environment;
  if (env.d < 1) throw ConfigError("environment.d must be >= 1");
  if (env.K < 2) throw ConfigError("environment.K must be >= 2");
  if (env.kind == EnvironmentConfig::Kind::kFeatures && env.features.empty()) {
    throw ConfigError("environment.features is required for kind 'features'");
  }
  if (!(env.noise_variance >= 0.0)) throw ConfigError("environment.noise_variance must be >= 0");
  if (env.kind == EnvironmentConfig::Kind::kSynthetic && env.probes < 1) {
    throw ConfigError("environment.probes must be >= 1");
  }
  const std::string& tgt = env.target;
  const bool symbolic = tgt == "centroid" || tgt == "auto";
  if (!symbolic) {
    if (tgt.empty() || !std::all_of(tgt.begin(), tgt.end(), ::isdigit)) {
      throw ConfigError("environment.target must be 'centroid', 'auto' or an arm index");
    }
    if (std::stoull(tgt) >= env.K) throw ConfigError("environment.target out of range");
  }
  if (tgt == "centroid" && env.kind != EnvironmentConfig::Kind::kSynthetic) {
    throw ConfigError("target 'centroid' applies to synthetic environments only");
  }
  if (tgt == "auto" && env.kind != EnvironmentConfig::Kind::kFeatures) {
    throw ConfigError("target 'auto' applies to feature environments only");
  }
  if (alpha.source == AlphaConfig::Source::kFixed && !(alpha.value > 0 && alpha.value < 0.5)) {
    throw ConfigError("alpha.value must lie in (0, 1/2)");
  }
  if (!(alpha.shrink > 0 && alpha.shrink <= 1)) throw ConfigError("alpha.shrink must lie in (0, 1]");
  if (!(alpha.floor > 0 && alpha.floor < 0.5)) throw ConfigError("alpha.floor must lie in (0, 1/2)");
  if (run.T < 1) throw ConfigError("run.T must be >= 1");
  if (run.trials < 1) throw ConfigError("run.trials must be >= 1");
  for (auto c : run.checkpoints) {
    if (c < 1 || c > run.T) throw ConfigError("run.checkpoints must lie in [1, T]");
  }
  ModelParams p;
  p.d = env.d;
  p.K = env.K;
  p.L = model.L;
  p.S = model.S;
  p.R = model.R;
  p.lambda = model.lambda;
  p.delta = model.delta;
  p.alpha = 0.25;
  p.T = run.T;
  p.validate();
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections");
  check_keys(root, "<root>", {"environment", "model", "alpha", "agent", "attacker", "run"});

  ExperimentConfig cfg;
  if (auto n = root["environment"]) {
    check_keys(n, "environment",
               {"kind", "label", "d", "K", "seed", "target", "features", "noise_variance", "probes"});
    const auto kind = scalar_text(n, "kind");
    if (kind == "features") {
      cfg.environment.kind = EnvironmentConfig::Kind::kFeatures;
      cfg.environment.target = "auto";
      cfg.environment.label = "features";
    } else if (!kind.empty() && kind != "synthetic") {
      throw ConfigError("environment.kind must be 'synthetic' or 'features'");
    }
    auto& e = cfg.environment;
    read(n, "label", "environment", e.label);
    read(n, "d", "environment", e.d);
    read(n, "K", "environment", e.K);
    read(n, "seed", "environment", e.seed);
    read(n, "target", "environment", e.target);
    read(n, "features", "environment", e.features);
    read(n, "noise_variance", "environment", e.noise_variance);
    read(n, "probes", "environment", e.probes);
  }
  if (auto n = root["model"]) {
    check_keys(n, "model", {"L", "S", "R", "lambda", "delta"});
    auto& m = cfg.model;
    read(n, "L", "model", m.L);
    read(n, "S", "model", m.S);
    read(n, "R", "model", m.R);
    read(n, "lambda", "model", m.lambda);
    read(n, "delta", "model", m.delta);
  }
  if (auto n = root["alpha"]) {
    check_keys(n, "alpha", {"source", "value", "shrink", "floor"});
    const auto source = scalar_text(n, "source");
    if (source == "fixed") {
      cfg.alpha.source = AlphaConfig::Source::kFixed;
    } else if (!source.empty() && source != "probe") {
      throw ConfigError("alpha.source must be 'probe' or 'fixed'");
    }
    read(n, "value", "alpha", cfg.alpha.value);
    read(n, "shrink", "alpha", cfg.alpha.shrink);
    read(n, "floor", "alpha", cfg.alpha.floor);
  }
  if (auto n = root["agent"]) {
    check_keys(n, "agent", {"kind", "explore_c", "explore_fixed", "posterior_scale"});
    if (n["kind"]) cfg.agent.kind = parse_agent_kind(scalar_text(n, "kind"));
    read(n, "explore_c", "agent", cfg.agent.explore_c);
    if (n["explore_fixed"]) {
      double v = 0;
      read(n, "explore_fixed", "agent", v);
      cfg.agent.explore_fixed = v;
    }
    if (n["posterior_scale"] && scalar_text(n, "posterior_scale") != "omega") {
      double v = 0;
      read(n, "posterior_scale", "agent", v);
      cfg.agent.posterior_scale = v;
    }
  }
  if (auto n = root["attacker"]) {
    check_keys(n, "attacker", {"kind"});
    if (n["kind"]) cfg.attacker = parse_attacker_kind(scalar_text(n, "kind"));
  }
  if (auto n = root["run"]) {
    check_keys(n, "run", {"T", "trials", "seed", "checkpoints", "output", "record_rounds",
                          "track_coverage"});
    auto& r = cfg.run;
    read(n, "T", "run", r.T);
    read(n, "trials", "run", r.trials);
    read(n, "seed", "run", r.seed);
    read(n, "checkpoints", "run", r.checkpoints);
    read(n, "output", "run", r.output);
    read(n, "record_rounds", "run", r.record_rounds);
    read(n, "track_coverage", "run", r.track_coverage);
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  const auto& e = cfg.environment;
  out << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value
      << (e.kind == EnvironmentConfig::Kind::kSynthetic ? "synthetic" : "features");
  out << YAML::Key << "label" << YAML::Value << e.label;
  out << YAML::Key << "d" << YAML::Value << e.d;
  out << YAML::Key << "K" << YAML::Value << e.K;
  out << YAML::Key << "seed" << YAML::Value << e.seed;
  out << YAML::Key << "target" << YAML::Value << e.target;
  if (!e.features.empty()) out << YAML::Key << "features" << YAML::Value << e.features;
  out << YAML::Key << "noise_variance" << YAML::Value << e.noise_variance;
  out << YAML::Key << "probes" << YAML::Value << e.probes;
  out << YAML::EndMap;

  const auto& m = cfg.model;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "L" << YAML::Value << m.L;
  out << YAML::Key << "S" << YAML::Value << m.S;
  out << YAML::Key << "R" << YAML::Value << m.R;
  out << YAML::Key << "lambda" << YAML::Value << m.lambda;
  out << YAML::Key << "delta" << YAML::Value << m.delta;
  out << YAML::EndMap;

  const auto& a = cfg.alpha;
  out << YAML::Key << "alpha" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "source" << YAML::Value
      << (a.source == AlphaConfig::Source::kProbe ? "probe" : "fixed");
  out << YAML::Key << "value" << YAML::Value << a.value;
  out << YAML::Key << "shrink" << YAML::Value << a.shrink;
  out << YAML::Key << "floor" << YAML::Value << a.floor;
  out << YAML::EndMap;

  const auto& g = cfg.agent;
  out << YAML::Key << "agent" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(g.kind));
  out << YAML::Key << "explore_c" << YAML::Value << g.explore_c;
  if (g.explore_fixed) out << YAML::Key << "explore_fixed" << YAML::Value << *g.explore_fixed;
  out << YAML::Key << "posterior_scale" << YAML::Value;
  if (g.posterior_scale) {
    out << *g.posterior_scale;
  } else {
    out << "omega";
  }
  out << YAML::EndMap;

  out << YAML::Key << "attacker" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(cfg.attacker));
  out << YAML::EndMap;

  const auto& r = cfg.run;
  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "T" << YAML::Value << r.T;
  out << YAML::Key << "trials" << YAML::Value << r.trials;
  out << YAML::Key << "seed" << YAML::Value << r.seed;
  out << YAML::Key << "checkpoints" << YAML::Value << YAML::Flow << r.checkpoints;
  out << YAML::Key << "output" << YAML::Value << r.output;
  out << YAML::Key << "record_rounds" << YAML::Value << r.record_rounds;
  out << YAML::Key << "track_coverage" << YAML::Value << r.track_coverage;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config(buf.str());
  const auto base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).lexically_normal().string();
  };
  resolve(cfg.environment.features);
  resolve(cfg.run.output);
  return cfg;
}

}  // namespace actpoison
