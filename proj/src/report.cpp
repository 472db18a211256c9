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

#include "actpoison/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "actpoison/errors.hpp"
#include "actpoison/harness.hpp"

namespace actpoison {

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move results into " + path.string());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json to_json(const TrialResult& t) {
  nlohmann::json j;
  j["seed"] = t.seed;
  j["rounds"] = t.rounds;
  j["target_pulls"] = t.target_pulls;
  j["attack_cost"] = t.attack_cost;
  j["final_regret"] = t.final_regret;
  j["pulls"] = t.pulls;
  auto& cps = j["checkpoints"] = nlohmann::json::array();
  for (const auto& c : t.checkpoints) {
    cps.push_back({{"t", c.t}, {"attack_cost", c.attack_cost}, {"target_pulls", c.target_pulls},
                   {"regret", c.regret}});
  }
  j["diagnostics"] = {{"degenerate_epsilon", t.diagnostics.degenerate_epsilon},
                      {"margin_shortfall", t.diagnostics.margin_shortfall},
                      {"epsilon_clamped", t.diagnostics.epsilon_clamped}};
  j["epsilon_min"] = t.epsilon_min ? nlohmann::json(*t.epsilon_min) : nlohmann::json(nullptr);
  j["epsilon_max"] = t.epsilon_max ? nlohmann::json(*t.epsilon_max) : nlohmann::json(nullptr);
  if (!t.coverage.empty()) {
    auto& cov = j["coverage"] = nlohmann::json::array();
    for (const auto& c : t.coverage) cov.push_back({{"covered", c.covered}, {"total", c.total}});
  }
  return j;
}

nlohmann::json to_json(const ExperimentReport& r) {
  auto summary = [](const Summary& s) { return nlohmann::json{{"mean", s.mean}, {"stddev", s.stddev}}; };
  nlohmann::json j;
  const auto& cfg = r.config;
  j["environment"] = {{"kind", cfg.environment.kind == EnvironmentConfig::Kind::kSynthetic ? "synthetic" : "features"},
                      {"label", cfg.environment.label},
                      {"d", cfg.environment.d},
                      {"K", cfg.environment.K},
                      {"seed", cfg.environment.seed},
                      {"target", cfg.environment.target}};
  j["agent"] = std::string(to_string(cfg.agent.kind));
  j["attacker"] = std::string(to_string(cfg.attacker));
  j["T"] = cfg.run.T;
  j["n_trials"] = cfg.run.trials;
  j["master_seed"] = cfg.run.seed;
  j["config"] = serialize_config(cfg);
  j["alpha"] = {{"value", r.alpha},
                {"probe_estimate", r.alpha_probe},
                {"floored", r.alpha_floored},
                {"source", cfg.alpha.source == AlphaConfig::Source::kFixed ? "fixed" : "probe"}};
  j["validation"] = {{"n_probes", r.validation.n_probes},
                     {"min_mean", r.validation.min_mean},
                     {"max_ratio", r.validation.max_ratio},
                     {"target_best", r.validation.target_best}};
  j["target_pulls"] = summary(r.target_pulls);
  j["attack_cost"] = summary(r.attack_cost);
  j["final_regret"] = summary(r.final_regret);
  auto& curve = j["cost_curve"] = nlohmann::json::array();
  for (const auto& p : r.curve) {
    curve.push_back({{"t", p.t},
                     {"cost", summary(p.cost)},
                     {"target_pulls", summary(p.target_pulls)},
                     {"regret", summary(p.regret)}});
  }
  auto& trials = j["trials"] = nlohmann::json::array();
  for (const auto& t : r.trials) trials.push_back(to_json(t));
  return j;
}

std::string summary_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "seed,target_pulls,attack_cost,final_regret\n";
  for (const auto& t : r.trials) {
    os << t.seed << ',' << t.target_pulls << ',' << t.attack_cost << ',' << format_double(t.final_regret) << '\n';
  }
  return os.str();
}

std::string cost_curve_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "t,mean_cost,std_cost\n";
  for (const auto& p : r.curve) {
    os << p.t << ',' << format_double(p.cost.mean) << ',' << format_double(p.cost.stddev) << '\n';
  }
  return os.str();
}

void write_artifacts(const ExperimentReport& r, const std::filesystem::path& dir) {
  write_file_atomic(dir / "report.json", to_json(r).dump(2) + "\n");
  write_file_atomic(dir / "summary.csv", summary_csv(r));
  write_file_atomic(dir / "cost_curve.csv", cost_curve_csv(r));
}

std::string combine_reports(const std::vector<nlohmann::json>& reports) {
  static const char* kAgents[] = {"egreedy", "linucb", "lints"};
  static const char* kAttackers[] = {"none", "whitebox", "blackbox"};
  std::vector<std::string> columns;
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>> cells;
  std::optional<std::uint64_t> horizon;
  for (const auto& r : reports) {
    try {
      const auto T = r.at("T").get<std::uint64_t>();
      if (horizon && *horizon != T) {
        throw DataError("reports disagree on T (" + std::to_string(*horizon) + " vs " + std::to_string(T) + ")");
      }
      horizon = T;
      const auto label = r.at("environment").at("label").get<std::string>();
      if (std::find(columns.begin(), columns.end(), label) == columns.end()) columns.push_back(label);
      cells[{r.at("agent").get<std::string>(), r.at("attacker").get<std::string>()}][label] =
          r.at("target_pulls").at("mean").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed report: ") + e.what());
    }
  }
  std::ostringstream os;
  os << "agent,attacker";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  for (const char* agent : kAgents) {
    for (const char* attacker : kAttackers) {
      const auto it = cells.find({agent, attacker});
      if (it == cells.end()) continue;
      os << agent << ',' << attacker;
      for (const auto& c : columns) {
        os << ',';
        const auto cell = it->second.find(c);
        if (cell != it->second.end()) os << format_double(cell->second);
      }
      os << '\n';
    }
  }
  return os.str();
}

std::vector<nlohmann::json> find_reports(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "report.json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw DataError("no report.json found under " + dir.string());
  std::vector<nlohmann::json> out;
  for (const auto& p : paths) {
    std::ifstream in(p);
    try {
      out.push_back(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception&) {
      throw DataError("cannot parse " + p.string());
    }
  }
  return out;
}

}  // namespace actpoison
