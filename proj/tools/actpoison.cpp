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

// Command-line driver: run experiments, combine reports, prepare features.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "actpoison/config.hpp"
#include "actpoison/data_prep.hpp"
#include "actpoison/errors.hpp"
#include "actpoison/harness.hpp"
#include "actpoison/report.hpp"

namespace {

using namespace actpoison;

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kData: return "data";
    case ErrorKind::kNumeric: return "numeric";
  }
  return "unknown";
}

int report_error(ErrorKind kind, const std::string& message) {
  nlohmann::json j{{"error", kind_name(kind)}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return static_cast<int>(kind);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& output, unsigned threads) {
  ExperimentConfig cfg = load_config(config_path);
  if (!output.empty()) cfg.run.output = output;
  const ExperimentReport rep = run_experiment(cfg, threads);
  write_artifacts(rep, cfg.run.output);
  const double T = static_cast<double>(cfg.run.T);
  std::printf("%s | %s | %s: mean target pulls %.1f / %llu (%.2f%%), mean attack cost %.1f, alpha %.4g%s\n",
              std::string(to_string(cfg.agent.kind)).c_str(), std::string(to_string(cfg.attacker)).c_str(),
              cfg.environment.label.c_str(), rep.target_pulls.mean,
              static_cast<unsigned long long>(cfg.run.T), 100.0 * rep.target_pulls.mean / T,
              rep.attack_cost.mean, rep.alpha, rep.alpha_floored ? " (floor)" : "");
  return 0;
}

int cmd_table(const std::string& dir, const std::string& out) {
  const std::string table = combine_reports(find_reports(dir));
  if (out.empty()) {
    std::cout << table;
  } else {
    write_file_atomic(out, table);
  }
  return 0;
}

struct PrepOptions {
  std::string ratings;
  std::string out;
  std::size_t d = 6;
  double reg = 0.1;
  std::size_t iters = 20;
  std::uint64_t seed = 0;
  std::string items;
  std::optional<std::size_t> users;
  std::size_t min_ratings = 1;
  double lo = 0.0;
  double hi = 1.0;
  std::string augment = "auto";
  std::optional<std::size_t> target;
  double L = 1.4142135623730951;
  double S = 1.4142135623730951;
};

int cmd_prep(const PrepOptions& o) {
  RatingsTable table = ingest_ratings(o.ratings);
  std::printf("ingested %zu ratings (%zu users, %zu items)\n", table.entries.size(), table.n_users(),
              table.n_items());
  table = subset_ratings(table, split_list(o.items), o.users, o.min_ratings);
  RatingScale scale;
  table = normalize_ratings(table, o.lo, o.hi, &scale);
  const Factorization fac = factorize(table, o.d, o.reg, o.iters, o.seed);

  FeatureBuildOptions opts;
  opts.L = o.L;
  opts.S = o.S;
  opts.target = o.target;
  if (o.augment == "on") {
    opts.augment = FeatureBuildOptions::Augment::kOn;
  } else if (o.augment == "off") {
    opts.augment = FeatureBuildOptions::Augment::kOff;
  } else if (o.augment != "auto") {
    throw ConfigError("--augment must be auto, on or off");
  }
  nlohmann::json meta;
  meta["source"] = o.ratings;
  meta["d"] = o.d;
  meta["reg"] = o.reg;
  meta["iters"] = o.iters;
  meta["seed"] = o.seed;
  meta["n_users"] = table.n_users();
  meta["item_ids"] = table.item_ids;
  meta["rating_min"] = scale.source_min;
  meta["rating_max"] = scale.source_max;
  meta["norm_lo"] = scale.lo;
  meta["norm_hi"] = scale.hi;
  meta["objective"] = fac.objective.back();
  const FeatureFile f = build_feature_file(fac, opts, meta);
  export_features(f, o.out);
  std::printf("wrote %s: d=%zu users=%lld items=%lld\n", o.out.c_str(), f.dim(),
              static_cast<long long>(f.users.rows()), static_cast<long long>(f.items.rows()));
  std::printf("validation: min mean reward %.6g, alpha %.6g, target arm %zu (best for %zu users)\n",
              f.meta["min_mean"].get<double>(), f.meta["alpha"].get<double>(),
              f.meta["target"].get<std::size_t>(), f.meta["target_best_users"].get<std::size_t>());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Action-poisoning attacks on linear contextual bandits"};
  app.require_subcommand(1);

  std::string config_path, run_output;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("config", config_path, "Experiment config (YAML)")->required();
  run->add_option("--output", run_output, "Override run.output");
  run->add_option("--threads", threads, "Worker threads (default: ACTPOISON_THREADS or all cores)");

  std::string table_dir, table_out;
  auto* table = app.add_subcommand("table", "Combine report.json files into one table");
  table->add_option("dir", table_dir, "Directory searched recursively for report.json")->required();
  table->add_option("--out", table_out, "Write the CSV here instead of stdout");

  PrepOptions prep_opts;
  auto* prep = app.add_subcommand("prep", "Factorize a ratings file into a feature file");
  prep->add_option("ratings", prep_opts.ratings, "CSV with header user,item,rating")->required();
  prep->add_option("--out", prep_opts.out, "Feature file to write")->required();
  prep->add_option("--d", prep_opts.d, "Factorization rank");
  prep->add_option("--reg", prep_opts.reg, "ALS regularization");
  prep->add_option("--iters", prep_opts.iters, "ALS sweeps");
  prep->add_option("--seed", prep_opts.seed, "Initialization seed");
  prep->add_option("--items", prep_opts.items, "Comma-separated item ids to keep");
  prep->add_option("--users", prep_opts.users, "Keep at most this many users");
  prep->add_option("--min-ratings", prep_opts.min_ratings, "Minimum ratings per kept user");
  prep->add_option("--lo", prep_opts.lo, "Normalized rating minimum");
  prep->add_option("--hi", prep_opts.hi, "Normalized rating maximum");
  prep->add_option("--augment", prep_opts.augment, "Constant-feature augmentation: auto, on, off");
  prep->add_option("--target", prep_opts.target, "Target arm index (default: automatic)");
  prep->add_option("--L", prep_opts.L, "Context norm bound");
  prep->add_option("--S", prep_opts.S, "Coefficient norm bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorKind::kConfig, e.what());
  }

  try {
    if (*run) return cmd_run(config_path, run_output, threads);
    if (*table) return cmd_table(table_dir, table_out);
    if (*prep) return cmd_prep(prep_opts);
  } catch (const Error& e) {
    return report_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorKind::kNumeric, e.what());
  }
  return 0;
}
