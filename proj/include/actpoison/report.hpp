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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace actpoison {

struct ExperimentReport;
struct TrialResult;

// Writes through a sibling temporary file and renames it into place, so a
// reader never sees a partial file. Throws DataError on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// "%.17g": enough digits to replay any double.
std::string format_double(double v);

nlohmann::json to_json(const TrialResult& t);
nlohmann::json to_json(const ExperimentReport& r);

// One row per trial: seed,target_pulls,attack_cost,final_regret
std::string summary_csv(const ExperimentReport& r);
// t,mean_cost,std_cost
std::string cost_curve_csv(const ExperimentReport& r);

// Writes report.json, summary.csv and cost_curve.csv into `dir`.
void write_artifacts(const ExperimentReport& r, const std::filesystem::path& dir);

// Combines report.json files into a Table-1 shaped CSV. Rows follow the order
// egreedy/linucb/lints x none/whitebox/blackbox (only rows present are
// emitted); columns are the environment labels in first-seen order; a missing
// cell is an empty field. Throws DataError when the reports disagree on T.
std::string combine_reports(const std::vector<nlohmann::json>& reports);

// Every report.json below `dir` (recursive, sorted by path).
std::vector<nlohmann::json> find_reports(const std::filesystem::path& dir);

}  // namespace actpoison
