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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "actpoison/data_prep.hpp"

using namespace actpoison;
namespace fs = std::filesystem;

namespace {

const fs::path kCli = ACTPOISON_CLI;

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("actpoison_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with `args`; stdout and stderr land in dir/out.txt, dir/err.txt.
int cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "ACTPOISON_THREADS=2 '" + kCli.string() + "' " + args + " > '" +
                          (dir / "out.txt").string() + "' 2> '" + (dir / "err.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kRatings =
    "user,item,rating\n"
    "a,x,1\na,y,2\na,z,2\n"
    "b,x,3\nb,y,1\n"
    "c,x,2\nc,y,5\nc,z,4\n";

std::string small_run(const std::string& agent, const std::string& attacker, const std::string& label,
                      const std::string& output) {
  return "environment: {label: " + label + ", probes: 500}\n"
         "agent: {kind: " + agent + "}\n"
         "attacker: {kind: " + attacker + "}\n"
         "run: {T: 300, trials: 10, seed: 5, output: " + output + "}\n";
}

}  // namespace

TEST_CASE("error classes map to exit codes") {
  auto dir = scratch_dir("errors");
  CHECK(cli(dir, "") == 2);
  CHECK(cli(dir, "frobnicate") == 2);
  CHECK(cli(dir, "run /nonexistent.yaml") == 2);
  write(dir / "bad.yaml", "run: {T: 0}\n");
  CHECK(cli(dir, "run '" + (dir / "bad.yaml").string() + "'") == 2);
  auto err = nlohmann::json::parse(slurp(dir / "err.txt"));
  CHECK(err["error"] == "config");

  write(dir / "broken.csv", "user,item,rating\na,x,oops\n");
  CHECK(cli(dir, "prep '" + (dir / "broken.csv").string() + "' --out '" + (dir / "f.bin").string() + "'") == 3);
  CHECK(nlohmann::json::parse(slurp(dir / "err.txt"))["error"] == "data");

  write(dir / "r.csv", kRatings);
  CHECK(cli(dir, "prep '" + (dir / "r.csv").string() + "' --out '" + (dir / "f.bin").string() +
                     "' --lo -1e308 --hi 1e308") == 4);
  CHECK(nlohmann::json::parse(slurp(dir / "err.txt"))["error"] == "numeric");
  CHECK(!fs::exists(dir / "f.bin"));
}

TEST_CASE("run writes reproducible artifacts") {
  auto dir = scratch_dir("run");
  write(dir / "cfg.yaml", small_run("linucb", "blackbox", "synthetic", "out1"));
  REQUIRE(cli(dir, "run '" + (dir / "cfg.yaml").string() + "'") == 0);
  CHECK(slurp(dir / "out.txt").find("linucb | blackbox | synthetic") != std::string::npos);
  const std::string first = slurp(dir / "out1" / "summary.csv");
  std::istringstream lines(first);
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  CHECK(line == "seed,target_pulls,attack_cost,final_regret");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 10);
  CHECK(fs::exists(dir / "out1" / "report.json"));
  CHECK(fs::exists(dir / "out1" / "cost_curve.csv"));

  REQUIRE(cli(dir, "run '" + (dir / "cfg.yaml").string() + "' --output '" + (dir / "out2").string() +
                       "' --threads 1") == 0);
  CHECK(slurp(dir / "out2" / "summary.csv") == first);
  // Reports match apart from the echoed output directory.
  auto r1 = nlohmann::json::parse(slurp(dir / "out1" / "report.json"));
  auto r2 = nlohmann::json::parse(slurp(dir / "out2" / "report.json"));
  r1.erase("config");
  r2.erase("config");
  CHECK(r1 == r2);
}

TEST_CASE("table combines reports") {
  auto dir = scratch_dir("table");
  write(dir / "a.yaml", small_run("linucb", "none", "synthetic", "res/a"));
  write(dir / "b.yaml", small_run("egreedy", "whitebox", "synthetic", "res/b"));
  write(dir / "c.yaml", small_run("linucb", "none", "other", "res/c"));
  REQUIRE(cli(dir, "run '" + (dir / "a.yaml").string() + "'") == 0);

  REQUIRE(cli(dir, "table '" + (dir / "res").string() + "'") == 0);
  std::istringstream one(slurp(dir / "out.txt"));
  std::string header, row, extra;
  std::getline(one, header);
  std::getline(one, row);
  CHECK(header == "agent,attacker,synthetic");
  CHECK(row.rfind("linucb,none,", 0) == 0);
  CHECK(!std::getline(one, extra));

  REQUIRE(cli(dir, "run '" + (dir / "b.yaml").string() + "'") == 0);
  REQUIRE(cli(dir, "run '" + (dir / "c.yaml").string() + "'") == 0);
  REQUIRE(cli(dir, "table '" + (dir / "res").string() + "' --out '" + (dir / "t.csv").string() + "'") == 0);
  std::istringstream many(slurp(dir / "t.csv"));
  std::getline(many, header);
  CHECK(header == "agent,attacker,synthetic,other");
  std::getline(many, row);
  CHECK(row.rfind("egreedy,whitebox,", 0) == 0);
  CHECK(row.back() == ',');  // no "other" result for this pair
  std::getline(many, row);
  CHECK(row.rfind("linucb,none,", 0) == 0);
  CHECK(row.back() != ',');
}

TEST_CASE("prep writes a feature file with its settings") {
  auto dir = scratch_dir("prep");
  write(dir / "r.csv", kRatings);
  REQUIRE(cli(dir, "prep '" + (dir / "r.csv").string() + "' --out '" + (dir / "f.bin").string() +
                       "' --d 2 --reg 0.5 --iters 15 --seed 3") == 0);
  auto f = load_features(dir / "f.bin");
  CHECK(f.meta["d"] == 2);
  CHECK(f.meta["reg"] == 0.5);
  CHECK(f.meta["iters"] == 15);
  CHECK(f.items.rows() == 3);
  CHECK(f.users.rows() == 3);
  CHECK(slurp(dir / "out.txt").find("alpha") != std::string::npos);
}

TEST_CASE("prep refuses a target that is a worst arm") {
  auto dir = scratch_dir("prep_bad");
  write(dir / "r.csv", kRatings);
  CHECK(cli(dir, "prep '" + (dir / "r.csv").string() + "' --out '" + (dir / "f.bin").string() +
                     "' --d 2 --target 0") == 3);
  auto err = nlohmann::json::parse(slurp(dir / "err.txt"));
  CHECK(std::string(err["message"]).find("context") != std::string::npos);
  CHECK(!fs::exists(dir / "f.bin"));
}
