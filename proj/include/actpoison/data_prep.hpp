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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "actpoison/ridge.hpp"

namespace actpoison {

struct Rating {
  std::size_t user;
  std::size_t item;
  double value;
};

// Observed ratings with dense user / item ids. `user_ids[u]` and
// `item_ids[i]` keep the original labels.
struct RatingsTable {
  std::vector<Rating> entries;
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;

  std::size_t n_users() const noexcept { return user_ids.size(); }
  std::size_t n_items() const noexcept { return item_ids.size(); }
};

// Affine map applied by normalize_ratings.
struct RatingScale {
  double source_min = 0.0;
  double source_max = 1.0;
  double lo = 0.0;
  double hi = 1.0;
};

// CSV with header `user,item,rating`. Ids are remapped densely in order of
// first appearance; a repeated (user, item) pair keeps its last rating.
// Throws DataError naming the line of a malformed row, or on an empty file.
RatingsTable ingest_ratings(const std::filesystem::path& path);
RatingsTable parse_ratings(std::istream& in, const std::string& source_name = "<stream>");

// Keeps the listed items (in the given order), then the first `max_users`
// users in id order that rated at least `min_ratings` of them.
RatingsTable subset_ratings(const RatingsTable& t, const std::vector<std::string>& items,
                            std::optional<std::size_t> max_users, std::size_t min_ratings = 1);

// Maps [observed min, observed max] affinely onto [lo, hi]. Throws DataError
// when all ratings are equal or the table is empty.
RatingsTable normalize_ratings(const RatingsTable& t, double lo, double hi,
                               RatingScale* scale = nullptr);

struct Factorization {
  Matrix users;  // n_users x rank
  Matrix items;  // n_items x rank
  std::vector<double> objective;  // after initialization, then after each sweep
};

// Regularized squared loss on observed entries:
//   sum (r_ui - <u_u, v_i>)^2 + reg (sum ||u||^2 + sum ||v||^2).
double als_objective(const RatingsTable& t, const Matrix& users, const Matrix& items, double reg);

// Alternating least squares from a uniform (0,1)/sqrt(rank) start. Each
// half-sweep solves every row's ridge problem exactly, so the objective never
// increases. Throws NumericError on a non-finite objective.
Factorization factorize(const RatingsTable& t, std::size_t rank, double reg,
                        std::size_t iterations, std::uint64_t seed);

// Contexts (user rows) and arm coefficients (item rows) for a dataset
// environment, plus free-form metadata.
struct FeatureFile {
  static constexpr std::uint32_t kVersion = 1;

  Matrix users;
  Matrix items;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t dim() const noexcept { return static_cast<std::size_t>(users.cols()); }
};

// Binary layout, little-endian:
//   "ACTPFEAT" | u32 version | u32 d | u64 n_users | u64 n_items |
//   u64 meta_len | meta (JSON, UTF-8) | users (f64, row-major) |
//   items (f64, row-major) | u64 FNV-1a of every preceding byte
void export_features(const FeatureFile& f, const std::filesystem::path& path);
FeatureFile load_features(const std::filesystem::path& path);
std::string encode_features(const FeatureFile& f);
FeatureFile decode_features(const std::string& bytes);

struct FeatureBuildOptions {
  double L = 1.4142135623730951;
  double S = 1.4142135623730951;
  enum class Augment { kAuto, kOn, kOff };
  Augment augment = Augment::kAuto;
  double positivity_margin = 0.05;  // smallest mean after the bias shift
  std::optional<std::size_t> target;  // arm index; auto-selected when unset
};

// Turns factors into a validated environment feature file:
//  1. optional augmentation: contexts get a trailing 1, items a trailing bias
//     b so the smallest user x item mean becomes positivity_margin (kAuto
//     augments only when some mean is not positive);
//  2. uniform rescaling so max ||x|| <= L and max ||theta|| <= S;
//  3. validation over every user: positive means, and a target arm that is
//     never a worst arm (AssumptionViolated otherwise, naming the user row).
// The alpha over the user pool and all scale factors are written to `meta`.
FeatureFile build_feature_file(const Factorization& fac, const FeatureBuildOptions& opts,
                               nlohmann::json meta = nlohmann::json::object());

}  // namespace actpoison
