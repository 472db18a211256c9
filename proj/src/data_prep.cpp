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

#include "actpoison/data_prep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "actpoison/environment.hpp"
#include "actpoison/errors.hpp"
#include "actpoison/report.hpp"
#include "actpoison/rng.hpp"

namespace actpoison {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t intern(std::unordered_map<std::string, std::size_t>& ids, std::vector<std::string>& names,
                   const std::string& key) {
  auto [it, inserted] = ids.try_emplace(key, names.size());
  if (inserted) names.push_back(key);
  return it->second;
}

// Groups entry indices by user and by item.
struct Index {
  std::vector<std::vector<std::size_t>> by_user;
  std::vector<std::vector<std::size_t>> by_item;
};

Index build_index(const RatingsTable& t) {
  Index idx;
  idx.by_user.resize(t.n_users());
  idx.by_item.resize(t.n_items());
  for (std::size_t k = 0; k < t.entries.size(); ++k) {
    idx.by_user[t.entries[k].user].push_back(k);
    idx.by_item[t.entries[k].item].push_back(k);
  }
  return idx;
}

// Solves every row of `solve_for` exactly with `fixed` held constant.
void als_half_sweep(const RatingsTable& t, const std::vector<std::vector<std::size_t>>& groups,
                    bool rows_are_users, const Matrix& fixed, Matrix& solve_for, double reg) {
  const auto rank = fixed.cols();
  Matrix A(rank, rank);
  Vector rhs(rank);
  for (std::size_t r = 0; r < groups.size(); ++r) {
    const auto& group = groups[r];
    if (group.empty()) {
      solve_for.row(static_cast<Eigen::Index>(r)).setZero();
      continue;
    }
    A.setIdentity();
    A *= reg;
    rhs.setZero();
    for (auto k : group) {
      const auto& e = t.entries[k];
      const auto other = static_cast<Eigen::Index>(rows_are_users ? e.item : e.user);
      A.noalias() += fixed.row(other).transpose() * fixed.row(other);
      rhs.noalias() += e.value * fixed.row(other).transpose();
    }
    solve_for.row(static_cast<Eigen::Index>(r)) = A.ldlt().solve(rhs).transpose();
  }
}

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(const std::string& in, std::size_t& pos) {
  T value;
  std::memcpy(&value, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

constexpr char kMagic[8] = {'A', 'C', 'T', 'P', 'F', 'E', 'A', 'T'};

}  // namespace

RatingsTable parse_ratings(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split_commas(line);
    if (cols.size() != 3 || cols[0] != "user" || cols[1] != "item" || cols[2] != "rating") {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": expected header 'user,item,rating'");
    }
    have_header = true;
    break;
  }
  if (!have_header) throw DataError(source_name + ": empty ratings file");

  RatingsTable t;
  std::unordered_map<std::string, std::size_t> users;
  std::unordered_map<std::string, std::size_t> items;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split_commas(line);
    auto fail = [&](const std::string& why) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": " + why);
    };
    if (cols.size() != 3) fail("expected 3 fields, found " + std::to_string(cols.size()));
    if (cols[0].empty() || cols[1].empty()) fail("empty user or item id");
    double value = 0.0;
    const auto& txt = cols[2];
    const auto [ptr, ec] = std::from_chars(txt.data(), txt.data() + txt.size(), value);
    if (ec != std::errc() || ptr != txt.data() + txt.size()) fail("non-numeric rating '" + txt + "'");
    if (!std::isfinite(value)) fail("non-finite rating '" + txt + "'");
    const auto u = intern(users, t.user_ids, cols[0]);
    const auto i = intern(items, t.item_ids, cols[1]);
    auto [it, inserted] = seen.try_emplace({u, i}, t.entries.size());
    if (inserted) {
      t.entries.push_back({u, i, value});
    } else {
      t.entries[it->second].value = value;
    }
  }
  if (t.entries.empty()) throw DataError(source_name + ": no ratings after the header");
  return t;
}

RatingsTable ingest_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read ratings file " + path.string());
  return parse_ratings(in, path.string());
}

RatingsTable subset_ratings(const RatingsTable& t, const std::vector<std::string>& items,
                            std::optional<std::size_t> max_users, std::size_t min_ratings) {
  std::vector<std::ptrdiff_t> item_map(t.n_items(), -1);
  RatingsTable out;
  if (items.empty()) {
    for (std::size_t i = 0; i < t.n_items(); ++i) item_map[i] = static_cast<std::ptrdiff_t>(i);
    out.item_ids = t.item_ids;
  } else {
    for (const auto& name : items) {
      const auto it = std::find(t.item_ids.begin(), t.item_ids.end(), name);
      if (it == t.item_ids.end()) throw DataError("item '" + name + "' not present in ratings");
      item_map[static_cast<std::size_t>(it - t.item_ids.begin())] =
          static_cast<std::ptrdiff_t>(out.item_ids.size());
      out.item_ids.push_back(name);
    }
  }
  std::vector<std::size_t> per_user(t.n_users(), 0);
  for (const auto& e : t.entries) {
    if (item_map[e.item] >= 0) ++per_user[e.user];
  }
  std::vector<std::ptrdiff_t> user_map(t.n_users(), -1);
  for (std::size_t u = 0; u < t.n_users(); ++u) {
    if (per_user[u] < std::max<std::size_t>(min_ratings, 1)) continue;
    if (max_users && out.user_ids.size() >= *max_users) break;
    user_map[u] = static_cast<std::ptrdiff_t>(out.user_ids.size());
    out.user_ids.push_back(t.user_ids[u]);
  }
  for (const auto& e : t.entries) {
    if (item_map[e.item] < 0 || user_map[e.user] < 0) continue;
    out.entries.push_back({static_cast<std::size_t>(user_map[e.user]),
                           static_cast<std::size_t>(item_map[e.item]), e.value});
  }
  if (out.entries.empty()) throw DataError("ratings subset is empty");
  return out;
}

RatingsTable normalize_ratings(const RatingsTable& t, double lo, double hi, RatingScale* scale) {
  if (!(hi > lo)) throw ConfigError("normalization needs hi > lo");
  if (t.entries.empty()) throw DataError("cannot normalize an empty ratings table");
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& e : t.entries) {
    mn = std::min(mn, e.value);
    mx = std::max(mx, e.value);
  }
  if (!(mx > mn)) throw DataError("ratings have zero range; cannot normalize");
  RatingsTable out = t;
  for (auto& e : out.entries) {
    e.value = e.value == mx ? hi : lo + (e.value - mn) * (hi - lo) / (mx - mn);
  }
  if (scale) *scale = {mn, mx, lo, hi};
  return out;
}

double als_objective(const RatingsTable& t, const Matrix& users, const Matrix& items, double reg) {
  double loss = 0.0;
  for (const auto& e : t.entries) {
    const double r = e.value - users.row(static_cast<Eigen::Index>(e.user))
                                   .dot(items.row(static_cast<Eigen::Index>(e.item)));
    loss += r * r;
  }
  return loss + reg * (users.squaredNorm() + items.squaredNorm());
}

Factorization factorize(const RatingsTable& t, std::size_t rank, double reg, std::size_t iterations,
                        std::uint64_t seed) {
  if (rank < 1) throw ConfigError("factorization rank must be >= 1");
  if (!(reg >= 0.0)) throw ConfigError("factorization reg must be >= 0");
  if (t.entries.empty()) throw DataError("cannot factorize an empty ratings table");
  const auto r = static_cast<Eigen::Index>(rank);
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(rank));
  Rng rng(derive_seed(seed, 0x616C73ULL));
  Factorization f;
  f.users.resize(static_cast<Eigen::Index>(t.n_users()), r);
  f.items.resize(static_cast<Eigen::Index>(t.n_items()), r);
  for (Eigen::Index i = 0; i < f.users.size(); ++i) f.users.data()[i] = uniform01(rng) * init_scale;
  for (Eigen::Index i = 0; i < f.items.size(); ++i) f.items.data()[i] = uniform01(rng) * init_scale;

  const Index idx = build_index(t);
  f.objective.push_back(als_objective(t, f.users, f.items, reg));
  for (std::size_t sweep = 0; sweep < iterations; ++sweep) {
    als_half_sweep(t, idx.by_user, true, f.items, f.users, reg);
    als_half_sweep(t, idx.by_item, false, f.users, f.items, reg);
    const double obj = als_objective(t, f.users, f.items, reg);
    if (!std::isfinite(obj)) {
      throw NumericError("ALS objective became non-finite at sweep " + std::to_string(sweep + 1));
    }
    f.objective.push_back(obj);
  }
  return f;
}

std::string encode_features(const FeatureFile& f) {
  if (f.users.cols() != f.items.cols()) throw DataError("user and item feature widths differ");
  const std::string meta = f.meta.dump();
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, FeatureFile::kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.users.cols()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(f.users.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(f.items.rows()));
  put<std::uint64_t>(out, meta.size());
  out += meta;
  for (const Matrix* m : {&f.users, &f.items}) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      for (Eigen::Index j = 0; j < m->cols(); ++j) put<double>(out, (*m)(i, j));
    }
  }
  put<std::uint64_t>(out, fnv1a(out.data(), out.size()));
  return out;
}

FeatureFile decode_features(const std::string& bytes) {
  constexpr std::size_t kHeader = sizeof(kMagic) + 4 + 4 + 8 + 8 + 8;
  if (bytes.size() < kHeader) throw DataError("feature file truncated (header)");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw DataError("not a feature file (bad magic)");
  std::size_t pos = sizeof(kMagic);
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != FeatureFile::kVersion) {
    throw DataError("unsupported feature file version " + std::to_string(version));
  }
  const auto d = get<std::uint32_t>(bytes, pos);
  const auto n_users = get<std::uint64_t>(bytes, pos);
  const auto n_items = get<std::uint64_t>(bytes, pos);
  const auto meta_len = get<std::uint64_t>(bytes, pos);
  const long double cells = (static_cast<long double>(n_users) + n_items) * d;
  const long double need = static_cast<long double>(kHeader) + meta_len + cells * 8.0L + 8.0L;
  if (need > static_cast<long double>(bytes.size())) throw DataError("feature file truncated");
  if (need < static_cast<long double>(bytes.size())) throw DataError("feature file has trailing bytes");
  const std::size_t body = bytes.size() - 8;
  std::size_t tail = body;
  if (get<std::uint64_t>(bytes, tail) != fnv1a(bytes.data(), body)) {
    throw DataError("feature file checksum mismatch (corrupt)");
  }
  FeatureFile f;
  try {
    f.meta = nlohmann::json::parse(bytes.substr(pos, meta_len));
  } catch (const nlohmann::json::exception&) {
    throw DataError("feature file metadata is not valid JSON");
  }
  pos += meta_len;
  f.users.resize(static_cast<Eigen::Index>(n_users), d);
  f.items.resize(static_cast<Eigen::Index>(n_items), d);
  for (Matrix* m : {&f.users, &f.items}) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = get<double>(bytes, pos);
    }
  }
  return f;
}

void export_features(const FeatureFile& f, const std::filesystem::path& path) {
  write_file_atomic(path, encode_features(f));
}

FeatureFile load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read feature file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return decode_features(buf.str());
}

FeatureFile build_feature_file(const Factorization& fac, const FeatureBuildOptions& opts,
                               nlohmann::json meta) {
  if (fac.users.rows() == 0 || fac.items.rows() < 2) {
    throw DataError("feature file needs at least one user and two items");
  }
  const Matrix raw_means = fac.users * fac.items.transpose();
  const double raw_min = raw_means.minCoeff();
  const bool augment = opts.augment == FeatureBuildOptions::Augment::kOn ||
                       (opts.augment == FeatureBuildOptions::Augment::kAuto && !(raw_min > 0.0));
  Matrix users = fac.users;
  Matrix items = fac.items;
  double bias = 0.0;
  if (augment) {
    bias = std::max(0.0, opts.positivity_margin - raw_min);
    users.conservativeResize(Eigen::NoChange, users.cols() + 1);
    users.col(users.cols() - 1).setOnes();
    items.conservativeResize(Eigen::NoChange, items.cols() + 1);
    items.col(items.cols() - 1).setConstant(bias);
  }
  const double max_user = users.rowwise().norm().maxCoeff();
  const double max_item = items.rowwise().norm().maxCoeff();
  const double context_scale = max_user > opts.L ? opts.L / max_user : 1.0;
  const double item_scale = max_item > opts.S ? opts.S / max_item : 1.0;
  users *= context_scale;
  items *= item_scale;

  const std::size_t target = opts.target ? *opts.target : select_target(items, users);
  if (target >= static_cast<std::size_t>(items.rows())) throw ConfigError("target arm index out of range");
  auto pool = std::make_shared<const Matrix>(users);
  const Environment env(items, target, ContextSampler::replay(pool), NoiseModel{0.0});
  const ValidationStats stats = env.validate(users);
  const double alpha = compute_alpha(env, users, 1e-12);

  meta["augmented"] = augment;
  meta["bias"] = bias;
  meta["context_scale"] = context_scale;
  meta["item_scale"] = item_scale;
  meta["L"] = opts.L;
  meta["S"] = opts.S;
  meta["target"] = target;
  meta["min_mean"] = stats.min_mean;
  meta["max_ratio"] = stats.max_ratio;
  meta["alpha"] = alpha;
  meta["target_best_users"] = stats.target_best;
  FeatureFile f;
  f.users = std::move(users);
  f.items = std::move(items);
  f.meta = std::move(meta);
  return f;
}

}  // namespace actpoison
