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

#include "actpoison/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "actpoison/errors.hpp"

namespace actpoison {

double NoiseModel::draw(Rng& rng) const {
  if (variance <= 0.0) return 0.0;
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance));
  return gauss(rng);
}

ContextSampler ContextSampler::synthetic(std::size_t d) {
  if (d == 0) throw ConfigError("context dimension must be >= 1");
  ContextSampler s;
  s.mode_ = Mode::kSynthetic;
  s.d_ = d;
  return s;
}

ContextSampler ContextSampler::replay(std::shared_ptr<const Matrix> pool) {
  if (!pool || pool->rows() == 0 || pool->cols() == 0) throw DataError("context pool is empty");
  ContextSampler s;
  s.mode_ = Mode::kReplay;
  s.d_ = static_cast<std::size_t>(pool->cols());
  s.pool_ = std::move(pool);
  return s;
}

std::ptrdiff_t ContextSampler::sample_into(Vector& out, Rng& rng) const {
  out.resize(static_cast<Eigen::Index>(d_));
  if (mode_ == Mode::kReplay) {
    const auto n = static_cast<std::uint64_t>(pool_->rows());
    const auto row = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
    out = pool_->row(row).transpose();
    return row;
  }
  out[0] = 1.0;
  if (d_ > 1) {
    const double h = 1.0 / std::sqrt(static_cast<double>(d_ - 1));
    for (std::size_t j = 1; j < d_; ++j) out[static_cast<Eigen::Index>(j)] = -h + 2.0 * h * uniform01(rng);
  }
  return -1;
}

Vector ContextSampler::sample(Rng& rng) const {
  Vector x;
  sample_into(x, rng);
  return x;
}

Environment::Environment(Matrix thetas, std::size_t target, ContextSampler sampler,
                         NoiseModel noise)
    : thetas_(std::move(thetas)), target_(target), sampler_(std::move(sampler)), noise_(noise) {
  if (thetas_.rows() < 2) throw ConfigError("environment needs at least two arms");
  if (target_ >= num_arms()) throw ConfigError("target arm index out of range");
  if (sampler_.dim() != dim()) {
    std::ostringstream os;
    os << "context dimension " << sampler_.dim() << " does not match arm dimension " << dim();
    throw ConfigError(os.str());
  }
  if (!thetas_.allFinite()) throw DataError("arm coefficients are not finite");
  if (!(noise_.variance >= 0.0)) throw ConfigError("noise variance must be >= 0");
}

double Environment::mean_reward(const Vector& x, std::size_t arm) const {
  if (arm >= num_arms()) throw ConfigError("arm index out of range");
  return thetas_.row(static_cast<Eigen::Index>(arm)).dot(x);
}

double Environment::draw_reward(const Vector& x, std::size_t arm, Rng& rng) const {
  return mean_reward(x, arm) + noise_.draw(rng);
}

void Environment::all_means(const Vector& x, Vector& out) const { out.noalias() = thetas_ * x; }

ArmValue Environment::worst_arm(const Vector& x) const {
  ArmValue w{0, mean_reward(x, 0)};
  for (std::size_t i = 1; i < num_arms(); ++i) {
    const double m = mean_reward(x, i);
    if (m < w.value) w = {i, m};
  }
  return w;
}

ArmValue Environment::best_arm(const Vector& x) const {
  ArmValue b{0, mean_reward(x, 0)};
  for (std::size_t i = 1; i < num_arms(); ++i) {
    const double m = mean_reward(x, i);
    if (m > b.value) b = {i, m};
  }
  return b;
}

ValidationStats Environment::validate(const Matrix& probes) const {
  if (probes.rows() == 0) throw ConfigError("validation needs at least one probe context");
  if (static_cast<std::size_t>(probes.cols()) != dim()) throw ConfigError("probe dimension mismatch");
  ValidationStats stats;
  stats.n_probes = static_cast<std::size_t>(probes.rows());
  stats.min_mean = std::numeric_limits<double>::infinity();
  Vector means(static_cast<Eigen::Index>(num_arms()));
  for (Eigen::Index r = 0; r < probes.rows(); ++r) {
    means.noalias() = thetas_ * probes.row(r).transpose();
    Eigen::Index lo = 0;
    Eigen::Index hi = 0;
    const double mn = means.minCoeff(&lo);
    means.maxCoeff(&hi);
    if (!(mn > 0.0)) {
      std::ostringstream os;
      os << "non-positive mean reward " << mn << " for arm " << lo << " at context " << r;
      throw DataError(os.str());
    }
    const double target_mean = means[static_cast<Eigen::Index>(target_)];
    if (!(target_mean > mn)) {
      std::ostringstream os;
      os << "target arm " << target_ << " is a worst arm at context " << r;
      throw AssumptionViolated(os.str(), static_cast<std::size_t>(r));
    }
    stats.min_mean = std::min(stats.min_mean, mn);
    stats.max_ratio = std::max(stats.max_ratio, mn / target_mean);
    if (static_cast<std::size_t>(hi) == target_) ++stats.target_best;
  }
  return stats;
}

double compute_alpha(const Environment& env, const Matrix& probes, double alpha_min) {
  if (probes.rows() == 0) throw ConfigError("alpha needs at least one probe context");
  if (!(alpha_min > 0.0 && alpha_min < 0.5)) throw ConfigError("alpha floor must lie in (0, 1/2)");
  double worst_ratio = -std::numeric_limits<double>::infinity();
  Vector means(static_cast<Eigen::Index>(env.num_arms()));
  for (Eigen::Index r = 0; r < probes.rows(); ++r) {
    env.all_means(probes.row(r).transpose(), means);
    const double target_mean = means[static_cast<Eigen::Index>(env.target())];
    if (!(target_mean > 0.0)) {
      std::ostringstream os;
      os << "target mean " << target_mean << " is not positive at context " << r;
      throw AssumptionViolated(os.str(), static_cast<std::size_t>(r));
    }
    const double ratio = means.minCoeff() / target_mean;
    if (ratio >= 1.0) {
      std::ostringstream os;
      os << "target arm " << env.target() << " is a worst arm at context " << r;
      throw AssumptionViolated(os.str(), static_cast<std::size_t>(r));
    }
    worst_ratio = std::max(worst_ratio, ratio);
  }
  return std::max(0.5 * (1.0 - worst_ratio), alpha_min);
}

Matrix sample_probes(const ContextSampler& sampler, std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x70726F6265ULL));
  Matrix probes(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(sampler.dim()));
  Vector x;
  for (std::size_t r = 0; r < n; ++r) {
    sampler.sample_into(x, rng);
    probes.row(static_cast<Eigen::Index>(r)) = x.transpose();
  }
  return probes;
}

Matrix synthetic_thetas(const SyntheticSpec& spec) {
  if (spec.d < 1 || spec.K < 2) throw ConfigError("synthetic environment needs d >= 1 and K >= 2");
  const auto d = static_cast<Eigen::Index>(spec.d);
  const auto K = static_cast<Eigen::Index>(spec.K);
  Rng rng(derive_seed(spec.seed, 0x61726D73ULL));
  const ContextSampler recipe = ContextSampler::synthetic(spec.d);
  Matrix thetas(K, d);
  Vector row;
  for (Eigen::Index i = 0; i < K; ++i) {
    recipe.sample_into(row, rng);
    thetas.row(i) = row.transpose();
  }
  if (spec.target_mode == SyntheticSpec::Target::kCentroid) {
    thetas.row(K - 1) = thetas.topRows(K - 1).colwise().mean();
  }
  return thetas;
}

Environment make_synthetic(const SyntheticSpec& spec) {
  std::size_t target = spec.K - 1;
  if (spec.target_mode == SyntheticSpec::Target::kIndex) {
    if (spec.target_index >= spec.K) throw ConfigError("target arm index out of range");
    target = spec.target_index;
  }
  return Environment(synthetic_thetas(spec), target, ContextSampler::synthetic(spec.d),
                     NoiseModel{spec.noise_variance});
}

std::size_t select_target(const Matrix& thetas, const Matrix& contexts) {
  const auto K = static_cast<std::size_t>(thetas.rows());
  if (contexts.rows() == 0) throw ConfigError("target selection needs at least one context");
  std::vector<std::size_t> worst_count(K, 0);
  std::vector<std::size_t> best_count(K, 0);
  std::vector<std::ptrdiff_t> first_worst(K, -1);
  Vector means(thetas.rows());
  for (Eigen::Index r = 0; r < contexts.rows(); ++r) {
    means.noalias() = thetas * contexts.row(r).transpose();
    const double mn = means.minCoeff();
    Eigen::Index hi = 0;
    means.maxCoeff(&hi);
    ++best_count[static_cast<std::size_t>(hi)];
    for (std::size_t i = 0; i < K; ++i) {
      if (means[static_cast<Eigen::Index>(i)] <= mn) {
        ++worst_count[i];
        if (first_worst[i] < 0) first_worst[i] = r;
      }
    }
  }
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < K; ++i) {
    if (worst_count[i] != 0) continue;
    if (!pick || best_count[i] < best_count[*pick]) pick = i;
  }
  if (pick) return *pick;
  const auto least = static_cast<std::size_t>(
      std::min_element(worst_count.begin(), worst_count.end()) - worst_count.begin());
  std::ostringstream os;
  os << "no arm satisfies the non-worst target condition; arm " << least
     << " is a worst arm at context " << first_worst[least];
  throw AssumptionViolated(os.str(), static_cast<std::size_t>(first_worst[least]));
}

}  // namespace actpoison
