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

#include "actpoison/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "actpoison/data_prep.hpp"
#include "actpoison/errors.hpp"

namespace actpoison {

bool TrialResult::operator==(const TrialResult& o) const {
  auto diag_eq = [](const AttackDiagnostics& a, const AttackDiagnostics& b) {
    return a.degenerate_epsilon == b.degenerate_epsilon && a.margin_shortfall == b.margin_shortfall &&
           a.epsilon_clamped == b.epsilon_clamped;
  };
  return seed == o.seed && rounds == o.rounds && target_pulls == o.target_pulls &&
         attack_cost == o.attack_cost && final_regret == o.final_regret && pulls == o.pulls &&
         checkpoints == o.checkpoints && diag_eq(diagnostics, o.diagnostics) &&
         epsilon_min == o.epsilon_min && epsilon_max == o.epsilon_max && coverage == o.coverage &&
         records == o.records;
}

TrialResult run_trial(const Environment& env, Agent& agent, Attacker& attacker,
                      const ModelParams& params, TrialStreams& streams, const TrialOptions& opts) {
  const std::size_t K = env.num_arms();
  const std::size_t target = env.target();
  if (params.K != K || params.d != env.dim()) {
    throw ConfigError("model params do not match the environment dimensions");
  }
  std::vector<std::uint64_t> checkpoints = opts.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  auto* blackbox = dynamic_cast<BlackBoxAttacker*>(&attacker);
  const bool coverage = opts.track_coverage && blackbox != nullptr;

  TrialResult res;
  res.pulls.assign(K, 0);
  if (coverage) res.coverage.assign(K, Coverage{});
  if (opts.record_rounds) res.records.reserve(static_cast<std::size_t>(params.T));

  Vector x(static_cast<Eigen::Index>(env.dim()));
  Vector means(static_cast<Eigen::Index>(K));
  std::size_t next_checkpoint = 0;
  double regret = 0.0;

  for (std::uint64_t t = 1; t <= params.T; ++t) {
    const std::ptrdiff_t ctx = env.sampler().sample_into(x, streams.context);
    env.all_means(x, means);

    if (coverage) {
      for (std::size_t i = 0; i < K; ++i) {
        if (blackbox->dag_count(i) < opts.coverage_min_count) continue;
        const auto& st = blackbox->arm_state(i);
        const double err = std::abs(st.estimate(x) - means[static_cast<Eigen::Index>(i)]);
        auto& c = res.coverage[i];
        ++c.total;
        if (err <= blackbox->width(i) * st.mahalanobis(x)) ++c.covered;
      }
    }

    const std::size_t chosen = agent.select(x, streams.agent);
    if (chosen >= K) throw NumericError("agent selected an out-of-range arm");
    const AttackDecision d = attacker.decide(x, chosen, t, streams.attacker);
    const double reward = env.draw_reward(x, d.post_action, streams.noise);
    if (!std::isfinite(reward)) throw NumericError("non-finite reward");
    agent.observe(x, chosen, reward);
    attacker.observe(x, d, reward);

    const double inst_regret = means.maxCoeff() - means[static_cast<Eigen::Index>(chosen)];
    regret += inst_regret;
    ++res.pulls[chosen];
    if (chosen == target) {
      ++res.target_pulls;
    } else if (attacker.kind() != AttackerKind::kNone) {
      res.epsilon_min = res.epsilon_min ? std::min(*res.epsilon_min, d.epsilon) : d.epsilon;
      res.epsilon_max = res.epsilon_max ? std::max(*res.epsilon_max, d.epsilon) : d.epsilon;
    }
    if (d.attacked) ++res.attack_cost;
    if (opts.record_rounds) {
      res.records.push_back({t, ctx, chosen, d.post_action, d.epsilon, reward, d.attacked, inst_regret});
    }
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      res.checkpoints.push_back({t, res.attack_cost, res.target_pulls, regret});
      ++next_checkpoint;
    }
  }
  if (!std::isfinite(regret)) throw NumericError("non-finite cumulative regret");
  res.rounds = params.T;
  res.final_regret = regret;
  res.diagnostics = attacker.diagnostics();
  return res;
}

TrialResult run_trial(const Environment& env, const AgentSpec& agent_spec, AttackerKind attacker_kind,
                      const ModelParams& params, std::uint64_t seed, const TrialOptions& opts) {
  auto agent = make_agent(agent_spec, params);
  auto attacker = make_attacker(attacker_kind, env, params);
  TrialStreams streams(seed);
  TrialResult res = run_trial(env, *agent, *attacker, params, streams, opts);
  res.seed = seed;
  return res;
}

ModelParams model_params(const ExperimentConfig& cfg, double alpha) {
  ModelParams p;
  p.d = cfg.environment.d;
  p.K = cfg.environment.K;
  p.L = cfg.model.L;
  p.S = cfg.model.S;
  p.R = cfg.model.R;
  p.lambda = cfg.model.lambda;
  p.delta = cfg.model.delta;
  p.alpha = alpha;
  p.T = cfg.run.T;
  p.validate();
  return p;
}

namespace {

PreparedEnvironment finish(Environment env, const Matrix& probes, const AlphaConfig& a) {
  const ValidationStats stats = env.validate(probes);
  const double probe = compute_alpha(env, probes, 1e-12);
  PreparedEnvironment out{std::move(env), stats, probe, 0.0, false};
  if (a.source == AlphaConfig::Source::kFixed) {
    out.alpha = a.value;
  } else {
    const double shrunk = a.shrink * probe;
    out.alpha_floored = shrunk < a.floor;
    out.alpha = std::max(shrunk, a.floor);
  }
  return out;
}

}  // namespace

PreparedEnvironment prepare_environment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& e = cfg.environment;
  if (e.kind == EnvironmentConfig::Kind::kSynthetic) {
    SyntheticSpec spec;
    spec.d = e.d;
    spec.K = e.K;
    spec.seed = e.seed;
    spec.noise_variance = e.noise_variance;
    if (e.target == "centroid") {
      spec.target_mode = SyntheticSpec::Target::kCentroid;
    } else {
      spec.target_mode = SyntheticSpec::Target::kIndex;
      spec.target_index = std::stoull(e.target);
    }
    Environment env = make_synthetic(spec);
    const Matrix probes = sample_probes(env.sampler(), e.probes, e.seed);
    return finish(std::move(env), probes, cfg.alpha);
  }

  FeatureFile f = load_features(e.features);
  if (f.dim() != e.d) {
    std::ostringstream os;
    os << "feature file dimension " << f.dim() << " does not match environment.d " << e.d;
    throw ConfigError(os.str());
  }
  if (static_cast<std::size_t>(f.items.rows()) != e.K) {
    std::ostringstream os;
    os << "feature file has " << f.items.rows() << " items but environment.K is " << e.K;
    throw ConfigError(os.str());
  }
  auto pool = std::make_shared<const Matrix>(std::move(f.users));
  const std::size_t target = e.target == "auto" ? select_target(f.items, *pool) : std::stoull(e.target);
  Environment env(std::move(f.items), target, ContextSampler::replay(pool), NoiseModel{e.noise_variance});
  return finish(std::move(env), *pool, cfg.alpha);
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t k) {
  return derive_seed(master, static_cast<std::uint64_t>(k));
}

ExperimentReport aggregate(const ExperimentConfig& cfg, const PreparedEnvironment& prepared,
                           std::vector<TrialResult> trials) {
  ExperimentReport rep;
  rep.config = cfg;
  rep.validation = prepared.validation;
  rep.alpha_probe = prepared.alpha_probe;
  rep.alpha = prepared.alpha;
  rep.alpha_floored = prepared.alpha_floored;
  std::vector<double> pulls, cost, regret;
  for (const auto& tr : trials) {
    pulls.push_back(static_cast<double>(tr.target_pulls));
    cost.push_back(static_cast<double>(tr.attack_cost));
    regret.push_back(tr.final_regret);
  }
  rep.target_pulls = summarize(pulls);
  rep.attack_cost = summarize(cost);
  rep.final_regret = summarize(regret);
  if (!trials.empty()) {
    for (std::size_t c = 0; c < trials.front().checkpoints.size(); ++c) {
      CurvePoint pt;
      pt.t = trials.front().checkpoints[c].t;
      std::vector<double> cc, tp, rg;
      for (const auto& tr : trials) {
        cc.push_back(static_cast<double>(tr.checkpoints.at(c).attack_cost));
        tp.push_back(static_cast<double>(tr.checkpoints.at(c).target_pulls));
        rg.push_back(tr.checkpoints.at(c).regret);
      }
      pt.cost = summarize(cc);
      pt.target_pulls = summarize(tp);
      pt.regret = summarize(rg);
      rep.curve.push_back(pt);
    }
  }
  rep.trials = std::move(trials);
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  const PreparedEnvironment prepared = prepare_environment(cfg);
  const ModelParams params = model_params(cfg, prepared.alpha);
  TrialOptions opts;
  opts.checkpoints = cfg.run.checkpoints.empty() ? default_checkpoints(cfg.run.T) : cfg.run.checkpoints;
  opts.record_rounds = cfg.run.record_rounds;
  opts.track_coverage = cfg.run.track_coverage;

  if (threads == 0) {
    if (const char* env = std::getenv("ACTPOISON_THREADS")) threads = static_cast<unsigned>(std::atoi(env));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  }
  const std::size_t n = cfg.run.trials;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::vector<TrialResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        results[k] = run_trial(prepared.env, cfg.agent, cfg.attacker, params, trial_seed(cfg.run.seed, k), opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!errors[k]) continue;
    const std::string where = " (trial " + std::to_string(k) + ", seed " +
                              std::to_string(trial_seed(cfg.run.seed, k)) + ")";
    try {
      std::rethrow_exception(errors[k]);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what() + where);
    } catch (const std::exception& e) {
      throw NumericError(e.what() + where);
    }
  }
  return aggregate(cfg, prepared, std::move(results));
}

GrowthSummary cost_growth_summary(const std::vector<std::pair<std::uint64_t, double>>& curve) {
  if (curve.size() < 2) throw ConfigError("cost growth needs at least two checkpoints");
  GrowthSummary g;
  g.points = curve;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    if (curve[k].second == 0.0) {
      g.ratios.push_back(std::nullopt);
    } else {
      g.ratios.push_back(curve[k + 1].second / curve[k].second);
    }
  }
  return g;
}

}  // namespace actpoison
