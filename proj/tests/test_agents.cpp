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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "actpoison/agents.hpp"
#include "actpoison/errors.hpp"

using namespace actpoison;

namespace {

ModelParams tiny_params(std::size_t K = 2) {
  ModelParams p;
  p.d = 1;
  p.K = K;
  p.L = 1.0;
  p.S = 1.0;
  p.R = 0.1;
  p.lambda = 2.0;
  p.delta = 0.1;
  return p;
}

}  // namespace

TEST_CASE("agent kinds round-trip through their names") {
  for (auto k : {AgentKind::kLinUcb, AgentKind::kLinTs, AgentKind::kEpsGreedy})
    CHECK(parse_agent_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_agent_kind("ucb1"), ConfigError);
}

TEST_CASE("fresh LinUCB picks the lowest index") {
  LinUcbAgent a(ModelParams::paper_defaults());
  Rng rng(1);
  CHECK(a.select(Vector::Ones(6), rng) == 0);
}

TEST_CASE("LinUCB two-arm hand evaluation") {
  LinUcbAgent a(tiny_params());
  Vector x = Vector::Ones(1);
  a.observe(x, 1, 1.0);
  // arm 1: 1/3 + omega(1)/sqrt(3); arm 0: omega(0)/sqrt(2)
  CHECK(a.ucb(x, 1) == doctest::Approx(1.2958542233699215).epsilon(1e-13));
  CHECK(a.ucb(x, 0) == doctest::Approx(1.1730818382602286).epsilon(1e-13));
  Rng rng(1);
  CHECK(a.select(x, rng) == 1);
}

TEST_CASE("LinUCB index is estimate plus width times norm") {
  auto p = ModelParams::paper_defaults();
  LinUcbAgent a(p);
  Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    Vector x = Vector::Random(6);
    a.observe(x, t % 3, uniform01(rng));
  }
  Vector x = Vector::Random(6);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& s = a.arm_state(i);
    CHECK(a.ucb(x, i) == doctest::Approx(s.estimate(x) + omega(double(s.count()), p) * s.mahalanobis(x)));
  }
}

TEST_CASE("LinTS with zero posterior scale is greedy") {
  auto p = ModelParams::paper_defaults();
  LinTsAgent a(p, 0.0);
  Vector x = Vector::Ones(6);
  a.observe(x, 4, 1.0);
  a.observe(x, 7, 0.5);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) CHECK(a.select(x, rng) == 4);
}

TEST_CASE("fresh LinTS samples arms uniformly") {
  const std::size_t K = 5;
  auto p = ModelParams::paper_defaults();
  p.K = K;
  LinTsAgent a(p, std::nullopt);
  Rng rng(17);
  Vector x = Vector::Ones(6);
  const int n = 10000;
  std::vector<int> hits(K, 0);
  for (int i = 0; i < n; ++i) ++hits[a.select(x, rng)];
  const double q = 1.0 / K, sd = std::sqrt(q * (1 - q) / n);
  for (int h : hits) CHECK(std::abs(double(h) / n - q) <= 3 * sd);
}

TEST_CASE("LinTS replays with the same stream") {
  auto p = ModelParams::paper_defaults();
  LinTsAgent a(p, 0.5), b(p, 0.5);
  Rng ra(8), rb(8), rx(2);
  for (int t = 0; t < 500; ++t) {
    Vector x = Vector::Random(6);
    std::size_t ia = a.select(x, ra), ib = b.select(x, rb);
    REQUIRE(ia == ib);
    double r = uniform01(rx);
    a.observe(x, ia, r);
    b.observe(x, ib, r);
  }
}

TEST_CASE("epsilon-greedy extremes") {
  auto p = ModelParams::paper_defaults();
  Vector x = Vector::Ones(6);
  SUBCASE("never explores") {
    EpsGreedyAgent a(p, 1.0, 0.0);
    a.observe(x, 3, 1.0);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) CHECK(a.select(x, rng) == 3);
  }
  SUBCASE("always explores") {
    EpsGreedyAgent a(p, 1.0, 1.0);
    a.observe(x, 3, 1.0);
    Rng rng(1);
    const int n = 10000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += a.select(x, rng) == 3;
    const double q = 0.1, sd = std::sqrt(q * (1 - q) / n);
    CHECK(std::abs(double(hits) / n - q) <= 3 * sd);
  }
}

TEST_CASE("epsilon-greedy exploration schedule") {
  auto p = ModelParams::paper_defaults();
  EpsGreedyAgent a(p, 2.0, std::nullopt);
  CHECK(a.explore_probability(1) == 1.0);
  CHECK(a.explore_probability(20) == 1.0);
  CHECK(a.explore_probability(40) == doctest::Approx(0.5));
  CHECK(a.explore_probability(20000) == doctest::Approx(0.001));
  for (std::uint64_t t = 1; t < 100000; t = t * 3 + 1)
    CHECK(a.explore_probability(t + 1) <= a.explore_probability(t));
}

TEST_CASE("observe touches only the chosen arm") {
  LinUcbAgent a(ModelParams::paper_defaults());
  Vector x = Vector::Ones(6);
  a.observe(x, 2, 1.0);
  a.observe(x, 2, 1.0);
  for (std::size_t i = 0; i < a.num_arms(); ++i) {
    CHECK(a.pulls(i) == (i == 2 ? 2u : 0u));
    if (i != 2) CHECK(a.arm_state(i).theta().norm() == 0.0);
  }
  CHECK(a.rounds() == 2);
  CHECK(a.width(2) == doctest::Approx(omega(2, a.params())));
  CHECK_THROWS_AS(a.observe(x, 10, 1.0), ConfigError);
}

TEST_CASE("noiseless estimates converge at rate lambda / N") {
  LinUcbAgent a(tiny_params());
  Vector x = Vector::Ones(1);
  for (int n = 1; n <= 10000; ++n) {
    a.observe(x, 0, 1.0);
    if (n % 1000 == 0) CHECK(1.0 - a.arm_state(0).estimate(x) == doctest::Approx(2.0 / (2.0 + n)).epsilon(1e-10));
  }
}

TEST_CASE("make_agent honours the spec") {
  auto p = ModelParams::paper_defaults();
  AgentSpec spec;
  spec.kind = AgentKind::kEpsGreedy;
  spec.explore_c = 3.0;
  auto a = make_agent(spec, p);
  auto* eg = dynamic_cast<EpsGreedyAgent*>(a.get());
  REQUIRE(eg != nullptr);
  CHECK(eg->explore_probability(300) == doctest::Approx(0.1));
  spec.kind = AgentKind::kLinTs;
  CHECK(dynamic_cast<LinTsAgent*>(make_agent(spec, p).get()) != nullptr);
}
