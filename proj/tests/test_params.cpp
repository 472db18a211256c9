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

#include <doctest.h>

#include "actpoison/errors.hpp"
#include "actpoison/params.hpp"

using namespace actpoison;

TEST_CASE("omega at N=0 reduces to sqrt(lambda)*S when R=0") {
  ModelParams p;
  p.R = 0.0;
  CHECK(omega(0, p) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("omega matches hand evaluation for paper defaults") {
  // 2 + 0.1*sqrt(2 ln 100)
  CHECK(omega(0, ModelParams::paper_defaults()) == doctest::Approx(2.30348542587703).epsilon(1e-13));
  CHECK(omega(1e3, ModelParams::paper_defaults()) == doctest::Approx(2.631998478325431).epsilon(1e-13));
}

TEST_CASE("omega is nondecreasing in N") {
  const auto p = ModelParams::paper_defaults();
  CHECK(omega(1e6, p) > omega(1e3, p));
  CHECK(omega(1e3, p) > omega(0, p));
  double prev = omega(0, p);
  for (double n = 1; n < 1e7; n *= 1.7) {
    const double w = omega(n, p);
    CHECK(w >= prev);
    CHECK(w >= std::sqrt(p.lambda) * p.S);
    prev = w;
  }
}

TEST_CASE("beta_attacker scales the shared base by phi") {
  auto p = ModelParams::paper_defaults();
  const double base = omega(17, p) + mixing_slack(p);
  CHECK(beta_attacker(17, true, p) == doctest::Approx(2 * base));
  p.alpha = 0.25;
  CHECK(beta_attacker(17, false, p) == doctest::Approx(4 * (omega(17, p) + mixing_slack(p))));
}

TEST_CASE("beta_attacker with paper defaults") {
  const auto p = ModelParams::paper_defaults();
  CHECK(mixing_slack(p) == doctest::Approx(6.182851756998921).epsilon(1e-13));
  CHECK(beta_attacker(0, false, p) == doctest::Approx(42.43168591437975).epsilon(1e-13));
  CHECK(beta_attacker(0, true, p) == doctest::Approx(16.9726743657519).epsilon(1e-13));
}

TEST_CASE("ModelParams validation") {
  CHECK_NOTHROW(ModelParams::paper_defaults().validate());
  auto bad = [](auto mutate) {
    auto p = ModelParams::paper_defaults();
    mutate(p);
    CHECK_THROWS_AS(p.validate(), ConfigError);
  };
  bad([](ModelParams& p) { p.lambda = 1.0; });  // lambda < L = sqrt(2)
  bad([](ModelParams& p) { p.alpha = 0.0; });
  bad([](ModelParams& p) { p.alpha = 0.5; });
  bad([](ModelParams& p) { p.delta = 1.0; });
  bad([](ModelParams& p) { p.K = 1; });
  bad([](ModelParams& p) { p.R = -0.1; });
  bad([](ModelParams& p) { p.T = 0; });
  bad([](ModelParams& p) { p.L = 0; });
}
