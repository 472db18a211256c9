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

namespace actpoison {

// Global constants shared by the agent and the attacker.
struct ModelParams {
  std::size_t d = 6;        // context dimension
  std::size_t K = 10;       // number of arms
  double L = 1.4142135623730951;  // bound on ||x||_2
  double S = 1.4142135623730951;  // bound on ||theta||_2
  double R = 0.1;           // sub-Gaussian noise scale
  double lambda = 2.0;      // ridge regularization
  double delta = 0.1;       // confidence level
  double alpha = 0.2;       // attack margin
  std::uint64_t T = 1000000;  // horizon

  // Throws ConfigError unless every constraint holds, including lambda >= L
  // which the cost analysis depends on.
  void validate() const;

  static ModelParams paper_defaults() { return ModelParams{}; }

  bool operator==(const ModelParams&) const = default;
};

// OFUL confidence width:
//   sqrt(lambda)*S + R*sqrt(2 ln(K/delta) + d ln(1 + L^2 N / (lambda d))).
// Nondecreasing in n.
double omega(double n, const ModelParams& p);

// L*S*sqrt(0.5 ln(2KT/delta)), the extra slack from the attacker's mixing.
double mixing_slack(const ModelParams& p);

// Attacker-side width phi * (omega(n) + mixing_slack) with phi = 2 on the
// target arm and 1/alpha elsewhere.
double beta_attacker(double n_dag, bool is_target, const ModelParams& p);

}  // namespace actpoison
