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

#include "actpoison/params.hpp"

#include <cmath>
#include <sstream>

#include "actpoison/errors.hpp"

namespace actpoison {

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid model params: " + msg); };
  if (d < 1) fail("d must be >= 1");
  if (K < 2) fail("K must be >= 2");
  if (!(L > 0)) fail("L must be > 0");
  if (!(S > 0)) fail("S must be > 0");
  if (!(R >= 0)) fail("R must be >= 0");
  if (!(lambda > 0)) fail("lambda must be > 0");
  if (!(delta > 0 && delta < 1)) fail("delta must lie in (0, 1)");
  if (!(alpha > 0 && alpha < 0.5)) fail("alpha must lie in (0, 1/2)");
  if (T < 1) fail("T must be >= 1");
  if (lambda < L) {
    std::ostringstream os;
    os << "lambda (" << lambda << ") must be >= L (" << L << ")";
    fail(os.str());
  }
}

double omega(double n, const ModelParams& p) {
  const double d = static_cast<double>(p.d);
  const double K = static_cast<double>(p.K);
  const double inner = 2.0 * std::log(K / p.delta) +
                       d * std::log1p(p.L * p.L * n / (p.lambda * d));
  return std::sqrt(p.lambda) * p.S + p.R * std::sqrt(inner);
}

double mixing_slack(const ModelParams& p) {
  const double K = static_cast<double>(p.K);
  const double T = static_cast<double>(p.T);
  return p.L * p.S * std::sqrt(0.5 * std::log(2.0 * K * T / p.delta));
}

double beta_attacker(double n_dag, bool is_target, const ModelParams& p) {
  const double phi = is_target ? 2.0 : 1.0 / p.alpha;
  return phi * (omega(n_dag, p) + mixing_slack(p));
}

}  // namespace actpoison
