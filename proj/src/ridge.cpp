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

#include "actpoison/ridge.hpp"

#include <cmath>

#include "actpoison/errors.hpp"

namespace actpoison {

RidgeState::RidgeState(std::size_t d, double lambda)
    : lambda_(lambda),
      gram_(Matrix::Identity(d, d) * lambda),
      inverse_(Matrix::Identity(d, d) / lambda),
      b_(Vector::Zero(d)),
      theta_(Vector::Zero(d)),
      scratch_(Vector::Zero(d)) {
  if (d == 0) throw ConfigError("ridge state needs d >= 1");
  if (!(lambda > 0)) throw ConfigError("ridge state needs lambda > 0");
}

void RidgeState::update(const Vector& x, double y) {
  if (x.size() != b_.size()) throw NumericError("ridge update: dimension mismatch");
  if (!std::isfinite(y) || !x.allFinite()) throw NumericError("ridge update: non-finite input");

  gram_.noalias() += x * x.transpose();
  b_.noalias() += y * x;
  ++count_;

  if (count_ % kRefreshInterval == 0) {
    refresh_inverse();
  } else {
    scratch_.noalias() = inverse_ * x;
    const double denom = 1.0 + x.dot(scratch_);
    inverse_.noalias() -= (scratch_ / denom) * scratch_.transpose();
  }
  theta_.noalias() = inverse_ * b_;
}

double RidgeState::mahalanobis(const Vector& x) const {
  const Eigen::Index d = x.size();
  double q = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    double row = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) row += inverse_(i, j) * x[i];
    q += row * x[j];
  }
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

void RidgeState::refresh_inverse() {
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) throw NumericError("ridge state lost positive definiteness");
  inverse_ = llt.solve(Matrix::Identity(gram_.rows(), gram_.cols()));
}

bool RidgeState::operator==(const RidgeState& other) const {
  return lambda_ == other.lambda_ && count_ == other.count_ && gram_ == other.gram_ &&
         inverse_ == other.inverse_ && b_ == other.b_ && theta_ == other.theta_;
}

}  // namespace actpoison
