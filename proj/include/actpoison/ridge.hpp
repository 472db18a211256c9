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

#include <Eigen/Dense>

namespace actpoison {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Incremental l2-regularized least squares:
//   V = lambda*I + sum x x^T,  b = sum y x,  theta = V^{-1} b.
//
// V^{-1} is maintained by Sherman-Morrison rank-one updates and rebuilt from a
// Cholesky factorization of V every kRefreshInterval updates, which bounds the
// accumulated rounding error of the rank-one path.
class RidgeState {
 public:
  static constexpr std::uint64_t kRefreshInterval = 64;

  RidgeState() = default;
  RidgeState(std::size_t d, double lambda);

  // V += x x^T, b += y x, N += 1. Throws NumericError on non-finite input.
  void update(const Vector& x, double y);

  // <x, theta_hat>.
  double estimate(const Vector& x) const { return x.dot(theta_); }

  // sqrt(x^T V^{-1} x).
  double mahalanobis(const Vector& x) const;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(b_.size()); }
  double lambda() const noexcept { return lambda_; }
  std::uint64_t count() const noexcept { return count_; }
  const Matrix& gram() const noexcept { return gram_; }
  const Matrix& inverse() const noexcept { return inverse_; }
  const Vector& response() const noexcept { return b_; }
  const Vector& theta() const noexcept { return theta_; }

  bool operator==(const RidgeState& other) const;

 private:
  void refresh_inverse();

  double lambda_ = 1.0;
  std::uint64_t count_ = 0;
  Matrix gram_;
  Matrix inverse_;
  Vector b_;
  Vector theta_;
  Vector scratch_;
};

}  // namespace actpoison
