// Copyright 2026 The htglb Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "htglb/noise.hpp"
#include "htglb/policies/common.hpp"
#include "htglb/policies/crmm.hpp"
#include "htglb/policies/tofu.hpp"

namespace htglb {

/// Index of the estimator whose median W-distance to the others is smallest (lowest on ties).
inline std::size_t median_of_means_choice(const Matrix& estimates, const Matrix& w) {
  const Eigen::Index r = estimates.cols();
  Eigen::LLT<Matrix> llt(w);
  if (llt.info() != Eigen::Success) throw NumericalError("menu: metric is not positive definite");
  // ||a - b||_W = ||L^T (a - b)||_2 with W = L L^T.
  const Matrix z = llt.matrixU() * estimates;
  const Vector sq = z.colwise().squaredNorm().transpose();
  const Matrix gram = z.transpose() * z;
  std::vector<double> row(static_cast<std::size_t>(r));
  std::size_t best = 0;
  double best_m = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index s = 0; s < r; ++s) {
      const double d2 = j == s ? 0.0 : sq(j) + sq(s) - 2.0 * gram(j, s);
      row[static_cast<std::size_t>(s)] = d2 > 0.0 ? std::sqrt(d2) : 0.0;
    }
    const double m = order_median(row);
    if (m < best_m) {
      best_m = m;
      best = static_cast<std::size_t>(j);
    }
  }
  return best;
}

/**
 * Median-of-means baseline: each decision plays the arm r times, keeps r
 * separate reward sequences and their ridge estimates (A A^T + I)^-1 A Y^j,
 * and centers the region on the estimate with the smallest median distance
 * to the others.
 */
class Menu final : public Policy {
 public:
  explicit Menu(const PolicyParams& p)
      : params_(p),
        replays_(crmm_replays(p)),
        metric_(p.d, 1.0),
        moments_(Matrix::Zero(p.d, static_cast<Eigen::Index>(replays_))),
        center_(Vector::Zero(p.d)),
        radius_(offline_baseline_radius(p)) {
    check_tuned_c(p);
    if (replays_ == 0) throw std::invalid_argument("menu: r must be >= 1");
  }

  std::string_view name() const override { return "menu"; }
  std::size_t pulls_per_round() const override { return replays_; }
  std::uint64_t rounds() const override { return rounds_; }

  ConfidenceEllipsoid ellipsoid() const override { return {center_, metric_, radius_}; }

  void observe(const Vector& arm, std::span<const double> rewards) override {
    expect_rewards(rewards, replays_, "menu");
    Eigen::Map<const Eigen::RowVectorXd> y(rewards.data(), static_cast<Eigen::Index>(replays_));
    moments_.noalias() += arm * y;
    metric_.rank_one_update(arm, 1.0);
    ++rounds_;
    estimates_ = metric_.inv() * moments_;
    chosen_ = median_of_means_choice(estimates_, metric_.mat());
    center_ = estimates_.col(static_cast<Eigen::Index>(chosen_));
  }

  std::size_t replays() const { return replays_; }
  std::size_t chosen() const { return chosen_; }
  const Matrix& estimates() const { return estimates_; }
  const Vector& center() const { return center_; }

 private:
  PolicyParams params_;
  std::size_t replays_;
  SpdState metric_;  // A A^T + I
  Matrix moments_;   // A Y^j, one column per sequence
  Matrix estimates_;
  Vector center_;
  double radius_;
  std::uint64_t rounds_ = 0;
  std::size_t chosen_ = 0;
};

}  // namespace htglb
