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
#include <vector>

#include <Eigen/Eigenvalues>

#include "htglb/policies/common.hpp"

namespace htglb {

/// Width c d ln(T/(d lambda) + 1) T^((1-eps)/(1+eps)) used by TOFU and MENU.
inline double offline_baseline_radius(const PolicyParams& p) {
  if (p.radius_override) return *p.radius_override;
  const double T = static_cast<double>(p.T);
  const double d = static_cast<double>(p.d);
  return p.c * d * std::log(T / (d * p.lambda) + 1.0) *
         std::pow(T, (1.0 - p.epsilon) / (1.0 + p.epsilon));
}

/// c_h of the TOFU criterion h_t = c_h t^((1-eps)/(2(1+eps))); defaults to (u / ln(2T/delta))^(1/(1+eps)).
inline double tofu_truncation_scale(const PolicyParams& p) {
  if (p.tofu_truncation_scale) return *p.tofu_truncation_scale;
  return std::pow(p.u / std::log(2.0 * static_cast<double>(p.T) / p.delta), 1.0 / (1.0 + p.epsilon));
}

/**
 * Truncation baseline that re-truncates the whole history every round.
 *
 * With A = [x_1 .. x_t] and W = A A^T + I, each row i of W^-1/2 A weights
 * the rewards, entries with |u_i,tau y_tau| > h_t are dropped, and the
 * estimate is W^-1/2 [u^1 . Y^1, ..., u^d . Y^d]. Cost is O(d^2 t) per round.
 */
class Tofu final : public Policy {
 public:
  explicit Tofu(const PolicyParams& p)
      : params_(p),
        metric_(p.d, 1.0),
        center_(Vector::Zero(p.d)),
        radius_(offline_baseline_radius(p)),
        scale_(tofu_truncation_scale(p)) {
    check_tuned_c(p);
  }

  std::string_view name() const override { return "tofu"; }
  std::uint64_t rounds() const override { return ys_.size(); }
  std::size_t history_size() const override { return ys_.size(); }

  ConfidenceEllipsoid ellipsoid() const override { return {center_, metric_, radius_}; }

  void observe(const Vector& arm, std::span<const double> rewards) override {
    expect_rewards(rewards, 1, "tofu");
    arms_.insert(arms_.end(), arm.data(), arm.data() + arm.size());
    ys_.push_back(rewards[0]);
    metric_.rank_one_update(arm, 1.0);
    center_ = estimate(criterion(ys_.size()));
  }

  /// h_t for a history of length t.
  double criterion(std::size_t t) const {
    const double eps = params_.epsilon;
    return scale_ * std::pow(static_cast<double>(t), (1.0 - eps) / (2.0 * (1.0 + eps)));
  }

  /// Truncated estimate of the current history under criterion h.
  Vector estimate(double h) const {
    const Eigen::Index d = params_.d;
    const auto t = static_cast<Eigen::Index>(ys_.size());
    if (t == 0) throw std::logic_error("tofu: estimate needs a nonempty history");
    Eigen::Map<const Matrix> a(arms_.data(), d, t);
    Eigen::Map<const Vector> y(ys_.data(), t);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(metric_.mat());
    const Matrix inv_sqrt = eig.eigenvectors() *
                            eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            eig.eigenvectors().transpose();
    const Matrix weights = inv_sqrt * a;  // d x t

    Vector sums = Vector::Zero(d);
    for (Eigen::Index tau = 0; tau < t; ++tau) {
      const double yt = y(tau);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double term = weights(i, tau) * yt;
        if (std::abs(term) <= h) sums(i) += term;
      }
    }
    return inv_sqrt * sums;
  }

  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  PolicyParams params_;
  SpdState metric_;  // W = A A^T + I
  Vector center_;
  double radius_;
  double scale_;
  std::vector<double> arms_;  // column-major d x t
  std::vector<double> ys_;
};

}  // namespace htglb
