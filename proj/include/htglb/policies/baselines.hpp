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
#include <memory>
#include <string>

#include "htglb/noise.hpp"
#include "htglb/policies/common.hpp"
#include "htglb/rng.hpp"

namespace htglb {

enum class BaselineKind { ol2m, gloc };

/**
 * OL2M and GLOC as run in the experiments: the online Newton step on raw
 * rewards with a data-independent (OL2M) or residual-driven (GLOC) width.
 * Both widths use the tuned form regardless of width mode.
 */
class OnsBaseline final : public Policy {
 public:
  OnsBaseline(const PolicyParams& p, BaselineKind kind)
      : params_(p), kind_(kind), ons_(p) {
    check_tuned_c(p);
    refresh_radius();
  }

  std::string_view name() const override { return kind_ == BaselineKind::ol2m ? "ol2m" : "gloc"; }
  bool ons_based() const override { return true; }
  std::uint64_t rounds() const override { return ons_.updates(); }

  ConfidenceEllipsoid ellipsoid() const override {
    return {ons_.center(), ons_.metric(), radius_};
  }

  void observe(const Vector& arm, std::span<const double> rewards) override {
    expect_rewards(rewards, 1, name());
    feed(arm, rewards[0]);
  }

  /// One update with an already aggregated reward.
  void feed(const Vector& arm, double y) {
    if (kind_ == BaselineKind::gloc) {
      // Residual and norm use the pre-update center and metric.
      const double beta = quad_norm(ons_.metric(), arm, Metric::Vinv);
      const double resid = link_value(ons_.link(), arm.dot(ons_.center())) - y;
      residual_sum_ += resid * resid * beta * beta;
    }
    ons_.update(arm, y);
    refresh_radius();
  }

  BaselineKind kind() const { return kind_; }
  double radius() const { return radius_; }
  double residual_sum() const { return residual_sum_; }
  const OnsState& ons() const { return ons_; }

 private:
  void refresh_radius() {
    if (params_.radius_override) {
      radius_ = *params_.radius_override;
      return;
    }
    if (kind_ == BaselineKind::ol2m) {
      const double t = static_cast<double>(ons_.updates() + 1);  // upcoming selection round
      radius_ = params_.c * static_cast<double>(params_.d) * std::log(t / params_.lambda + 1.0);
    } else {
      radius_ = params_.c * residual_sum_;
    }
  }

  PolicyParams params_;
  BaselineKind kind_;
  OnsState ons_;
  double residual_sum_ = 0.0;
  double radius_ = 0.0;
};

/// rbar = ceil((16 ln(2T/delta))^(1/alpha)) plays per decision round.
inline std::size_t mom_replays(const PolicyParams& p) {
  return static_cast<std::size_t>(std::ceil(
      std::pow(16.0 * std::log(2.0 * static_cast<double>(p.T) / p.delta), 1.0 / p.alpha)));
}

/// ceil(rbar^alpha) rewards per median group.
inline std::size_t mom_group_size(const PolicyParams& p) {
  return static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(mom_replays(p)), p.alpha)));
}

/**
 * Mean-of-medians wrapper around OL2M or GLOC: each decision plays the arm
 * rbar times, splits the rewards at random into groups of ceil(rbar^alpha),
 * and feeds the mean of the group medians to the wrapped policy.
 */
class MomWrapper final : public Policy {
 public:
  MomWrapper(const PolicyParams& p, BaselineKind kind, RngStream rng)
      : base_(p, kind),
        replays_(mom_replays(p)),
        group_size_(std::min(mom_group_size(p), replays_)),
        rng_(std::move(rng)),
        name_(std::string(base_.name()) + "_mom") {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw std::invalid_argument("mom: alpha in (0,1)");
  }

  std::string_view name() const override { return name_; }
  std::size_t pulls_per_round() const override { return replays_; }
  bool ons_based() const override { return true; }
  std::uint64_t rounds() const override { return base_.rounds(); }
  ConfidenceEllipsoid ellipsoid() const override { return base_.ellipsoid(); }

  void observe(const Vector& arm, std::span<const double> rewards) override {
    expect_rewards(rewards, replays_, name_);
    base_.feed(arm, mean_of_medians(rewards, group_size_, rng_));
  }

  std::size_t replays() const { return replays_; }
  std::size_t group_size() const { return group_size_; }
  const OnsBaseline& base() const { return base_; }

 private:
  OnsBaseline base_;
  std::size_t replays_;
  std::size_t group_size_;
  RngStream rng_;
  std::string name_;
};

}  // namespace htglb
