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

#include "htglb/policies/common.hpp"

namespace htglb {

/// Truncation threshold Gamma applied to ||x_t||_{V_t^-1} |y_t|.
inline double crtm_threshold(const PolicyParams& p) {
  if (p.threshold_override) return *p.threshold_override;
  const double eps = p.epsilon;
  const double T = static_cast<double>(p.T);
  const double d = static_cast<double>(p.d);
  const double log_conf = std::log(4.0 * T / p.delta);
  const double log_pot = potential_log(p, T);
  const double t_pow = std::pow(T, (1.0 - eps) / (2.0 * (1.0 + eps)));
  if (p.threshold_form == ThresholdForm::appendix) {
    return 2.0 * std::pow(p.u * log_conf, 1.0 / (1.0 + eps)) *
           std::sqrt(d * p.kappa() * log_pot) * t_pow;
  }
  return 2.0 * std::pow(p.u / log_conf, 1.0 / (1.0 + eps)) * std::sqrt(d * log_pot / p.kappa()) *
         t_pow;
}

/// Fixed confidence width gamma of CRTM for the configured width mode.
inline double crtm_radius(const PolicyParams& p) {
  if (p.radius_override) return *p.radius_override;
  const double eps = p.epsilon;
  const double T = static_cast<double>(p.T);
  const double d = static_cast<double>(p.d);
  const double log_conf = std::log(4.0 * T / p.delta);
  const double t_pow = std::pow(T, (1.0 - eps) / (1.0 + eps));
  if (p.width_mode == WidthMode::tuned) {
    return p.c * d * std::pow(log_conf, 2.0 * eps / (1.0 + eps)) *
           std::log(T / (d * p.lambda) + 1.0) * t_pow;
  }
  const double log_pot = potential_log(p, T);
  const double kappa = p.kappa();
  return 224.0 * std::pow(p.u, 2.0 / (1.0 + eps)) * std::pow(log_conf, 2.0 * eps / (1.0 + eps)) *
             t_pow * (4.0 * d / kappa) * log_pot +
         2.0 * p.lambda * p.S() * p.S() + 48.0 * p.U() * p.U() * d / kappa * log_pot;
}

/**
 * Confidence Region with Truncated Mean: one pull per round; the reward is
 * zeroed when ||x_t||_{V_t^-1} |y_t| exceeds Gamma, then fed to the online
 * Newton step.
 */
class Crtm final : public Policy {
 public:
  explicit Crtm(const PolicyParams& p)
      : ons_(p), threshold_(crtm_threshold(p)), radius_(crtm_radius(p)) {
    check_tuned_c(p);
  }

  std::string_view name() const override { return "crtm"; }
  bool ons_based() const override { return true; }
  std::uint64_t rounds() const override { return ons_.updates(); }

  ConfidenceEllipsoid ellipsoid() const override {
    return {ons_.center(), ons_.metric(), radius_};
  }

  void observe(const Vector& arm, std::span<const double> rewards) override {
    expect_rewards(rewards, 1, "crtm");
    const double y = rewards[0];
    const double beta = quad_norm(ons_.metric(), arm, Metric::Vinv);
    const bool keep = beta * std::abs(y) <= threshold_;
    if (!keep) ++truncated_;
    ons_.update(arm, keep ? y : 0.0);
  }

  double threshold() const { return threshold_; }
  double radius() const { return radius_; }
  std::uint64_t truncated() const { return truncated_; }
  const OnsState& ons() const { return ons_; }

 private:
  OnsState ons_;
  double threshold_;
  double radius_;
  std::uint64_t truncated_ = 0;
};

}  // namespace htglb
