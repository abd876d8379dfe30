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

#include "htglb/noise.hpp"
#include "htglb/policies/common.hpp"

namespace htglb {

/// r = ceil(16 ln(4T/delta)) replays per decision round.
inline std::size_t crmm_replays(const PolicyParams& p) {
  if (p.replay_override) return *p.replay_override;
  return static_cast<std::size_t>(
      std::ceil(16.0 * std::log(4.0 * static_cast<double>(p.T) / p.delta)));
}

/// T0 = floor(T / r) decision rounds.
inline std::uint64_t crmm_decision_rounds(const PolicyParams& p) {
  return p.T / crmm_replays(p);
}

/**
 * Width gamma_{t+1} of the CRMM region after t updates.
 *
 * Theoretical: gamma_1 = lambda S^2 and, for t >= 1,
 *   (4U^2 + C rho t^q) (4d/kappa) ln(1 + kappa t/(2 lambda d)) + lambda S^2 + (2 rho^2/kappa) t^q
 * with q = (1-eps)/(1+eps), C = (4v)^(1/(1+eps)) and
 * rho = 2C ln(4T/delta) + 2 C^-eps r v.
 * Tuned: c d ln(t/(d lambda) + 1) t^q, evaluated at t >= 1.
 */
inline double crmm_radius(const PolicyParams& p, std::uint64_t t) {
  if (p.radius_override) return *p.radius_override;
  const double eps = p.epsilon;
  const double d = static_cast<double>(p.d);
  const double q = (1.0 - eps) / (1.0 + eps);
  if (p.width_mode == WidthMode::tuned) {
    const double tt = static_cast<double>(std::max<std::uint64_t>(t, 1));
    return p.c * d * std::log(tt / (d * p.lambda) + 1.0) * std::pow(tt, q);
  }
  const double base = p.lambda * p.S() * p.S();
  if (t == 0) return base;
  const double tt = static_cast<double>(t);
  const double C = std::pow(4.0 * p.v, 1.0 / (1.0 + eps));
  const double r = static_cast<double>(crmm_replays(p));
  const double rho = 2.0 * C * std::log(4.0 * static_cast<double>(p.T) / p.delta) +
                     2.0 * std::pow(C, -eps) * r * p.v;
  const double kappa = p.kappa();
  return (4.0 * p.U() * p.U() + C * rho * std::pow(tt, q)) * (4.0 * d / kappa) *
             potential_log(p, tt) +
         base + 2.0 * rho * rho / kappa * std::pow(tt, q);
}

/**
 * Confidence Region with Mean of Medians: each decision plays the arm r
 * times and feeds the median reward to the online Newton step. Requires a
 * static arm set.
 */
class Crmm final : public Policy {
 public:
  explicit Crmm(const PolicyParams& p)
      : params_(p), ons_(p), replays_(crmm_replays(p)), radius_(crmm_radius(p, 0)) {
    check_tuned_c(p);
    if (replays_ == 0) throw std::invalid_argument("crmm: r must be >= 1");
    if (p.width_mode == WidthMode::tuned) radius_ = crmm_radius(p, 1);
  }

  std::string_view name() const override { return "crmm"; }
  std::size_t pulls_per_round() const override { return replays_; }
  bool ons_based() const override { return true; }
  std::uint64_t rounds() const override { return ons_.updates(); }

  ConfidenceEllipsoid ellipsoid() const override {
    return {ons_.center(), ons_.metric(), radius_};
  }

  void observe(const Vector& arm, std::span<const double> rewards) override {
    expect_rewards(rewards, replays_, "crmm");
    ons_.update(arm, order_median(rewards));
    const std::uint64_t t = ons_.updates();
    // The tuned width is indexed by the upcoming selection round.
    radius_ = crmm_radius(params_, params_.width_mode == WidthMode::tuned ? t + 1 : t);
  }

  std::size_t replays() const { return replays_; }
  double radius() const { return radius_; }
  const OnsState& ons() const { return ons_; }

 private:
  PolicyParams params_;
  OnsState ons_;
  std::size_t replays_;
  double radius_;
};

}  // namespace htglb
