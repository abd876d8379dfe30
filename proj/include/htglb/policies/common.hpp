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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "htglb/env.hpp"
#include "htglb/glm.hpp"
#include "htglb/linalg.hpp"
#include "htglb/noise.hpp"

namespace htglb {

enum class WidthMode { theoretical, tuned };

inline WidthMode parse_width_mode(std::string_view name) {
  if (name == "tuned") return WidthMode::tuned;
  if (name == "theoretical") return WidthMode::theoretical;
  throw std::invalid_argument("unknown width mode: " + std::string(name));
}

inline std::string_view to_string(WidthMode mode) {
  return mode == WidthMode::tuned ? "tuned" : "theoretical";
}

/// Which closed form defines the CRTM truncation threshold.
enum class ThresholdForm {
  algorithm,  // 2 (u / ln(4T/delta))^(1/(1+eps)) (d ln(.) / kappa)^(1/2) T^((1-eps)/(2(1+eps)))
  appendix,   // 2 (u ln(4T/delta))^(1/(1+eps)) (d kappa ln(.))^(1/2) T^((1-eps)/(2(1+eps)))
};

/**
 * Inputs shared by every policy. Build with make_params() so that lambda,
 * the link constants and the moment bounds stay consistent.
 */
struct PolicyParams {
  Eigen::Index d = 1;
  double delta = 0.01;
  double epsilon = 1.0;
  double u = 0.0;  // bound on E|y|^(1+eps)
  double v = 0.0;  // bound on E|eta|^(1+eps)
  LinkSpec link;
  double lambda = 1.0;
  std::uint64_t T = 1;  // pull budget
  double c = 1.0;
  WidthMode width_mode = WidthMode::tuned;
  double alpha = 0.62;

  ThresholdForm threshold_form = ThresholdForm::algorithm;
  std::optional<double> threshold_override;  // replaces the CRTM threshold
  std::optional<double> radius_override;     // replaces every confidence width
  std::optional<std::size_t> replay_override;  // replaces r for CRMM / MENU
  std::optional<double> tofu_truncation_scale;  // c_h in h_t = c_h t^((1-eps)/(2(1+eps)))

  double S() const { return link.S; }
  double kappa() const { return link.kappa; }
  double L() const { return link.L; }
  double U() const { return link.U; }
};

/// u = 2^eps (U^(1+eps) + v), from |a + b|^p <= 2^(p-1) (|a|^p + |b|^p).
inline double raw_moment_bound(double U, double v, double epsilon) {
  return std::pow(2.0, epsilon) * (std::pow(U, 1.0 + epsilon) + v);
}

inline PolicyParams make_params(Eigen::Index d, std::uint64_t T, const LinkSpec& link,
                                const NoiseSpec& noise, double delta = 0.01,
                                double epsilon = 1.0) {
  if (d < 1) throw std::invalid_argument("make_params: d must be >= 1");
  if (T < 1) throw std::invalid_argument("make_params: T must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("make_params: delta in (0,1)");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("make_params: epsilon in (0,1]");
  }
  validate(noise, epsilon);
  PolicyParams p;
  p.d = d;
  p.T = T;
  p.link = link;
  p.delta = delta;
  p.epsilon = epsilon;
  p.lambda = std::max(1.0, link.kappa / 2.0);
  p.v = moment_bound(noise, epsilon);
  p.u = raw_moment_bound(link.U, p.v, epsilon);
  return p;
}

inline void check_tuned_c(const PolicyParams& p) {
  if (p.width_mode == WidthMode::tuned && !(p.c >= 1e-4 && p.c <= 1.0)) {
    throw std::invalid_argument("tuned width multiplier c must lie in [1e-4, 1]");
  }
}

/// ln(1 + kappa n / (2 lambda d)), the log factor of the elliptical potential.
inline double potential_log(const PolicyParams& p, double n) {
  return std::log1p(p.kappa() * n / (2.0 * p.lambda * static_cast<double>(p.d)));
}

/// (4d / kappa) ln(1 + kappa n / (2 lambda d)): bound on sum ||x||^2_{V^-1} after n ONS updates.
inline double elliptical_potential_bound(const PolicyParams& p, double n) {
  return 4.0 * static_cast<double>(p.d) / p.kappa() * potential_log(p, n);
}

/// View of a confidence region {theta : ||theta - center||^2_V <= radius}.
struct ConfidenceEllipsoid {
  const Vector& center;
  const SpdState& metric;
  double radius;
};

inline bool contains(const ConfidenceEllipsoid& e, const Vector& theta) {
  const double dist = quad_norm(e.metric, theta - e.center, Metric::V);
  return dist * dist <= e.radius;
}

struct Selection {
  Eigen::Index index = 0;
  double score = 0.0;
  double beta = 0.0;  // ||x||_{V^-1} of the chosen arm
  Vector witness;     // maximizing point of the ellipsoid
};

/**
 * Optimistic arm choice: argmax_x <x, center> + sqrt(radius) ||x||_{V^-1},
 * the closed form of max over the ellipsoid of <x, theta>. Ties go to the
 * lowest index.
 */
inline Selection ucb_select(const ConfidenceEllipsoid& e, const ArmSet& arms) {
  if (arms.rows() == 0) throw std::invalid_argument("ucb_select: empty arm set");
  const double scale = std::sqrt(std::max(0.0, e.radius));
  const Matrix projected = arms * e.metric.inv();  // rows: (V^-1 x)^T
  const Vector mean = arms * e.center;
  Selection best;
  best.score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < arms.rows(); ++i) {
    const double q = projected.row(i).dot(arms.row(i));
    const double beta = q > 0.0 ? std::sqrt(q) : 0.0;
    const double score = mean(i) + scale * beta;
    if (score > best.score) {
      best.index = i;
      best.score = score;
      best.beta = beta;
    }
  }
  best.witness = e.center;
  if (best.beta > 0.0) {
    best.witness += (scale / best.beta) * projected.row(best.index).transpose();
  }
  return best;
}

/**
 * Online Newton step shared by the ONS-based policies:
 * V <- V + (kappa/2) x x^T, then theta <- Proj_V(theta - V^-1 grad) onto
 * the ball of radius S.
 */
class OnsState {
 public:
  explicit OnsState(const PolicyParams& p)
      : link_(p.link), metric_(p.d, p.lambda), center_(Vector::Zero(p.d)) {}

  const SpdState& metric() const { return metric_; }
  const Vector& center() const { return center_; }
  const LinkSpec& link() const { return link_; }
  std::uint64_t updates() const { return updates_; }

  void update(const Vector& x, double y) {
    const double residual = link_value(link_, x.dot(center_)) - y;
    metric_.rank_one_update(x, link_.kappa / 2.0);
    const Vector step = center_ - residual * (metric_.inv() * x);
    center_ = project_ball(metric_, step, link_.S);
    ++updates_;
  }

 private:
  LinkSpec link_;
  SpdState metric_;
  Vector center_;
  std::uint64_t updates_ = 0;
};

/// Common interface of all bandit policies driven by the harness.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;

  /// Pulls consumed by one decision round.
  virtual std::size_t pulls_per_round() const { return 1; }

  /// Confidence region used for the next selection.
  virtual ConfidenceEllipsoid ellipsoid() const = 0;

  virtual Selection select(const ArmSet& arms) { return ucb_select(ellipsoid(), arms); }

  /// Feed the rewards of one decision round (pulls_per_round() values).
  virtual void observe(const Vector& arm, std::span<const double> rewards) = 0;

  /// Decision rounds completed.
  virtual std::uint64_t rounds() const = 0;

  /// True for the online Newton step policies, whose per-round state is O(d^2).
  virtual bool ons_based() const { return false; }

  /// Number of stored past observations (zero for online policies).
  virtual std::size_t history_size() const { return 0; }

 protected:
  static void expect_rewards(std::span<const double> rewards, std::size_t n, std::string_view who) {
    if (rewards.size() != n) {
      throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(n) +
                                  " rewards, got " + std::to_string(rewards.size()));
    }
  }
};

}  // namespace htglb
