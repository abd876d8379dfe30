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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "htglb/glm.hpp"
#include "htglb/linalg.hpp"
#include "htglb/noise.hpp"
#include "htglb/rng.hpp"

namespace htglb {

/// Arms are the rows of a K x d matrix.
using ArmSet = Matrix;

enum class ArmMode { fixed, fresh };

inline ArmMode parse_arm_mode(std::string_view name) {
  if (name == "static" || name == "fixed") return ArmMode::fixed;
  if (name == "fresh") return ArmMode::fresh;
  throw std::invalid_argument("unknown arm mode: " + std::string(name));
}

inline std::string_view to_string(ArmMode mode) {
  return mode == ArmMode::fixed ? "static" : "fresh";
}

/// K arms with components uniform on [0, 1], each scaled to unit l2 norm.
inline ArmSet draw_unit_arms(RngStream& rng, Eigen::Index d, Eigen::Index k) {
  ArmSet arms(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) arms(i, j) = rng.uniform();
    double n = arms.row(i).norm();
    while (n == 0.0) {  // probability zero, but keep the unit-norm invariant unconditional
      for (Eigen::Index j = 0; j < d; ++j) arms(i, j) = rng.uniform();
      n = arms.row(i).norm();
    }
    arms.row(i) /= n;
  }
  return arms;
}

/**
 * A simulated generalized linear bandit: rewards are mu(x^T theta*) + eta.
 *
 * In static mode the arm set is drawn once; in fresh mode the arm set of
 * round t is a deterministic function of (arm stream, t), so it can be
 * regenerated in any order.
 */
class BanditInstance {
 public:
  BanditInstance(Vector theta_star, ArmSet arms, LinkSpec link, NoiseSpec noise)
      : theta_star_(std::move(theta_star)),
        arms_(std::move(arms)),
        link_(std::move(link)),
        noise_(noise),
        mode_(ArmMode::fixed) {}

  BanditInstance(Vector theta_star, Eigen::Index k, RngStream arm_stream, LinkSpec link,
                 NoiseSpec noise)
      : theta_star_(std::move(theta_star)),
        link_(std::move(link)),
        noise_(noise),
        mode_(ArmMode::fresh),
        fresh_k_(k),
        fresh_seed_(arm_stream.seed()),
        fresh_stream_(arm_stream.stream_id()) {
    arms_ = arms_for_round(1);
  }

  const Vector& theta_star() const { return theta_star_; }
  const LinkSpec& link() const { return link_; }
  const NoiseSpec& noise() const { return noise_; }
  ArmMode mode() const { return mode_; }
  Eigen::Index dim() const { return theta_star_.size(); }
  Eigen::Index num_arms() const { return mode_ == ArmMode::fixed ? arms_.rows() : fresh_k_; }

  /// Arm set of decision round t (t >= 1).
  ArmSet arms_for_round(std::uint64_t t) const {
    if (mode_ == ArmMode::fixed) return arms_;
    RngStream rng(fresh_seed_, splitmix64(fresh_stream_ ^ splitmix64(t)));
    return draw_unit_arms(rng, dim(), fresh_k_);
  }

  /// The static arm set (round 1 in fresh mode).
  const ArmSet& arms() const { return arms_; }

  double mean_reward(const Vector& x) const { return link_value(link_, x.dot(theta_star_)); }

  std::vector<double> pull(const Vector& x, std::size_t n_plays, RngStream& rng) const {
    std::vector<double> out(n_plays);
    pull_into(x, out, rng);
    return out;
  }

  void pull_into(const Vector& x, std::span<double> out, RngStream& rng) const {
    const double mean = mean_reward(x);
    for (double& y : out) y = mean + sample_noise(noise_, rng);
  }

 private:
  Vector theta_star_;
  ArmSet arms_;
  LinkSpec link_;
  NoiseSpec noise_;
  ArmMode mode_;
  Eigen::Index fresh_k_ = 0;
  std::uint64_t fresh_seed_ = 0;
  std::uint64_t fresh_stream_ = 0;
};

/// theta* = 1/sqrt(d) and K unit-norm arms with uniform [0,1] components.
inline BanditInstance make_instance(RngStream& rng, Eigen::Index d, Eigen::Index k, ArmMode mode,
                                    const LinkSpec& link, const NoiseSpec& noise) {
  if (d < 1) throw std::invalid_argument("make_instance: d must be >= 1");
  if (k < 1) throw std::invalid_argument("make_instance: K must be >= 1");
  Vector theta = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  if (mode == ArmMode::fixed) {
    return BanditInstance(std::move(theta), draw_unit_arms(rng, d, k), link, noise);
  }
  RngStream arm_stream(rng.seed(), rng.next_u64());
  return BanditInstance(std::move(theta), k, arm_stream, link, noise);
}

/// Expected reward of every arm in the set and the best index (lowest on ties).
struct ArmValues {
  std::vector<double> means;
  Eigen::Index best = 0;
};

inline ArmValues arm_values(const BanditInstance& instance, const ArmSet& arms) {
  ArmValues v;
  v.means.resize(static_cast<std::size_t>(arms.rows()));
  for (Eigen::Index i = 0; i < arms.rows(); ++i) {
    v.means[static_cast<std::size_t>(i)] = instance.mean_reward(arms.row(i).transpose());
    if (v.means[static_cast<std::size_t>(i)] > v.means[static_cast<std::size_t>(v.best)]) v.best = i;
  }
  return v;
}

/// mu(x_best^T theta*) - mu(x_chosen^T theta*) for a single pull.
inline double instant_regret(const BanditInstance& instance, const ArmSet& arms,
                             Eigen::Index chosen) {
  if (chosen < 0 || chosen >= arms.rows()) {
    throw std::out_of_range("instant_regret: arm index out of range");
  }
  const ArmValues v = arm_values(instance, arms);
  const double gap = v.means[static_cast<std::size_t>(v.best)] -
                     v.means[static_cast<std::size_t>(chosen)];
  return gap > 0.0 ? gap : 0.0;
}

struct TraceRow {
  std::uint64_t round = 0;       // decision round t
  std::uint64_t pulls = 0;       // cumulative pulls after this round
  Eigen::Index arm = 0;
  double inst_regret = 0.0;      // per pull
  double cum_regret = 0.0;
  double beta = 0.0;             // ||x_t||_{V_t^-1}
  std::optional<bool> contained;
  std::int64_t wall_ns = 0;      // cumulative select + observe time
};

struct Trace {
  std::string policy;
  std::uint64_t repetition = 0;
  std::vector<TraceRow> rows;
};

}  // namespace htglb
