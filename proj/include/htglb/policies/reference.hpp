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

// Reference policies for validating the harness: the clairvoyant oracle
// and uniform random play. Neither learns.

#include "htglb/env.hpp"
#include "htglb/policies/common.hpp"
#include "htglb/rng.hpp"

namespace htglb {

class OraclePolicy final : public Policy {
 public:
  OraclePolicy(const PolicyParams& p, const BanditInstance& instance)
      : instance_(instance), center_(instance.theta_star()), metric_(p.d, p.lambda) {}

  std::string_view name() const override { return "oracle"; }
  std::uint64_t rounds() const override { return rounds_; }
  ConfidenceEllipsoid ellipsoid() const override { return {center_, metric_, 0.0}; }

  Selection select(const ArmSet& arms) override {
    Selection s;
    s.index = arm_values(instance_, arms).best;
    s.score = arms.row(s.index).dot(center_);
    s.beta = quad_norm(metric_, arms.row(s.index).transpose(), Metric::Vinv);
    s.witness = center_;
    return s;
  }

  void observe(const Vector&, std::span<const double>) override { ++rounds_; }

 private:
  const BanditInstance& instance_;
  Vector center_;
  SpdState metric_;
  std::uint64_t rounds_ = 0;
};

class UniformRandomPolicy final : public Policy {
 public:
  UniformRandomPolicy(const PolicyParams& p, RngStream rng)
      : center_(Vector::Zero(p.d)), metric_(p.d, p.lambda), rng_(std::move(rng)) {}

  std::string_view name() const override { return "random"; }
  std::uint64_t rounds() const override { return rounds_; }
  ConfidenceEllipsoid ellipsoid() const override { return {center_, metric_, 0.0}; }

  Selection select(const ArmSet& arms) override {
    Selection s;
    s.index = static_cast<Eigen::Index>(rng_.uniform_index(static_cast<std::uint64_t>(arms.rows())));
    s.beta = quad_norm(metric_, arms.row(s.index).transpose(), Metric::Vinv);
    s.witness = center_;
    return s;
  }

  void observe(const Vector&, std::span<const double>) override { ++rounds_; }

 private:
  Vector center_;
  SpdState metric_;
  RngStream rng_;
  std::uint64_t rounds_ = 0;
};

}  // namespace htglb
