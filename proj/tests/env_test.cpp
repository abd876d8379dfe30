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

#include <cmath>

#include <gtest/gtest.h>

#include "htglb/env.hpp"

namespace htglb {
namespace {

constexpr double kSigma1MinusHalf = 0.2310585786300048792511592418218362743651;

BanditInstance instance_with(const LinkSpec& link, std::initializer_list<std::initializer_list<double>> rows,
                             Vector theta, NoiseSpec noise = NoiseSpec::none()) {
  ArmSet arms(static_cast<Eigen::Index>(rows.size()), theta.size());
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) arms(i, j++) = v;
    ++i;
  }
  return BanditInstance(std::move(theta), std::move(arms), link, noise);
}

TEST(InstanceTest, ThetaStarIsUniformUnitVector) {
  RngStream rng(1, 0);
  const LinkSpec link = make_link(LinkKind::logistic, 1.0);
  const BanditInstance one = make_instance(rng, 1, 1, ArmMode::fixed, link, NoiseSpec::none());
  EXPECT_DOUBLE_EQ(one.theta_star()(0), 1.0);
  EXPECT_DOUBLE_EQ(one.arms()(0, 0), 1.0);

  const BanditInstance ten = make_instance(rng, 10, 20, ArmMode::fixed, link, NoiseSpec::none());
  EXPECT_NEAR(ten.theta_star().norm(), 1.0, 1e-15);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(ten.theta_star()(i), 0.316228, 1e-6);
}

TEST(InstanceTest, ArmsAreUnitAndPositiveAndReproducible) {
  const LinkSpec link = make_link(LinkKind::logistic, 1.0);
  RngStream a(99, 3), b(99, 3);
  const BanditInstance x = make_instance(a, 2, 20, ArmMode::fixed, link, NoiseSpec::none());
  const BanditInstance y = make_instance(b, 2, 20, ArmMode::fixed, link, NoiseSpec::none());
  ASSERT_EQ(x.arms().rows(), 20);
  EXPECT_EQ(x.arms(), y.arms());
  for (Eigen::Index i = 0; i < 20; ++i) {
    EXPECT_NEAR(x.arms().row(i).norm(), 1.0, 1e-14);
    EXPECT_GE(x.arms().row(i).minCoeff(), 0.0);
  }
}

TEST(InstanceTest, FreshArmsAreAFunctionOfTheRound) {
  const LinkSpec link = make_link(LinkKind::logistic, 1.0);
  RngStream rng(4, 4);
  const BanditInstance inst = make_instance(rng, 3, 5, ArmMode::fresh, link, NoiseSpec::none());
  const ArmSet r7 = inst.arms_for_round(7);
  EXPECT_EQ(inst.arms_for_round(7), r7);
  EXPECT_NE(inst.arms_for_round(8), r7);
  EXPECT_EQ(inst.arms_for_round(1), inst.arms());
  EXPECT_EQ(inst.num_arms(), 5);
}

TEST(PullTest, NoiselessRewards) {
  const LinkSpec logistic = make_link(LinkKind::logistic, 1.0);
  const BanditInstance a = instance_with(logistic, {{0.0, 1.0}}, Vector::Unit(2, 0));
  RngStream rng(1, 1);
  for (double y : a.pull(a.arms().row(0).transpose(), 5, rng)) EXPECT_EQ(y, 0.5);

  const LinkSpec identity = make_link(LinkKind::identity, 1.0);
  Vector theta(2);
  theta << 0.6, 0.8;
  const BanditInstance b = instance_with(identity, {{0.6, 0.8}}, theta);
  EXPECT_NEAR(b.pull(theta, 1, rng)[0], 1.0, 1e-15);
}

TEST(PullTest, StudentTMeanIsUnbiased) {
  const LinkSpec logistic = make_link(LinkKind::logistic, 1.0);
  Vector theta = Vector::Constant(4, 0.5);
  const BanditInstance inst =
      instance_with(logistic, {{1.0, 0.0, 0.0, 0.0}}, theta, NoiseSpec::student_t(3.0));
  RngStream rng(12, 0);
  const Vector x = inst.arms().row(0).transpose();
  const auto ys = inst.pull(x, 100000, rng);
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(ys.size());
  EXPECT_NEAR(mean, sigmoid(0.5), 0.02);
}

TEST(RegretTest, HandValues) {
  const LinkSpec identity = make_link(LinkKind::identity, 1.0);
  const BanditInstance a = instance_with(identity, {{0.9}, {0.4}}, Vector::Ones(1));
  EXPECT_EQ(instant_regret(a, a.arms(), 0), 0.0);
  EXPECT_NEAR(instant_regret(a, a.arms(), 1), 0.5, 1e-15);

  const LinkSpec logistic = make_link(LinkKind::logistic, 1.0);
  const BanditInstance b = instance_with(logistic, {{1.0}, {0.0}}, Vector::Ones(1));
  EXPECT_NEAR(instant_regret(b, b.arms(), 1), kSigma1MinusHalf, 1e-15);
  EXPECT_THROW(instant_regret(b, b.arms(), 2), std::out_of_range);
}

TEST(RegretTest, BestArmIsInvariantToMonotoneLink) {
  RngStream rng(31, 1);
  for (int k = 0; k < 20; ++k) {
    const BanditInstance lin =
        make_instance(rng, 5, 30, ArmMode::fixed, make_link(LinkKind::identity, 1.0), NoiseSpec::none());
    const BanditInstance log(lin.theta_star(), lin.arms(), make_link(LinkKind::logistic, 1.0),
                             NoiseSpec::none());
    EXPECT_EQ(arm_values(lin, lin.arms()).best, arm_values(log, log.arms()).best);
  }
}

TEST(ArmModeTest, ParsesNames) {
  EXPECT_EQ(parse_arm_mode("static"), ArmMode::fixed);
  EXPECT_EQ(parse_arm_mode("fresh"), ArmMode::fresh);
  EXPECT_THROW(parse_arm_mode("moving"), std::invalid_argument);
}

}  // namespace
}  // namespace htglb
