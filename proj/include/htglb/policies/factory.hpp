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

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "htglb/env.hpp"
#include "htglb/policies/baselines.hpp"
#include "htglb/policies/common.hpp"
#include "htglb/policies/crmm.hpp"
#include "htglb/policies/crtm.hpp"
#include "htglb/policies/menu.hpp"
#include "htglb/policies/reference.hpp"
#include "htglb/policies/tofu.hpp"
#include "htglb/rng.hpp"

namespace htglb {

inline constexpr std::array<std::string_view, 10> kPolicyNames = {
    "crtm", "crmm", "ol2m", "gloc", "ol2m_mom", "gloc_mom", "tofu", "menu", "oracle", "random"};

inline bool is_known_policy(std::string_view name) {
  for (auto n : kPolicyNames) {
    if (n == name) return true;
  }
  return false;
}

/// Pulls per decision round of a policy, without building it.
inline std::size_t pulls_per_round(std::string_view name, const PolicyParams& p) {
  if (name == "crmm" || name == "menu") return crmm_replays(p);
  if (name == "ol2m_mom" || name == "gloc_mom") return mom_replays(p);
  if (!is_known_policy(name)) throw std::invalid_argument("unknown policy: " + std::string(name));
  return 1;
}

/// `rng` feeds policies with internal randomness (mom wrappers, random play).
inline std::unique_ptr<Policy> make_policy(std::string_view name, const PolicyParams& p,
                                           const BanditInstance& instance, RngStream rng) {
  if (name == "crtm") return std::make_unique<Crtm>(p);
  if (name == "crmm") return std::make_unique<Crmm>(p);
  if (name == "ol2m") return std::make_unique<OnsBaseline>(p, BaselineKind::ol2m);
  if (name == "gloc") return std::make_unique<OnsBaseline>(p, BaselineKind::gloc);
  if (name == "ol2m_mom") return std::make_unique<MomWrapper>(p, BaselineKind::ol2m, std::move(rng));
  if (name == "gloc_mom") return std::make_unique<MomWrapper>(p, BaselineKind::gloc, std::move(rng));
  if (name == "tofu") return std::make_unique<Tofu>(p);
  if (name == "menu") return std::make_unique<Menu>(p);
  if (name == "oracle") return std::make_unique<OraclePolicy>(p, instance);
  if (name == "random") return std::make_unique<UniformRandomPolicy>(p, std::move(rng));
  throw std::invalid_argument("unknown policy: " + std::string(name));
}

}  // namespace htglb
