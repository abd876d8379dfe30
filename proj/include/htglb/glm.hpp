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
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "htglb/linalg.hpp"

namespace htglb {

enum class LinkKind { identity, logistic, custom };

struct LinkValue {
  double value;
  double derivative;
};

/**
 * Link function mu together with the constants it satisfies on [-S, S]:
 * mu'(z) >= kappa, mu is L-Lipschitz and |mu(z)| <= U.
 */
struct LinkSpec {
  LinkKind kind = LinkKind::logistic;
  double S = 1.0;
  double kappa = 0.0;
  double L = 0.0;
  double U = 0.0;
  // Only consulted for LinkKind::custom.
  std::function<LinkValue(double)> custom;
};

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline LinkValue link_eval(const LinkSpec& link, double z) {
  switch (link.kind) {
    case LinkKind::identity:
      return {z, 1.0};
    case LinkKind::logistic: {
      const double s = sigmoid(z);
      return {s, s * (1.0 - s)};
    }
    case LinkKind::custom:
      if (!link.custom) throw std::invalid_argument("link_eval: custom link has no function");
      return link.custom(z);
  }
  throw std::invalid_argument("link_eval: unknown link kind");
}

inline double link_value(const LinkSpec& link, double z) { return link_eval(link, z).value; }

struct LinkConstants {
  double kappa;
  double L;
  double U;
};

inline LinkConstants derive_constants(LinkKind kind, double S) {
  if (!(S > 0.0)) throw std::invalid_argument("derive_constants: S must be positive");
  switch (kind) {
    case LinkKind::logistic: {
      // sigma' is even and decreasing in |z|, so its minimum on [-S, S] sits at the endpoints.
      const double s = sigmoid(S);
      return {s * (1.0 - s), 0.25, 1.0};
    }
    case LinkKind::identity:
      return {1.0, 1.0, S};
    case LinkKind::custom:
      break;
  }
  throw std::invalid_argument("derive_constants: constants for this link kind must be supplied");
}

inline LinkSpec make_link(LinkKind kind, double S) {
  const LinkConstants c = derive_constants(kind, S);
  LinkSpec link;
  link.kind = kind;
  link.S = S;
  link.kappa = c.kappa;
  link.L = c.L;
  link.U = c.U;
  return link;
}

inline LinkKind parse_link_kind(std::string_view name) {
  if (name == "logistic" || name == "logit") return LinkKind::logistic;
  if (name == "identity" || name == "linear") return LinkKind::identity;
  throw std::invalid_argument("unknown link kind: " + std::string(name));
}

inline std::string_view to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::identity: return "identity";
    case LinkKind::logistic: return "logistic";
    case LinkKind::custom: return "custom";
  }
  return "unknown";
}

/// Gradient of the surrogate loss at theta: (-y + mu(x^T theta)) x.
inline Vector loss_gradient(const LinkSpec& link, const Vector& x, const Vector& theta, double y) {
  return (link_value(link, x.dot(theta)) - y) * x;
}

/// Cumulant m with m' = mu. Used only to check gradients by finite differences.
inline double cumulant(LinkKind kind, double z) {
  switch (kind) {
    case LinkKind::logistic:
      // ln(1 + e^z), stable for large |z|.
      return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    case LinkKind::identity:
      return 0.5 * z * z;
    case LinkKind::custom:
      break;
  }
  throw std::invalid_argument("cumulant: not available for this link kind");
}

}  // namespace htglb
