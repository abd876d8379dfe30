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

// Brute-force reference implementations shared by the unit tests and the
// acceptance gate. Deliberately naive: no code is shared with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace htglb::oracle {

/// argmin ||theta - u||_V over the disc ||theta||_2 <= radius, by dense search.
/// The constrained optimum of a convex objective whose free minimum lies
/// outside the disc sits on the boundary circle, so the search scans the
/// angle at resolution 1e-5 rad and refines around the best sample.
inline Eigen::Vector2d project_disc(const Eigen::Matrix2d& v, const Eigen::Vector2d& u,
                                    double radius) {
  if (u.norm() <= radius) return u;
  auto cost = [&](double a) {
    const Eigen::Vector2d th(radius * std::cos(a), radius * std::sin(a));
    const Eigen::Vector2d e = th - u;
    return e.dot(v * e);
  };
  const int n = 628319;
  double best_a = 0.0;
  double best = cost(0.0);
  for (int i = 1; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    const double c = cost(a);
    if (c < best) {
      best = c;
      best_a = a;
    }
  }
  const double step = 2.0 * std::numbers::pi / n;
  for (int i = -1000; i <= 1000; ++i) {
    const double a = best_a + step * i / 1000.0;
    const double c = cost(a);
    if (c < best) {
      best = c;
      best_a = a;
    }
  }
  return {radius * std::cos(best_a), radius * std::sin(best_a)};
}

/// ceil(n/2)-th smallest value by full sort.
inline double sorted_lower_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return xs[(xs.size() + 1) / 2 - 1];
}

/// Mean of lower medians of consecutive groups of an already permuted list.
inline double grouped_median_mean(const std::vector<double>& permuted, std::size_t group) {
  const std::size_t groups = permuted.size() / group;
  double acc = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<double> part(permuted.begin() + static_cast<std::ptrdiff_t>(g * group),
                             permuted.begin() + static_cast<std::ptrdiff_t>((g + 1) * group));
    acc += sorted_lower_median(part);
  }
  return acc / static_cast<double>(groups);
}

}  // namespace htglb::oracle
