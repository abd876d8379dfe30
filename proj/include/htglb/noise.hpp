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
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "htglb/rng.hpp"

namespace htglb {

enum class NoiseKind { none, student_t, pareto };

/**
 * Law of the additive reward noise.
 *
 * `moment_bound` is the declared bound v on E|eta|^(1+epsilon) used by the
 * theoretical confidence widths. Pareto noise is used as-is, without
 * centering, so it has positive mean.
 */
struct NoiseSpec {
  NoiseKind kind = NoiseKind::student_t;
  double nu = 3.0;          // student_t degrees of freedom
  double shape = 3.0;       // pareto s
  double scale = 0.01;      // pareto x_m
  double moment_bound = 0;  // v; 0 means "derive from the law"

  static NoiseSpec none() {
    NoiseSpec s;
    s.kind = NoiseKind::none;
    return s;
  }
  static NoiseSpec student_t(double nu) {
    NoiseSpec s;
    s.kind = NoiseKind::student_t;
    s.nu = nu;
    return s;
  }
  static NoiseSpec pareto(double shape, double scale) {
    NoiseSpec s;
    s.kind = NoiseKind::pareto;
    s.shape = shape;
    s.scale = scale;
    return s;
  }
};

inline NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "student_t" || name == "student-t" || name == "t") return NoiseKind::student_t;
  if (name == "pareto") return NoiseKind::pareto;
  if (name == "none") return NoiseKind::none;
  throw std::invalid_argument("unknown noise kind: " + std::string(name));
}

inline std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::student_t: return "student_t";
    case NoiseKind::pareto: return "pareto";
  }
  return "unknown";
}

/// E|eta|^p under the noise law; infinite when the moment does not exist.
inline double absolute_moment(const NoiseSpec& spec, double p) {
  switch (spec.kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::student_t: {
      const double nu = spec.nu;
      if (p >= nu) return std::numeric_limits<double>::infinity();
      const double log_m = 0.5 * p * std::log(nu) + std::lgamma(0.5 * (p + 1.0)) +
                           std::lgamma(0.5 * (nu - p)) - 0.5 * std::log(std::numbers::pi) -
                           std::lgamma(0.5 * nu);
      return std::exp(log_m);
    }
    case NoiseKind::pareto: {
      if (p >= spec.shape) return std::numeric_limits<double>::infinity();
      return spec.shape * std::pow(spec.scale, p) / (spec.shape - p);
    }
  }
  return std::numeric_limits<double>::infinity();
}

inline void validate(const NoiseSpec& spec, double epsilon) {
  switch (spec.kind) {
    case NoiseKind::none:
      return;
    case NoiseKind::student_t:
      if (!(spec.nu > 1.0 + epsilon)) {
        throw std::invalid_argument("student_t noise needs nu > 1 + epsilon");
      }
      return;
    case NoiseKind::pareto:
      if (!(spec.shape > 1.0 + epsilon) || !(spec.scale > 0.0)) {
        throw std::invalid_argument("pareto noise needs shape > 1 + epsilon and scale > 0");
      }
      return;
  }
}

/// Declared v if set, otherwise the exact (1+epsilon)-th absolute moment.
inline double moment_bound(const NoiseSpec& spec, double epsilon) {
  if (spec.moment_bound > 0.0) return spec.moment_bound;
  return absolute_moment(spec, 1.0 + epsilon);
}

/// x_m (1 - u)^(-1/s): the Pareto quantile at u in [0, 1).
inline double pareto_quantile(double shape, double scale, double u) {
  return scale * std::pow(1.0 - u, -1.0 / shape);
}

inline double sample_noise(const NoiseSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::student_t: {
      const double z = rng.normal();
      const double w = rng.chi_square(spec.nu);
      return z / std::sqrt(w / spec.nu);
    }
    case NoiseKind::pareto:
      return pareto_quantile(spec.shape, spec.scale, rng.uniform());
  }
  return 0.0;
}

/// The ceil(r/2)-th smallest value (lower median for even r).
inline double order_median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("order_median: empty input");
  std::vector<double> buf(values.begin(), values.end());
  const std::size_t k = (buf.size() - 1) / 2;
  std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
  return buf[k];
}

/**
 * Randomly permutes `values`, splits them into floor(n / group_size) groups
 * of `group_size` (dropping the remainder) and returns the mean of the group
 * medians.
 */
inline double mean_of_medians(std::span<const double> values, std::size_t group_size,
                              RngStream& rng) {
  if (group_size == 0) throw std::invalid_argument("mean_of_medians: group_size must be >= 1");
  if (group_size > values.size()) {
    throw std::invalid_argument("mean_of_medians: group_size exceeds the number of values");
  }
  std::vector<double> buf(values.begin(), values.end());
  for (std::size_t i = buf.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_index(i);
    std::swap(buf[i - 1], buf[j]);
  }
  const std::size_t groups = buf.size() / group_size;
  // Running mean, so that equal medians give back exactly that value.
  double mean = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    const double m = order_median(std::span<const double>(buf.data() + g * group_size, group_size));
    mean += (m - mean) / static_cast<double>(g + 1);
  }
  return mean;
}

}  // namespace htglb
