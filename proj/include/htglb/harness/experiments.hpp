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
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "htglb/harness/config.hpp"
#include "htglb/harness/runner.hpp"

namespace htglb {

/// n log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(std::size_t n, double lo = 1e-4, double hi = 1.0) {
  if (n == 0) throw std::invalid_argument("log_grid: n must be >= 1");
  if (n == 1) return {hi};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = std::pow(10.0, std::log10(lo) + f * (std::log10(hi) - std::log10(lo)));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

struct TuneResult {
  std::string policy;
  double best_c = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_final_regret;  // one per grid point
};

/// True for policies whose width is scaled by the tuning multiplier.
inline bool is_tunable(const PolicyConfig& pc) {
  return pc.name != "oracle" && pc.name != "random" && pc.width_mode == WidthMode::tuned &&
         !pc.radius_override;
}

/**
 * Grid search of the width multiplier for every tunable policy in `cfg`,
 * using `cfg.tune_repetitions` repetitions per grid point. The c with the
 * smallest mean final regret wins; ties keep the earlier grid point.
 */
inline std::vector<TuneResult> tune_c(const ExperimentConfig& cfg, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("tune_c: empty grid");
  for (double c : grid) {
    if (!(c >= 1e-4 && c <= 1.0)) throw std::invalid_argument("tune_c: grid must lie in [1e-4, 1]");
  }
  std::vector<TuneResult> out;
  for (const PolicyConfig& pc : cfg.policies) {
    if (!is_tunable(pc)) continue;
    TuneResult tr;
    tr.policy = pc.name;
    tr.grid = grid;
    double best = std::numeric_limits<double>::infinity();
    for (double c : grid) {
      ExperimentConfig sweep = cfg;
      sweep.repetitions = std::max<std::uint64_t>(1, cfg.tune_repetitions);
      sweep.checkpoints = 1;
      sweep.diagnostics = {};
      sweep.diagnostics.potential = false;
      sweep.policies = {pc};
      sweep.policies[0].c = c;
      const ExperimentResult r = run_experiment(sweep);
      const double m = r.summaries.front().final_mean;
      tr.mean_final_regret.push_back(m);
      if (m < best) {
        best = m;
        tr.best_c = c;
      }
    }
    out.push_back(std::move(tr));
  }
  return out;
}

/// Copy of `cfg` with each tuned policy's c replaced by its tuning result.
inline ExperimentConfig apply_tuning(ExperimentConfig cfg, const std::vector<TuneResult>& tuned) {
  for (PolicyConfig& pc : cfg.policies) {
    for (const TuneResult& tr : tuned) {
      if (tr.policy == pc.name && is_tunable(pc)) pc.c = tr.best_c;
    }
  }
  return cfg;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need two or more paired points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: need positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("loglog_slope: budgets must differ");
  return (n * sxy - sx * sy) / denom;
}

struct BenchResult {
  std::string policy;
  std::vector<std::uint64_t> budgets;
  std::vector<double> seconds;  // best-of-trials select + observe time per budget
  double slope = 0.0;
};

/**
 * Wall time of select + observe at each pull budget, one repetition per
 * trial, keeping the fastest of `cfg.bench_trials` trials. Trials after a
 * run longer than two seconds are skipped, since timer jitter is negligible
 * at that scale.
 */
inline std::vector<BenchResult> bench_runtime(const ExperimentConfig& cfg,
                                              const std::vector<std::uint64_t>& budgets) {
  if (budgets.size() < 2) throw std::invalid_argument("bench_runtime: need at least two budgets");
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] <= budgets[i - 1]) {
      throw std::invalid_argument("bench_runtime: budgets must be increasing");
    }
  }
  std::vector<BenchResult> out;
  for (const PolicyConfig& pc : cfg.policies) {
    BenchResult br;
    br.policy = pc.name;
    br.budgets = budgets;
    for (std::uint64_t T : budgets) {
      ExperimentConfig one = cfg;
      one.T = T;
      one.repetitions = 1;
      one.checkpoints = 1;
      one.diagnostics = {};
      one.diagnostics.potential = false;
      one.policies = {pc};
      validate(one);
      double best = std::numeric_limits<double>::infinity();
      const std::uint64_t trials = std::max<std::uint64_t>(1, cfg.bench_trials);
      for (std::uint64_t k = 0; k < trials; ++k) {
        const RunResult r = run_policy(one, pc, 0);
        best = std::min(best, static_cast<double>(r.wall_ns) * 1e-9);
        if (best > 2.0) break;
      }
      br.seconds.push_back(best);
    }
    std::vector<double> xs(budgets.begin(), budgets.end());
    br.slope = loglog_slope(xs, br.seconds);
    out.push_back(std::move(br));
  }
  return out;
}

struct ContainmentResult {
  std::string policy;
  double rate = 0.0;  // fraction of repetitions contained at every round
  std::uint64_t repetitions = 0;
  std::uint64_t instregret_violations = 0;
  std::uint64_t potential_violations = 0;
};

/// Runs `cfg` with containment tracking and reports full-horizon containment per policy.
inline std::vector<ContainmentResult> containment_check(ExperimentConfig cfg) {
  cfg.diagnostics.containment = true;
  cfg.diagnostics.instregret = true;
  const ExperimentResult r = run_experiment(cfg);
  std::vector<ContainmentResult> out;
  for (const PolicySummary& s : r.summaries) {
    out.push_back({s.policy, s.containment_rate.value_or(0.0), cfg.repetitions,
                   s.instregret_violations, s.potential_violations});
  }
  return out;
}

/// Sets every policy of `cfg` to theoretical widths.
inline ExperimentConfig with_theoretical_widths(ExperimentConfig cfg) {
  for (PolicyConfig& pc : cfg.policies) pc.width_mode = WidthMode::theoretical;
  return cfg;
}

}  // namespace htglb
