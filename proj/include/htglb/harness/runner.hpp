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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "htglb/env.hpp"
#include "htglb/harness/config.hpp"
#include "htglb/policies/factory.hpp"
#include "htglb/rng.hpp"

namespace htglb {

/// Sorted, de-duplicated log-spaced pull counts in [min(100, T), T], always ending at T.
inline std::vector<std::uint64_t> checkpoint_grid(std::uint64_t T, std::size_t n) {
  std::vector<std::uint64_t> grid;
  const double lo = static_cast<double>(std::min<std::uint64_t>(100, T));
  const double hi = static_cast<double>(T);
  if (n <= 1 || lo >= hi) return {T};
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    const double x = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    grid.push_back(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::llround(x)), 1, T));
  }
  grid.back() = T;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// Outcome of one (policy, repetition) job.
struct RunResult {
  Trace trace;
  std::vector<double> checkpoint_regret;  // cum regret at the largest pulls <= checkpoint
  double final_regret = 0.0;
  std::uint64_t decisions = 0;
  std::uint64_t pulls = 0;
  std::size_t pulls_per_round = 1;
  std::int64_t wall_ns = 0;
  bool ons_based = false;
  // Diagnostics; only meaningful when the corresponding flag was enabled.
  std::optional<bool> always_contained;
  std::uint64_t contained_rounds = 0;
  double potential_sum = 0.0;
  double potential_bound = 0.0;
  std::uint64_t potential_violations = 0;
  std::uint64_t instregret_checks = 0;
  std::uint64_t instregret_violations = 0;
  std::size_t max_history = 0;
};

/**
 * Runs one policy for one repetition until the pull budget is exhausted.
 *
 * The instance is built from the "arms" substream of the repetition, so all
 * policies of a repetition share the same arm set. Rewards come from a
 * per-policy noise substream. Wall time covers select and observe only.
 */
inline RunResult run_policy(const ExperimentConfig& cfg, const PolicyConfig& pc,
                            std::uint64_t rep) {
  const LinkSpec link = link_of(cfg);
  RngStream arm_rng = derive_stream(cfg.master_seed, rep, "arms");
  const BanditInstance instance = make_instance(arm_rng, cfg.d, cfg.K, cfg.arm_mode, link, cfg.noise);
  const PolicyParams params = params_for(cfg, pc);
  auto policy = make_policy(pc.name, params, instance,
                            derive_stream(cfg.master_seed, rep, "policy:" + pc.name));
  RngStream noise_rng = derive_stream(cfg.master_seed, rep, "noise:" + pc.name);

  const std::vector<std::uint64_t> grid = checkpoint_grid(cfg.T, cfg.checkpoints);
  const bool track_containment = cfg.diagnostics.containment || cfg.diagnostics.instregret;
  const std::size_t n = policy->pulls_per_round();
  const double n_d = static_cast<double>(n);
  const Vector& theta_star = instance.theta_star();

  RunResult res;
  res.trace.policy = pc.name;
  res.trace.repetition = rep;
  res.checkpoint_regret.assign(grid.size(), 0.0);
  res.pulls_per_round = n;
  res.ons_based = policy->ons_based();
  if (cfg.diagnostics.containment) res.always_contained = true;

  std::vector<double> rewards(n);
  ArmSet arms = instance.arms_for_round(1);
  ArmValues values = arm_values(instance, arms);
  std::optional<bool> pre_contained;
  if (track_containment) pre_contained = contains(policy->ellipsoid(), theta_star);

  std::uint64_t t = 0;
  std::uint64_t pulls = 0;
  double cum = 0.0;
  std::int64_t wall = 0;
  std::size_t next_cp = 0;
  TraceRow last;

  auto flush_checkpoints = [&]() {
    while (next_cp < grid.size() && pulls + n > grid[next_cp]) {
      res.checkpoint_regret[next_cp] = cum;
      if (cfg.trace_mode == TraceMode::checkpoints && t > 0 &&
          (res.trace.rows.empty() || res.trace.rows.back().round != t)) {
        res.trace.rows.push_back(last);
      }
      ++next_cp;
    }
  };
  flush_checkpoints();

  using clock = std::chrono::steady_clock;
  while (pulls + n <= cfg.T) {
    ++t;
    if (instance.mode() == ArmMode::fresh && t > 1) {
      arms = instance.arms_for_round(t);
      values = arm_values(instance, arms);
    }

    const auto t0 = clock::now();
    const Selection sel = policy->select(arms);
    const double radius_t = policy->ellipsoid().radius;
    const auto t1 = clock::now();
    const Vector x = arms.row(sel.index).transpose();
    instance.pull_into(x, rewards, noise_rng);
    const auto t2 = clock::now();
    policy->observe(x, rewards);
    const auto t3 = clock::now();
    wall += std::chrono::duration_cast<std::chrono::nanoseconds>((t1 - t0) + (t3 - t2)).count();

    const double gap = std::max(0.0, values.means[static_cast<std::size_t>(values.best)] -
                                         values.means[static_cast<std::size_t>(sel.index)]);
    cum += n_d * gap;
    pulls += n;

    if (res.ons_based) {
      res.potential_sum += sel.beta * sel.beta;
      if (cfg.diagnostics.potential) {
        res.potential_bound = elliptical_potential_bound(params, static_cast<double>(t));
        if (res.potential_sum > res.potential_bound + 1e-6) ++res.potential_violations;
      }
    }
    if (cfg.diagnostics.instregret && pre_contained.value_or(false)) {
      ++res.instregret_checks;
      const double bound = 2.0 * params.L() * std::sqrt(std::max(0.0, radius_t)) * sel.beta;
      if (gap > bound + 1e-9) ++res.instregret_violations;
    }

    std::optional<bool> contained;
    if (track_containment) {
      contained = contains(policy->ellipsoid(), theta_star);
      if (*contained) ++res.contained_rounds;
      if (res.always_contained && !*contained) res.always_contained = false;
      pre_contained = contained;
    }
    res.max_history = std::max(res.max_history, policy->history_size());

    last.round = t;
    last.pulls = pulls;
    last.arm = sel.index;
    last.inst_regret = gap;
    last.cum_regret = cum;
    last.beta = sel.beta;
    last.contained = cfg.diagnostics.containment ? contained : std::nullopt;
    last.wall_ns = wall;
    if (cfg.trace_mode == TraceMode::full) res.trace.rows.push_back(last);
    flush_checkpoints();
  }

  res.final_regret = cum;
  res.decisions = t;
  res.pulls = pulls;
  res.wall_ns = wall;
  return res;
}

/// Mean and sample standard deviation across repetitions for one policy.
struct PolicySummary {
  std::string policy;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_regret;
  std::vector<double> std_regret;
  double final_mean = 0.0;
  double final_std = 0.0;
  std::uint64_t decisions = 0;  // per repetition (max over repetitions)
  std::uint64_t pulls = 0;
  std::size_t pulls_per_round = 1;
  double wall_seconds_mean = 0.0;
  std::optional<double> containment_rate;
  std::uint64_t potential_violations = 0;
  std::uint64_t instregret_checks = 0;
  std::uint64_t instregret_violations = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;  // ordered by (policy order in config, repetition)
  std::vector<PolicySummary> summaries;

  const PolicySummary& summary(std::string_view policy) const {
    for (const auto& s : summaries) {
      if (s.policy == policy) return s;
    }
    throw std::out_of_range("no summary for policy " + std::string(policy));
  }
  std::uint64_t total_diagnostic_violations() const {
    std::uint64_t v = 0;
    for (const auto& s : summaries) v += s.potential_violations + s.instregret_violations;
    return v;
  }
};

inline double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

inline PolicySummary summarize(const ExperimentConfig& cfg, std::string_view policy,
                               const std::vector<const RunResult*>& runs) {
  PolicySummary s;
  s.policy = std::string(policy);
  s.checkpoints = checkpoint_grid(cfg.T, cfg.checkpoints);
  const std::size_t nc = s.checkpoints.size();
  s.mean_regret.resize(nc);
  s.std_regret.resize(nc);
  std::vector<double> column(runs.size());
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r]->checkpoint_regret[c];
    s.mean_regret[c] = mean_of(column);
    s.std_regret[c] = sample_std(column);
  }
  std::vector<double> finals, walls;
  std::uint64_t contained = 0;
  bool any_containment = false;
  for (const RunResult* r : runs) {
    finals.push_back(r->final_regret);
    walls.push_back(static_cast<double>(r->wall_ns) * 1e-9);
    s.decisions = std::max(s.decisions, r->decisions);
    s.pulls = std::max(s.pulls, r->pulls);
    s.pulls_per_round = r->pulls_per_round;
    s.potential_violations += r->potential_violations;
    s.instregret_checks += r->instregret_checks;
    s.instregret_violations += r->instregret_violations;
    if (r->always_contained) {
      any_containment = true;
      if (*r->always_contained) ++contained;
    }
  }
  s.final_mean = mean_of(finals);
  s.final_std = sample_std(finals);
  s.wall_seconds_mean = mean_of(walls);
  if (any_containment) {
    s.containment_rate = static_cast<double>(contained) / static_cast<double>(runs.size());
  }
  return s;
}

/**
 * Fans (policy, repetition) jobs out to `cfg.workers` threads and merges the
 * results in (policy, repetition) order, independent of scheduling.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::size_t np = cfg.policies.size();
  const std::size_t nr = static_cast<std::size_t>(cfg.repetitions);
  const std::size_t jobs = np * nr;

  ExperimentResult out;
  out.config = cfg;
  out.runs.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        out.runs[j] = run_policy(cfg, cfg.policies[j / nr], j % nr);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t nthreads = std::min(cfg.workers, jobs);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t p = 0; p < np; ++p) {
    std::vector<const RunResult*> runs;
    for (std::size_t r = 0; r < nr; ++r) runs.push_back(&out.runs[p * nr + r]);
    out.summaries.push_back(summarize(cfg, cfg.policies[p].name, runs));
  }
  return out;
}

}  // namespace htglb
