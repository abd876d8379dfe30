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

// Command-line front end: run / tune / bench / check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "htglb/htglb.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiagnostic = 2;

struct Overrides {
  std::vector<std::string> policies;
  std::optional<std::uint64_t> T;
  std::optional<long> d;
  std::optional<long> K;
  std::optional<std::string> noise;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::optional<std::string> out;
  std::optional<std::string> width;
  std::optional<std::string> arm_mode;
  std::optional<std::size_t> workers;
};

void apply(const Overrides& o, htglb::ExperimentConfig& cfg) {
  using namespace htglb;
  if (!o.policies.empty()) {
    std::vector<PolicyConfig> selected;
    for (const auto& name : o.policies) {
      PolicyConfig pc;
      pc.name = name;
      for (const auto& existing : cfg.policies) {
        if (existing.name == name) pc = existing;
      }
      selected.push_back(pc);
    }
    cfg.policies = selected;
  }
  if (o.T) cfg.T = *o.T;
  if (o.d) cfg.d = *o.d;
  if (o.K) cfg.K = *o.K;
  if (o.noise) {
    const NoiseKind kind = parse_noise_kind(*o.noise);
    if (kind != cfg.noise.kind) {
      cfg.noise = kind == NoiseKind::pareto ? NoiseSpec::pareto(3.0, 0.01)
                                            : kind == NoiseKind::none ? NoiseSpec::none()
                                                                      : NoiseSpec::student_t(3.0);
    }
  }
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.reps) cfg.repetitions = *o.reps;
  if (o.out) cfg.output = *o.out;
  if (o.width) {
    const WidthMode m = parse_width_mode(*o.width);
    for (auto& pc : cfg.policies) pc.width_mode = m;
  }
  if (o.arm_mode) cfg.arm_mode = parse_arm_mode(*o.arm_mode);
  if (o.workers) cfg.workers = *o.workers;
}

htglb::ExperimentConfig load(const std::string& path, const Overrides& o) {
  htglb::ExperimentConfig cfg = htglb::load_config(path);
  try {
    apply(o, cfg);
  } catch (const std::invalid_argument& e) {
    throw htglb::ConfigError(e.what());
  }
  htglb::validate(cfg);
  return cfg;
}

void print_summary(const htglb::ExperimentResult& r) {
  std::printf("%-10s %14s %12s %10s %10s %8s %8s\n", "policy", "final_regret", "std", "decisions",
              "wall_s", "pot_viol", "ir_viol");
  for (const auto& s : r.summaries) {
    std::printf("%-10s %14.4f %12.4f %10llu %10.4f %8llu %8llu", s.policy.c_str(), s.final_mean,
                s.final_std, static_cast<unsigned long long>(s.decisions), s.wall_seconds_mean,
                static_cast<unsigned long long>(s.potential_violations),
                static_cast<unsigned long long>(s.instregret_violations));
    if (s.containment_rate) std::printf("  contained=%.3f", *s.containment_rate);
    std::printf("\n");
  }
}

void write_json(const std::string& dir, const std::string& file, const nlohmann::json& j) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / file);
  if (!os) throw std::runtime_error("cannot write " + file + " in " + dir);
  os << j.dump(2) << '\n';
}

std::vector<std::uint64_t> parse_budgets(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<std::uint64_t>(std::stod(item)));
    } catch (const std::exception&) {
      throw htglb::ConfigError("invalid budget: " + item);
    }
  }
  return out;
}

int cmd_run(const std::string& path, const Overrides& o) {
  const auto cfg = load(path, o);
  const auto result = htglb::run_experiment(cfg);
  if (!cfg.output.empty()) htglb::write_outputs(cfg.output, result);
  print_summary(result);
  return result.total_diagnostic_violations() > 0 ? kExitDiagnostic : kExitOk;
}

int cmd_tune(const std::string& path, const Overrides& o, std::size_t points) {
  const auto cfg = load(path, o);
  const auto tuned = htglb::tune_c(cfg, htglb::log_grid(points));
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : tuned) {
    std::printf("%-10s best_c=%.6g\n", t.policy.c_str(), t.best_c);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      std::printf("    c=%-12.6g mean_final_regret=%.4f\n", t.grid[i], t.mean_final_regret[i]);
    }
    j.push_back({{"policy", t.policy},
                 {"best_c", t.best_c},
                 {"grid", t.grid},
                 {"mean_final_regret", t.mean_final_regret}});
  }
  write_json(cfg.output, "tune.json", j);
  return kExitOk;
}

int cmd_bench(const std::string& path, const Overrides& o, const std::string& budgets) {
  const auto cfg = load(path, o);
  const auto results = htglb::bench_runtime(cfg, parse_budgets(budgets));
  nlohmann::json j = nlohmann::json::array();
  for (const auto& b : results) {
    std::printf("%-10s slope=%.3f ", b.policy.c_str(), b.slope);
    for (std::size_t i = 0; i < b.budgets.size(); ++i) {
      std::printf(" T=%llu:%.4fs", static_cast<unsigned long long>(b.budgets[i]), b.seconds[i]);
    }
    std::printf("\n");
    j.push_back({{"policy", b.policy}, {"budgets", b.budgets}, {"seconds", b.seconds},
                 {"slope", b.slope}});
  }
  write_json(cfg.output, "bench.json", j);
  return kExitOk;
}

int cmd_check(const std::string& path, const Overrides& o, const std::string& diagnostic) {
  auto cfg = load(path, o);
  if (diagnostic == "containment") {
    cfg = htglb::with_theoretical_widths(cfg);
    const auto results = htglb::containment_check(cfg);
    bool violated = false;
    for (const auto& r : results) {
      // Guarantees: 1 - delta for CRTM, 1 - 2 delta for CRMM.
      std::optional<double> target;
      if (r.policy == "crtm") target = 1.0 - cfg.delta;
      if (r.policy == "crmm") target = 1.0 - 2.0 * cfg.delta;
      const bool bad = (target && r.rate < *target) || r.instregret_violations > 0;
      violated = violated || bad;
      std::printf("%-10s containment_rate=%.4f", r.policy.c_str(), r.rate);
      if (target) std::printf(" target>=%.4f", *target);
      std::printf(" instregret_violations=%llu %s\n",
                  static_cast<unsigned long long>(r.instregret_violations), bad ? "FAIL" : "ok");
    }
    return violated ? kExitDiagnostic : kExitOk;
  }
  if (diagnostic == "potential" || diagnostic == "instregret") {
    cfg.diagnostics.potential = diagnostic == "potential";
    cfg.diagnostics.instregret = diagnostic == "instregret";
    const auto result = htglb::run_experiment(cfg);
    print_summary(result);
    return result.total_diagnostic_violations() > 0 ? kExitDiagnostic : kExitOk;
  }
  throw htglb::ConfigError("unknown diagnostic: " + diagnostic);
}

void add_overrides(CLI::App* sub, Overrides& o) {
  sub->add_option("--policy", o.policies, "Policy to run (repeatable)");
  sub->add_option("--T", o.T, "Pull budget");
  sub->add_option("--d", o.d, "Dimension");
  sub->add_option("--K", o.K, "Number of arms");
  sub->add_option("--noise", o.noise, "student_t | pareto");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--reps", o.reps, "Repetitions");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--width", o.width, "tuned | theoretical");
  sub->add_option("--arm-mode", o.arm_mode, "static | fresh");
  sub->add_option("--workers", o.workers, "Worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized linear bandits with heavy-tailed rewards: simulation harness"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  std::size_t grid_points = 13;
  std::string budgets;
  std::string diagnostic;

  auto* run = app.add_subcommand("run", "Run a regret experiment");
  run->add_option("--config", config_path, "Config JSON")->required();
  add_overrides(run, overrides);

  auto* tune = app.add_subcommand("tune", "Grid-search the width multiplier c");
  tune->add_option("--config", config_path, "Config JSON")->required();
  tune->add_option("--grid-points", grid_points, "Log-spaced points in [1e-4, 1]");
  add_overrides(tune, overrides);

  auto* bench = app.add_subcommand("bench", "Runtime scaling across pull budgets");
  bench->add_option("--config", config_path, "Config JSON")->required();
  bench->add_option("--budgets", budgets, "Comma-separated budgets")->required();
  add_overrides(bench, overrides);

  auto* check = app.add_subcommand("check", "Run a diagnostic");
  check->add_option("--config", config_path, "Config JSON")->required();
  check->add_option("--diagnostic", diagnostic, "containment | potential | instregret")
      ->required()
      ->check(CLI::IsMember({"containment", "potential", "instregret"}));
  add_overrides(check, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, overrides);
    if (tune->parsed()) return cmd_tune(config_path, overrides, grid_points);
    if (bench->parsed()) return cmd_bench(config_path, overrides, budgets);
    if (check->parsed()) return cmd_check(config_path, overrides, diagnostic);
  } catch (const htglb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
