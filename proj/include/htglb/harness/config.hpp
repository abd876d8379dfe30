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

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "htglb/env.hpp"
#include "htglb/glm.hpp"
#include "htglb/noise.hpp"
#include "htglb/policies/common.hpp"
#include "htglb/policies/factory.hpp"

namespace htglb {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyConfig {
  std::string name;
  WidthMode width_mode = WidthMode::tuned;
  double c = 0.01;
  std::optional<double> radius_override;
  std::optional<double> threshold_override;
  ThresholdForm threshold_form = ThresholdForm::algorithm;
  std::optional<std::size_t> replay_override;
};

struct DiagnosticFlags {
  bool containment = false;
  bool potential = true;
  bool instregret = false;
};

enum class TraceMode { checkpoints, full };

struct ExperimentConfig {
  Eigen::Index d = 10;
  Eigen::Index K = 20;
  std::uint64_t T = 100000;
  std::uint64_t repetitions = 10;
  std::uint64_t master_seed = 20240101;
  NoiseSpec noise = NoiseSpec::student_t(3.0);
  LinkKind link = LinkKind::logistic;
  double S = 1.0;
  double epsilon = 1.0;
  double delta = 0.01;
  double alpha = 0.62;
  std::vector<PolicyConfig> policies;
  ArmMode arm_mode = ArmMode::fixed;
  std::string output;  // directory; empty means no files
  DiagnosticFlags diagnostics;
  std::size_t workers = 1;
  std::size_t checkpoints = 200;
  TraceMode trace_mode = TraceMode::checkpoints;
  std::uint64_t tune_repetitions = 3;
  std::uint64_t bench_trials = 3;
};

inline LinkSpec link_of(const ExperimentConfig& cfg) { return make_link(cfg.link, cfg.S); }

inline PolicyParams params_for(const ExperimentConfig& cfg, const PolicyConfig& pc) {
  PolicyParams p = make_params(cfg.d, cfg.T, link_of(cfg), cfg.noise, cfg.delta, cfg.epsilon);
  p.alpha = cfg.alpha;
  p.c = pc.c;
  p.width_mode = pc.width_mode;
  p.radius_override = pc.radius_override;
  p.threshold_override = pc.threshold_override;
  p.threshold_form = pc.threshold_form;
  p.replay_override = pc.replay_override;
  return p;
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("d must be >= 1");
  if (cfg.K < 1) throw ConfigError("K must be >= 1");
  if (cfg.T < 1) throw ConfigError("T must be >= 1");
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.policies.empty()) throw ConfigError("no policies configured");
  if (!(cfg.S > 0.0)) throw ConfigError("S must be positive");
  try {
    for (const auto& pc : cfg.policies) {
      if (!is_known_policy(pc.name)) throw ConfigError("unknown policy: " + pc.name);
      const PolicyParams p = params_for(cfg, pc);
      check_tuned_c(p);
      if ((pc.name == "crmm" || pc.name == "ol2m_mom" || pc.name == "gloc_mom") &&
          cfg.arm_mode == ArmMode::fresh) {
        throw ConfigError(pc.name + " replays its arm and needs a static arm set");
      }
      if (cfg.T < pulls_per_round(pc.name, p)) {
        throw ConfigError("T is smaller than the pulls per round of " + pc.name);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// JSON mapping. Field names mirror ExperimentConfig.

inline void to_json(nlohmann::json& j, const PolicyConfig& pc) {
  j = nlohmann::json{{"name", pc.name},
                     {"width_mode", std::string(to_string(pc.width_mode))},
                     {"c", pc.c},
                     {"threshold_form",
                      pc.threshold_form == ThresholdForm::algorithm ? "algorithm" : "appendix"}};
  if (pc.radius_override) j["radius_override"] = *pc.radius_override;
  if (pc.threshold_override) j["threshold_override"] = *pc.threshold_override;
  if (pc.replay_override) j["replay_override"] = *pc.replay_override;
}

namespace detail {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

/// JSON has no infinity literal; accept the strings "inf" and "+inf".
inline double read_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace detail

inline void from_json(const nlohmann::json& j, PolicyConfig& pc) {
  if (j.is_string()) {
    pc.name = j.get<std::string>();
    return;
  }
  pc.name = j.at("name").get<std::string>();
  if (j.contains("width_mode")) pc.width_mode = parse_width_mode(j.at("width_mode").get<std::string>());
  detail::read_opt(j, "c", pc.c);
  if (j.contains("radius_override")) pc.radius_override = detail::read_number(j.at("radius_override"));
  if (j.contains("threshold_override")) {
    pc.threshold_override = detail::read_number(j.at("threshold_override"));
  }
  if (j.contains("threshold_form")) {
    const auto f = j.at("threshold_form").get<std::string>();
    if (f == "algorithm") {
      pc.threshold_form = ThresholdForm::algorithm;
    } else if (f == "appendix") {
      pc.threshold_form = ThresholdForm::appendix;
    } else {
      throw ConfigError("unknown threshold_form: " + f);
    }
  }
  if (j.contains("replay_override")) pc.replay_override = j.at("replay_override").get<std::size_t>();
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& cfg) {
  nlohmann::json noise{{"variant", std::string(to_string(cfg.noise.kind))}};
  if (cfg.noise.kind == NoiseKind::student_t) noise["nu"] = cfg.noise.nu;
  if (cfg.noise.kind == NoiseKind::pareto) {
    noise["shape"] = cfg.noise.shape;
    noise["scale"] = cfg.noise.scale;
  }
  if (cfg.noise.moment_bound > 0.0) noise["moment_bound"] = cfg.noise.moment_bound;
  j = nlohmann::json{
      {"d", cfg.d},
      {"K", cfg.K},
      {"T", cfg.T},
      {"repetitions", cfg.repetitions},
      {"master_seed", cfg.master_seed},
      {"noise", noise},
      {"link", std::string(to_string(cfg.link))},
      {"S", cfg.S},
      {"epsilon", cfg.epsilon},
      {"delta", cfg.delta},
      {"alpha", cfg.alpha},
      {"policies", cfg.policies},
      {"arm_mode", std::string(to_string(cfg.arm_mode))},
      {"output", cfg.output},
      {"diagnostics",
       {{"containment", cfg.diagnostics.containment},
        {"potential", cfg.diagnostics.potential},
        {"instregret", cfg.diagnostics.instregret}}},
      {"workers", cfg.workers},
      {"checkpoints", cfg.checkpoints},
      {"trace_mode", cfg.trace_mode == TraceMode::full ? "full" : "checkpoints"},
      {"tune_repetitions", cfg.tune_repetitions},
      {"bench_trials", cfg.bench_trials},
  };
}

inline NoiseSpec noise_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const NoiseKind kind = parse_noise_kind(j.get<std::string>());
    if (kind == NoiseKind::pareto) return NoiseSpec::pareto(3.0, 0.01);
    if (kind == NoiseKind::none) return NoiseSpec::none();
    return NoiseSpec::student_t(3.0);
  }
  NoiseSpec n = noise_from_json(j.at("variant"));
  detail::read_opt(j, "nu", n.nu);
  detail::read_opt(j, "shape", n.shape);
  detail::read_opt(j, "scale", n.scale);
  detail::read_opt(j, "moment_bound", n.moment_bound);
  return n;
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& cfg) {
  detail::read_opt(j, "d", cfg.d);
  detail::read_opt(j, "K", cfg.K);
  detail::read_opt(j, "T", cfg.T);
  detail::read_opt(j, "repetitions", cfg.repetitions);
  detail::read_opt(j, "master_seed", cfg.master_seed);
  if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"));
  if (j.contains("link")) cfg.link = parse_link_kind(j.at("link").get<std::string>());
  detail::read_opt(j, "S", cfg.S);
  detail::read_opt(j, "epsilon", cfg.epsilon);
  detail::read_opt(j, "delta", cfg.delta);
  detail::read_opt(j, "alpha", cfg.alpha);
  if (j.contains("policies")) cfg.policies = j.at("policies").get<std::vector<PolicyConfig>>();
  if (j.contains("arm_mode")) cfg.arm_mode = parse_arm_mode(j.at("arm_mode").get<std::string>());
  detail::read_opt(j, "output", cfg.output);
  if (j.contains("diagnostics")) {
    const auto& dj = j.at("diagnostics");
    detail::read_opt(dj, "containment", cfg.diagnostics.containment);
    detail::read_opt(dj, "potential", cfg.diagnostics.potential);
    detail::read_opt(dj, "instregret", cfg.diagnostics.instregret);
  }
  detail::read_opt(j, "workers", cfg.workers);
  detail::read_opt(j, "checkpoints", cfg.checkpoints);
  if (j.contains("trace_mode")) {
    const auto m = j.at("trace_mode").get<std::string>();
    if (m == "full") {
      cfg.trace_mode = TraceMode::full;
    } else if (m == "checkpoints") {
      cfg.trace_mode = TraceMode::checkpoints;
    } else {
      throw ConfigError("unknown trace_mode: " + m);
    }
  }
  detail::read_opt(j, "tune_repetitions", cfg.tune_repetitions);
  detail::read_opt(j, "bench_trials", cfg.bench_trials);
}

inline ExperimentConfig parse_config(const std::string& text) {
  try {
    return nlohmann::json::parse(text).get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace htglb
