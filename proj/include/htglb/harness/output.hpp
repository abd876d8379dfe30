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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "htglb/harness/runner.hpp"

namespace htglb {

inline constexpr const char* kTraceHeader =
    "policy,rep,round,pulls,arm,inst_regret,cum_regret,beta,contained,wall_ns";

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline void write_trace_csv(std::ostream& os, const ExperimentResult& result) {
  os << kTraceHeader << '\n';
  for (const RunResult& run : result.runs) {
    for (const TraceRow& row : run.trace.rows) {
      os << run.trace.policy << ',' << run.trace.repetition << ',' << row.round << ','
         << row.pulls << ',' << row.arm << ',' << format_double(row.inst_regret) << ','
         << format_double(row.cum_regret) << ',' << format_double(row.beta) << ',';
      if (row.contained) os << (*row.contained ? '1' : '0');
      os << ',' << row.wall_ns << '\n';
    }
  }
}

inline nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json policies = nlohmann::json::array();
  for (const PolicySummary& s : result.summaries) {
    nlohmann::json p{{"policy", s.policy},
                     {"checkpoints", s.checkpoints},
                     {"mean_regret", s.mean_regret},
                     {"std_regret", s.std_regret},
                     {"final_mean", s.final_mean},
                     {"final_std", s.final_std},
                     {"decisions", s.decisions},
                     {"pulls", s.pulls},
                     {"pulls_per_round", s.pulls_per_round},
                     {"wall_seconds_mean", s.wall_seconds_mean},
                     {"potential_violations", s.potential_violations},
                     {"instregret_checks", s.instregret_checks},
                     {"instregret_violations", s.instregret_violations}};
    if (s.containment_rate) p["containment_rate"] = *s.containment_rate;
    policies.push_back(std::move(p));
  }
  return nlohmann::json{{"config", result.config}, {"policies", policies}};
}

/// Writes traces.csv and summary.json into `dir`, creating it if needed.
inline void write_outputs(const std::string& dir, const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  const auto base = std::filesystem::path(dir);
  {
    std::ofstream csv(base / "traces.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (base / "traces.csv").string());
    write_trace_csv(csv, result);
    if (!csv) throw std::runtime_error("write failed: " + (base / "traces.csv").string());
  }
  std::ofstream js(base / "summary.json", std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + (base / "summary.json").string());
  js << summary_json(result).dump(2) << '\n';
  if (!js) throw std::runtime_error("write failed: " + (base / "summary.json").string());
}

/// Drops the trailing wall_ns column of every CSV line.
inline std::string strip_wall_column(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out << (pos == std::string::npos ? line : line.substr(0, pos)) << '\n';
  }
  return out.str();
}

}  // namespace htglb
