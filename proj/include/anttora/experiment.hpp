/*
 * Copyright 2026 The anttora Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Experiment orchestration: one simulation per derived seed, aggregated
// into a report. Seeds are base_seed + repetition index.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "anttora/metrics.hpp"
#include "anttora/scenario.hpp"
#include "anttora/simulator.hpp"
#include "anttora/trace.hpp"

namespace anttora {

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<std::string> trace;
  RunMetrics metrics;
};

inline RunResult run(const Scenario& scenario, std::uint64_t seed) {
  sim::Simulator sim(scenario, seed);
  sim.run();
  RunResult r;
  r.seed = seed;
  r.trace = sim.trace_lines();
  r.metrics = compute_metrics(r.trace);
  return r;
}

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct ExperimentReport {
  std::string mode;
  std::uint64_t base_seed = 0;
  std::vector<RunResult> runs;
  std::vector<std::pair<std::string, Stat>> summary;
};

inline std::vector<std::pair<std::string, std::function<double(const RunMetrics&)>>>
summary_fields() {
  std::vector<std::pair<std::string, std::function<double(const RunMetrics&)>>> f = {
      {"pdr", [](const RunMetrics& m) { return m.pdr; }},
      {"mean_end_to_end_delay", [](const RunMetrics& m) { return m.mean_end_to_end_delay; }},
      {"mean_total_delay", [](const RunMetrics& m) { return m.mean_total_delay; }},
      {"generated", [](const RunMetrics& m) { return static_cast<double>(m.generated); }},
      {"delivered", [](const RunMetrics& m) { return static_cast<double>(m.delivered); }},
      {"control_total", [](const RunMetrics& m) { return static_cast<double>(m.control_total); }},
      {"data_transmissions",
       [](const RunMetrics& m) { return static_cast<double>(m.data_transmissions); }},
      {"energy_total", [](const RunMetrics& m) { return m.energy_total; }},
      {"link_failures", [](const RunMetrics& m) { return static_cast<double>(m.link_failures); }},
  };
  for (const char* t : {"hello", "qry_request", "qry_reply", "upd", "error", "clr"}) {
    const std::string type = t;
    f.emplace_back("control_packets." + type, [type](const RunMetrics& m) {
      return static_cast<double>(control_count(m, type));
    });
  }
  return f;
}

inline ExperimentReport run_experiment(const Scenario& scenario, int repetitions) {
  if (repetitions < 1) throw PreconditionError("repetitions must be at least 1");
  ExperimentReport rep;
  rep.mode = to_string(scenario.mode);
  rep.base_seed = scenario.seed;
  for (int i = 0; i < repetitions; ++i) {
    rep.runs.push_back(run(scenario, scenario.seed + static_cast<std::uint64_t>(i)));
  }
  for (const auto& [name, get] : summary_fields()) {
    Stat s{0.0, get(rep.runs.front().metrics), get(rep.runs.front().metrics)};
    for (const auto& r : rep.runs) {
      const double v = get(r.metrics);
      s.mean += v;
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
    s.mean /= static_cast<double>(rep.runs.size());
    rep.summary.emplace_back(name, s);
  }
  return rep;
}

inline nlohmann::json to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["schema"] = "anttora-report/1";
  j["mode"] = rep.mode;
  j["base_seed"] = rep.base_seed;
  j["repetitions"] = rep.runs.size();
  j["runs"] = nlohmann::json::array();
  for (const auto& r : rep.runs) j["runs"].push_back(to_json(r.metrics));
  j["summary"] = nlohmann::json::object();
  for (const auto& [name, s] : rep.summary) {
    j["summary"][name] = {{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
  }
  return j;
}

inline std::string summary_table(const ExperimentReport& rep) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "mode=%s base_seed=%llu repetitions=%zu\n", rep.mode.c_str(),
                static_cast<unsigned long long>(rep.base_seed), rep.runs.size());
  os << buf;
  std::snprintf(buf, sizeof buf, "%-28s %14s %14s %14s\n", "metric", "mean", "min", "max");
  os << buf;
  for (const auto& [name, s] : rep.summary) {
    std::snprintf(buf, sizeof buf, "%-28s %14.6g %14.6g %14.6g\n", name.c_str(), s.mean, s.min, s.max);
    os << buf;
  }
  return os.str();
}

inline std::vector<trace::TraceRecord> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace '" + path + "'");
  return trace::read_trace(in);
}

/// Recomputes the metrics of a saved run.
inline RunMetrics replay(const std::string& trace_path) { return compute_metrics(load_trace(trace_path)); }

}  // namespace anttora
