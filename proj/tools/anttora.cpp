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

// Command-line front end: run, validate, replay.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anttora/anttora.hpp"

namespace {

std::string trace_path_for(const std::string& base, std::size_t index, std::size_t total) {
  return total == 1 ? base : base + "." + std::to_string(index);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw anttora::Error("cannot write '" + path + "'");
  anttora::trace::write_trace(out, lines);
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, int reps,
            std::optional<std::string> mode, std::optional<std::string> trace_path,
            std::optional<std::string> report_path) {
  anttora::Scenario sc = anttora::load_scenario(scenario_path);
  if (seed) sc.seed = *seed;
  if (mode) sc.mode = anttora::mode_from_string(*mode);
  const auto rep = anttora::run_experiment(sc, reps);
  if (trace_path) {
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
      write_lines(trace_path_for(*trace_path, i, rep.runs.size()), rep.runs[i].trace);
    }
  }
  const auto json = anttora::to_json(rep);
  if (report_path) {
    std::ofstream out(*report_path);
    if (!out) throw anttora::Error("cannot write '" + *report_path + "'");
    out << json.dump(2) << '\n';
  }
  std::cout << anttora::summary_table(rep);
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  const auto sc = anttora::load_scenario(scenario_path);
  std::cout << "ok: nodes=" << sc.node_count << " flows=" << sc.flows.size()
            << " mode=" << anttora::to_string(sc.mode) << " end_time=" << sc.end_time << "\n";
  return 0;
}

int cmd_replay(const std::string& trace_path, std::optional<std::string> report_path) {
  const auto metrics = anttora::replay(trace_path);
  const auto json = anttora::to_json(metrics);
  std::cout << json.dump(2) << '\n';
  if (!report_path) return 0;
  std::ifstream in(*report_path);
  if (!in) throw anttora::Error("cannot open report '" + *report_path + "'");
  const auto report = nlohmann::json::parse(in);
  for (const auto& run : report.at("runs")) {
    if (run.at("seed") == json.at("seed")) {
      if (run == json) {
        std::cerr << "replay matches report (seed " << metrics.seed << ")\n";
        return 0;
      }
      std::cerr << "error: replayed metrics differ from report for seed " << metrics.seed << "\n";
      return 3;
    }
  }
  std::cerr << "error: report has no run with seed " << metrics.seed << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ant-colony enhanced TORA routing simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  int reps = 1;
  std::optional<std::string> mode;
  std::optional<std::string> trace_path;
  std::optional<std::string> report_path;
  auto* run = app.add_subcommand("run", "simulate a scenario");
  run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
  run->add_option("--seed", seed, "base seed (overrides the scenario)");
  run->add_option("--reps", reps, "repetitions; run i uses seed base+i")->check(CLI::PositiveNumber);
  run->add_option("--mode", mode, "routing mode")->check(CLI::IsMember({"ant_tora", "baseline_tora"}));
  run->add_option("--trace", trace_path, "trace output (suffixed .i when reps > 1)");
  run->add_option("--report", report_path, "JSON report output");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", validate_path, "scenario file (JSON)")->required();

  std::string replay_path;
  std::optional<std::string> replay_report;
  auto* replay = app.add_subcommand("replay", "recompute metrics from a trace");
  replay->add_option("trace", replay_path, "trace file")->required();
  replay->add_option("--report", replay_report, "report to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(scenario_path, seed, reps, mode, trace_path, report_path);
    if (*validate) return cmd_validate(validate_path);
    if (*replay) return cmd_replay(replay_path, replay_report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
