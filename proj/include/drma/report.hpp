// Copyright 2026 The drma Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs, comparisons, batches and their emitters.
//
// first-fit and best-fit run in repack mode: every task is lifted and
// re-placed onto empty servers under pre_max. drma runs in consolidate mode
// on the scenario as given. All emitted bytes are a function of the inputs
// only; wall-clock time is kept on the report but never emitted.

#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "drma/metrics.hpp"
#include "drma/model.hpp"
#include "drma/planner.hpp"
#include "drma/workload.hpp"

namespace drma {

enum class RunAlgorithm { kFirstFit, kBestFit, kDrma };

const char* to_string(RunAlgorithm algorithm);
RunAlgorithm parse_algorithm(const std::string& name);
// "drma", "first-fit,drma" or "all".
std::vector<RunAlgorithm> parse_algorithm_list(const std::string& names);

enum class RunMode { kRepack, kConsolidate };
const char* to_string(RunMode mode);

struct RunReport {
  std::string scenario_id;
  RunAlgorithm algorithm = RunAlgorithm::kDrma;
  RunMode mode = RunMode::kConsolidate;
  DatacenterState before;
  DatacenterState after;
  Plan plan;
  std::vector<TaskId> unplaced;
  ConsolidationMetrics metrics;
  CostBenefit cost_benefit;
  std::chrono::nanoseconds duration{0};

  bool infeasible() const { return !unplaced.empty(); }
  ReplayCheck replay_check() const {
    return mode == RunMode::kRepack ? ReplayCheck::kFinalOnly
                                    : ReplayCheck::kEveryStep;
  }
};

RunReport run(const DatacenterState& state, const Config& config,
              RunAlgorithm algorithm, std::string scenario_id = {});

struct ComparisonRow {
  RunAlgorithm algorithm;
  RunMode mode;
  ConsolidationMetrics metrics;
  CostBenefit cost_benefit;
  std::size_t unplaced = 0;
};

struct Comparison {
  std::string scenario_id;
  std::vector<ComparisonRow> rows;  // in requested algorithm order
};

Comparison compare(const DatacenterState& state, const Config& config,
                   const std::vector<RunAlgorithm>& algorithms,
                   std::string scenario_id = {});

struct BatchRow {
  RunAlgorithm algorithm;
  RunMode mode;
  std::size_t scenarios = 0;
  double mean_servers_used = 0;
  double mean_servers_released = 0;
  double mean_tasks_migrated = 0;
  double mean_cost = 0;
  double mean_benefit = 0;
  std::size_t infeasible_runs = 0;
};

struct BatchSummary {
  std::vector<BatchRow> rows;
};

// Scenario i is generated from `spec` with a seed split off SeededRng(seed).
std::vector<WorkloadSpec> batch_specs(const WorkloadSpec& spec,
                                      std::size_t count, std::uint64_t seed);

BatchSummary run_batch(const WorkloadSpec& spec, const Config& config,
                       const std::vector<RunAlgorithm>& algorithms,
                       std::size_t count, std::uint64_t seed);

enum class EmitFormat { kTable, kCsv, kJson, kPlotData };
EmitFormat parse_emit_format(const std::string& name);

enum class TablePhase { kBefore, kAfter };
TablePhase parse_table_phase(const std::string& name);

// table:    both states laid out as server rows x task columns + Total, then
//           the plan and the metrics.
// csv:      header `server,task1..taskS,total`, one row per server of the
//           chosen phase (primary dimension).
// json:     the whole report.
// plotdata: `series,x,y` with x the task column and y the running total,
//           one series per server and phase ("before/S1", "after/S1").
void emit(const RunReport& report, EmitFormat format, std::ostream& out,
          TablePhase phase = TablePhase::kAfter, int primary_dim = 0);
void emit(const Comparison& comparison, EmitFormat format, std::ostream& out);
void emit(const BatchSummary& summary, EmitFormat format, std::ostream& out);

}  // namespace drma
