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

#include "drma/report.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "drma/allocator.hpp"

namespace drma {

using Json = nlohmann::ordered_json;

const char* to_string(RunAlgorithm algorithm) {
  switch (algorithm) {
    case RunAlgorithm::kFirstFit: return "first-fit";
    case RunAlgorithm::kBestFit: return "best-fit";
    case RunAlgorithm::kDrma: return "drma";
  }
  return "unknown";
}

RunAlgorithm parse_algorithm(const std::string& name) {
  if (name == "first-fit") return RunAlgorithm::kFirstFit;
  if (name == "best-fit") return RunAlgorithm::kBestFit;
  if (name == "drma") return RunAlgorithm::kDrma;
  throw InvalidArgument("unknown algorithm '" + name +
                        "' (expected first-fit, best-fit or drma)");
}

std::vector<RunAlgorithm> parse_algorithm_list(const std::string& names) {
  if (names == "all") {
    return {RunAlgorithm::kFirstFit, RunAlgorithm::kBestFit, RunAlgorithm::kDrma};
  }
  std::vector<RunAlgorithm> out;
  std::stringstream in(names);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_algorithm(item));
  if (out.empty()) throw InvalidArgument("no algorithm given");
  return out;
}

const char* to_string(RunMode mode) {
  return mode == RunMode::kRepack ? "repack" : "consolidate";
}

namespace {

// Diff between two placements as a plan. Moves whose destination has room
// go first so that most repack plans also replay step by step.
Plan diff_plan(const DatacenterState& before, const DatacenterState& after,
               Points threshold) {
  std::vector<PlanStep> pending;
  for (const Task& t : after.tasks) {
    const Task& old = before.task(t.id);
    if (!t.placement || old.placement == t.placement) continue;
    pending.push_back(PlanStep{t.id, old.placement, *t.placement});
  }
  Plan plan;
  DatacenterState current = before;
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const PlanStep& step) {
      return fits(current, *current.server_index(step.to),
                  current.task(step.task).demand, threshold);
    });
    if (ready == pending.end()) ready = pending.begin();
    current.place(ready->task, *current.server_index(ready->to));
    plan.steps.push_back(*ready);
    pending.erase(ready);
  }
  return plan;
}

RunReport run_repack(const DatacenterState& state, const Config& config,
                     Algorithm algorithm, RunReport report) {
  DatacenterState lifted = state;
  for (const Task& t : state.tasks) lifted.unplace(t.id);
  PackResult packed = pack_all(lifted.tasks, lifted, algorithm, config,
                               Phase::kAllocation);
  report.before = state;
  if (!packed.unplaced.empty()) {
    // A repack that strands tasks is not carried out.
    report.after = state;
    report.unplaced = std::move(packed.unplaced);
  } else {
    report.after = std::move(packed.state);
    report.plan = diff_plan(state, report.after, config.post_max);
  }
  report.metrics = compute_metrics(report.before, report.after, report.plan,
                                   ReplayCheck::kFinalOnly);
  report.cost_benefit = cost_benefit(report.plan, report.metrics.servers_released,
                                     report.before, config);
  return report;
}

}  // namespace

RunReport run(const DatacenterState& state, const Config& config,
              RunAlgorithm algorithm, std::string scenario_id) {
  validate_config(config, state.dims);
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario_id = std::move(scenario_id);
  report.algorithm = algorithm;
  switch (algorithm) {
    case RunAlgorithm::kFirstFit:
      report.mode = RunMode::kRepack;
      report = run_repack(state, config, Algorithm::kFirstFit, std::move(report));
      break;
    case RunAlgorithm::kBestFit:
      report.mode = RunMode::kRepack;
      report = run_repack(state, config, Algorithm::kBestFit, std::move(report));
      break;
    case RunAlgorithm::kDrma: {
      report.mode = RunMode::kConsolidate;
      ConsolidationReport c = drma(state, config);
      report.before = std::move(c.before);
      report.after = std::move(c.after);
      report.plan = std::move(c.plan);
      report.unplaced = std::move(c.unplaced);
      report.metrics = c.metrics;
      report.cost_benefit = c.cost_benefit;
      break;
    }
  }
  report.duration = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

Comparison compare(const DatacenterState& state, const Config& config,
                   const std::vector<RunAlgorithm>& algorithms,
                   std::string scenario_id) {
  if (algorithms.empty()) throw InvalidArgument("compare needs an algorithm");
  Comparison out{std::move(scenario_id), {}};
  for (RunAlgorithm a : algorithms) {
    const RunReport r = run(state, config, a);
    out.rows.push_back(
        ComparisonRow{a, r.mode, r.metrics, r.cost_benefit, r.unplaced.size()});
  }
  return out;
}

std::vector<WorkloadSpec> batch_specs(const WorkloadSpec& spec,
                                      std::size_t count, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<WorkloadSpec> out(count, spec);
  for (WorkloadSpec& s : out) s.seed = rng.split().next();
  return out;
}

BatchSummary run_batch(const WorkloadSpec& spec, const Config& config,
                       const std::vector<RunAlgorithm>& algorithms,
                       std::size_t count, std::uint64_t seed) {
  validate_workload(spec, config.pre_max);
  BatchSummary summary;
  for (RunAlgorithm a : algorithms) {
    summary.rows.push_back(BatchRow{a, a == RunAlgorithm::kDrma ? RunMode::kConsolidate
                                                                : RunMode::kRepack});
  }
  std::vector<std::size_t> used(algorithms.size()), released(algorithms.size()),
      migrated(algorithms.size());
  std::vector<double> cost(algorithms.size()), benefit(algorithms.size());
  for (const WorkloadSpec& s : batch_specs(spec, count, seed)) {
    const DatacenterState state = generate_scenario(s);
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
      const RunReport r = run(state, config, algorithms[i]);
      used[i] += r.metrics.servers_used;
      released[i] += r.metrics.servers_released;
      migrated[i] += r.metrics.tasks_migrated;
      cost[i] += r.cost_benefit.cost;
      benefit[i] += r.cost_benefit.benefit;
      if (r.infeasible()) ++summary.rows[i].infeasible_runs;
    }
  }
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    BatchRow& row = summary.rows[i];
    row.scenarios = count;
    if (count == 0) continue;
    const auto n = static_cast<double>(count);
    row.mean_servers_used = static_cast<double>(used[i]) / n;
    row.mean_servers_released = static_cast<double>(released[i]) / n;
    row.mean_tasks_migrated = static_cast<double>(migrated[i]) / n;
    row.mean_cost = cost[i] / n;
    row.mean_benefit = benefit[i] / n;
  }
  return summary;
}

EmitFormat parse_emit_format(const std::string& name) {
  if (name == "table") return EmitFormat::kTable;
  if (name == "csv") return EmitFormat::kCsv;
  if (name == "json") return EmitFormat::kJson;
  if (name == "plotdata") return EmitFormat::kPlotData;
  throw InvalidArgument("unknown emit format '" + name +
                        "' (expected table, csv, json or plotdata)");
}

TablePhase parse_table_phase(const std::string& name) {
  if (name == "before") return TablePhase::kBefore;
  if (name == "after") return TablePhase::kAfter;
  throw InvalidArgument("phase must be before or after, got '" + name + "'");
}

namespace {

std::string number(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

std::string fixed(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

// Task cells of a row in the primary dimension, padded with zeros.
std::vector<Points> cells(const UtilizationRow& row, std::size_t columns, int k) {
  std::vector<Points> out(columns, 0);
  for (std::size_t i = 0; i < row.demands.size(); ++i) out[i] = row.demands[i][k];
  return out;
}

void write_table(const UtilizationTable& table, std::size_t columns, int k,
                 std::ostream& out) {
  out << "List of Servers";
  for (std::size_t c = 1; c <= columns; ++c) out << "\tTask " << c;
  out << "\tTotal\n";
  for (const UtilizationRow& row : table.rows) {
    out << row.server;
    for (Points v : cells(row, columns, k)) out << '\t' << v;
    out << '\t' << row.total[k] << '\n';
  }
}

void write_step(const PlanStep& step, const DatacenterState& before, int k,
                std::ostream& out) {
  const Points demand = before.task(step.task).demand[k];
  if (step.is_move()) {
    out << "  move " << step.task << " (" << demand << "): " << *step.from
        << " -> " << step.to << '\n';
  } else {
    out << "  allocate " << step.task << " (" << demand << "): " << step.to
        << '\n';
  }
}

Json resources_json(const ResourceVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json table_json(const UtilizationTable& table) {
  Json rows = Json::array();
  for (const UtilizationRow& row : table.rows) {
    Json tasks = Json::array();
    for (std::size_t i = 0; i < row.tasks.size(); ++i) {
      tasks.push_back(Json{{"id", row.tasks[i]}, {"demand", resources_json(row.demands[i])}});
    }
    Json utilization = Json::array();
    for (Eigen::Index d = 0; d < row.utilization.size(); ++d) {
      utilization.push_back(row.utilization[d]);
    }
    rows.push_back(Json{{"server", row.server},
                        {"tasks", std::move(tasks)},
                        {"total", resources_json(row.total)},
                        {"utilization", std::move(utilization)}});
  }
  return rows;
}

Json metrics_json(const ConsolidationMetrics& m) {
  return Json{{"servers_used", m.servers_used},
              {"servers_released", m.servers_released},
              {"tasks_migrated", m.tasks_migrated}};
}

Json cost_benefit_json(const CostBenefit& cb) {
  return Json{{"cost", cb.cost}, {"benefit", cb.benefit}};
}

}  // namespace

void emit(const RunReport& report, EmitFormat format, std::ostream& out,
          TablePhase phase, int k) {
  const UtilizationTable before = utilization_report(report.before);
  const UtilizationTable after = utilization_report(report.after);
  const std::size_t columns =
      std::max(before.max_tasks_per_server(), after.max_tasks_per_server());

  switch (format) {
    case EmitFormat::kTable: {
      out << "Scenario: " << report.scenario_id << '\n'
          << "Algorithm: " << to_string(report.algorithm) << " ("
          << to_string(report.mode) << ")\n\n"
          << "Before\n";
      write_table(before, columns, k, out);
      out << "\nAfter\n";
      write_table(after, columns, k, out);
      out << "\nPlan\n";
      if (report.plan.empty()) out << "  (empty)\n";
      for (const PlanStep& step : report.plan.steps) {
        write_step(step, report.before, k, out);
      }
      if (!report.unplaced.empty()) {
        out << "\nUnplaced\n";
        for (const TaskId& id : report.unplaced) out << "  " << id << '\n';
      }
      out << "\nMetrics\n"
          << "  servers used\t" << report.metrics.servers_used << '\n'
          << "  servers released\t" << report.metrics.servers_released << '\n'
          << "  tasks migrated\t" << report.metrics.tasks_migrated << '\n'
          << "  cost\t" << number(report.cost_benefit.cost) << '\n'
          << "  benefit\t" << number(report.cost_benefit.benefit) << '\n';
      break;
    }
    case EmitFormat::kCsv: {
      const UtilizationTable& table = phase == TablePhase::kBefore ? before : after;
      out << "server";
      for (std::size_t c = 1; c <= columns; ++c) out << ",task" << c;
      out << ",total\n";
      for (const UtilizationRow& row : table.rows) {
        out << row.server;
        for (Points v : cells(row, columns, k)) out << ',' << v;
        out << ',' << row.total[k] << '\n';
      }
      break;
    }
    case EmitFormat::kJson: {
      Json plan = Json::array();
      for (const PlanStep& step : report.plan.steps) {
        Json s{{"task", step.task}};
        if (step.from) s["from"] = *step.from;
        s["to"] = step.to;
        plan.push_back(std::move(s));
      }
      Json doc{{"scenario", report.scenario_id},
               {"algorithm", to_string(report.algorithm)},
               {"mode", to_string(report.mode)},
               {"before", table_json(before)},
               {"after", table_json(after)},
               {"plan", std::move(plan)},
               {"unplaced", report.unplaced},
               {"metrics", metrics_json(report.metrics)},
               {"cost_benefit", cost_benefit_json(report.cost_benefit)}};
      out << doc.dump(2) << '\n';
      break;
    }
    case EmitFormat::kPlotData: {
      out << "series,x,y\n";
      for (const auto& [name, table] :
           {std::pair<const char*, const UtilizationTable*>{"before", &before},
            std::pair<const char*, const UtilizationTable*>{"after", &after}}) {
        for (const UtilizationRow& row : table->rows) {
          Points running = 0;
          std::size_t x = 1;
          for (Points v : cells(row, columns, k)) {
            running += v;
            out << name << '/' << row.server << ',' << x++ << ',' << running << '\n';
          }
        }
      }
      break;
    }
  }
}

void emit(const Comparison& comparison, EmitFormat format, std::ostream& out) {
  static constexpr const char* kColumns[] = {
      "algorithm", "mode", "servers_used", "servers_released",
      "tasks_migrated", "cost", "benefit", "unplaced"};
  switch (format) {
    case EmitFormat::kTable:
    case EmitFormat::kCsv: {
      const char sep = format == EmitFormat::kCsv ? ',' : '\t';
      for (std::size_t i = 0; i < std::size(kColumns); ++i) {
        out << (i ? std::string(1, sep) : "") << kColumns[i];
      }
      out << '\n';
      for (const ComparisonRow& r : comparison.rows) {
        out << to_string(r.algorithm) << sep << to_string(r.mode) << sep
            << r.metrics.servers_used << sep << r.metrics.servers_released << sep
            << r.metrics.tasks_migrated << sep << number(r.cost_benefit.cost) << sep
            << number(r.cost_benefit.benefit) << sep << r.unplaced << '\n';
      }
      break;
    }
    case EmitFormat::kJson: {
      Json rows = Json::array();
      for (const ComparisonRow& r : comparison.rows) {
        rows.push_back(Json{{"algorithm", to_string(r.algorithm)},
                            {"mode", to_string(r.mode)},
                            {"metrics", metrics_json(r.metrics)},
                            {"cost_benefit", cost_benefit_json(r.cost_benefit)},
                            {"unplaced", r.unplaced}});
      }
      out << Json{{"scenario", comparison.scenario_id}, {"rows", std::move(rows)}}.dump(2)
          << '\n';
      break;
    }
    case EmitFormat::kPlotData:
      throw InvalidArgument("plotdata is only available for single runs");
  }
}

void emit(const BatchSummary& summary, EmitFormat format, std::ostream& out) {
  static constexpr const char* kColumns[] = {
      "algorithm", "mode", "scenarios", "mean_servers_used",
      "mean_servers_released", "mean_tasks_migrated", "mean_cost",
      "mean_benefit", "infeasible_runs"};
  switch (format) {
    case EmitFormat::kTable:
    case EmitFormat::kCsv: {
      const char sep = format == EmitFormat::kCsv ? ',' : '\t';
      for (std::size_t i = 0; i < std::size(kColumns); ++i) {
        out << (i ? std::string(1, sep) : "") << kColumns[i];
      }
      out << '\n';
      for (const BatchRow& r : summary.rows) {
        out << to_string(r.algorithm) << sep << to_string(r.mode) << sep
            << r.scenarios << sep << fixed(r.mean_servers_used) << sep
            << fixed(r.mean_servers_released) << sep << fixed(r.mean_tasks_migrated)
            << sep << fixed(r.mean_cost) << sep << fixed(r.mean_benefit) << sep
            << r.infeasible_runs << '\n';
      }
      break;
    }
    case EmitFormat::kJson: {
      Json rows = Json::array();
      for (const BatchRow& r : summary.rows) {
        rows.push_back(Json{{"algorithm", to_string(r.algorithm)},
                            {"mode", to_string(r.mode)},
                            {"scenarios", r.scenarios},
                            {"mean_servers_used", r.mean_servers_used},
                            {"mean_servers_released", r.mean_servers_released},
                            {"mean_tasks_migrated", r.mean_tasks_migrated},
                            {"mean_cost", r.mean_cost},
                            {"mean_benefit", r.mean_benefit},
                            {"infeasible_runs", r.infeasible_runs}});
      }
      out << Json{{"rows", std::move(rows)}}.dump(2) << '\n';
      break;
    }
    case EmitFormat::kPlotData:
      throw InvalidArgument("plotdata is only available for single runs");
  }
}

}  // namespace drma
