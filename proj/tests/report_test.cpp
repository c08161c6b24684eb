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
#include <sstream>

#include <gtest/gtest.h>

#include "drma/scenario.hpp"
#include "fixtures.hpp"

namespace drma {
namespace {

using testing::primary_totals;
using testing::table1_state;

std::string emitted(const RunReport& r, EmitFormat f, TablePhase p = TablePhase::kAfter) {
  std::ostringstream out;
  emit(r, f, out, p);
  return out.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Run, TableOneDrma) {
  const RunReport r = run(table1_state(), Config{}, RunAlgorithm::kDrma, "table1");
  EXPECT_EQ(r.mode, RunMode::kConsolidate);
  EXPECT_EQ(r.metrics, (ConsolidationMetrics{3, 1, 3}));
  EXPECT_EQ(primary_totals(r.after), (std::vector<Points>{100, 80, 0, 70}));
  EXPECT_FALSE(r.infeasible());
}

TEST(Run, PostMaxSeventyEmptyPlan) {
  Config c;
  c.post_max = 70;
  const RunReport r = run(table1_state(), c, RunAlgorithm::kDrma);
  EXPECT_TRUE(r.plan.steps.empty());
  EXPECT_EQ(r.metrics.servers_released, 0u);
}

TEST(Run, EmptyScenario) {
  const RunReport r = run(DatacenterState(1), Config{}, RunAlgorithm::kDrma);
  EXPECT_EQ(r.metrics, ConsolidationMetrics{});
  EXPECT_TRUE(r.plan.steps.empty());
  EXPECT_EQ(emitted(r, EmitFormat::kCsv), "server,total\n");
}

TEST(Run, RepackIsLabeledAndReplays) {
  const DatacenterState state = table1_state();
  for (RunAlgorithm a : {RunAlgorithm::kFirstFit, RunAlgorithm::kBestFit}) {
    const RunReport r = run(state, Config{}, a);
    EXPECT_EQ(r.mode, RunMode::kRepack);
    EXPECT_EQ(r.replay_check(), ReplayCheck::kFinalOnly);
    EXPECT_TRUE(r.unplaced.empty());
    EXPECT_EQ(apply_plan(state, r.plan, 100, ReplayCheck::kFinalOnly), r.after);
    EXPECT_LE(r.metrics.servers_used, 4u);
  }
}

TEST(Run, InfeasibleRepackKeepsBefore) {
  // 3 x 60 under pre_max 70 needs three servers; only two exist.
  DatacenterState state = testing::cpu_state({{60}, {60}});
  testing::add_waiting(state, "w", {60});
  const RunReport r = run(state, Config{}, RunAlgorithm::kBestFit);
  EXPECT_TRUE(r.infeasible());
  EXPECT_EQ(r.after, r.before);
}

TEST(Compare, RowsInRequestedOrder) {
  const Comparison c = compare(table1_state(), Config{},
                               {RunAlgorithm::kBestFit, RunAlgorithm::kDrma}, "table1");
  ASSERT_EQ(c.rows.size(), 2u);
  EXPECT_EQ(c.rows[0].algorithm, RunAlgorithm::kBestFit);
  EXPECT_EQ(c.rows[0].mode, RunMode::kRepack);
  EXPECT_EQ(c.rows[1].metrics.tasks_migrated, 3u);
  EXPECT_EQ(c.rows[1].metrics.servers_released, 1u);
  EXPECT_EQ(compare(table1_state(), Config{}, {RunAlgorithm::kDrma}).rows.size(), 1u);
}

TEST(ParseAlgorithm, NamesAndLists) {
  EXPECT_EQ(parse_algorithm("best-fit"), RunAlgorithm::kBestFit);
  EXPECT_EQ(parse_algorithm_list("all").size(), 3u);
  EXPECT_EQ(parse_algorithm_list("drma,first-fit"),
            (std::vector<RunAlgorithm>{RunAlgorithm::kDrma, RunAlgorithm::kFirstFit}));
  EXPECT_THROW(parse_algorithm("worst-fit"), InvalidArgument);
  EXPECT_THROW(parse_emit_format("xml"), InvalidArgument);
}

TEST(Emit, TableBeforeAndAfterTotals) {
  const RunReport r = run(table1_state(), Config{}, RunAlgorithm::kDrma, "table1");
  const std::string text = emitted(r, EmitFormat::kTable);
  const auto before = text.find("Before");
  const auto after = text.find("After");
  ASSERT_NE(before, std::string::npos);
  ASSERT_NE(after, std::string::npos);
  EXPECT_NE(text.find("List of Servers"), std::string::npos);
  const std::string b = text.substr(before, after - before);
  for (const char* row : {"S1\t10\t30\t30\t0\t0\t70", "S3\t20\t10\t10\t0\t0\t40"}) {
    EXPECT_NE(b.find(row), std::string::npos) << row;
  }
  const std::string a = text.substr(after);
  for (const char* row : {"S1\t10\t30\t30\t20\t10\t100", "S2\t30\t20\t20\t10\t0\t80",
                          "S3\t0\t0\t0\t0\t0\t0", "S4\t40\t20\t10\t0\t0\t70"}) {
    EXPECT_NE(a.find(row), std::string::npos) << row;
  }
}

TEST(Emit, CsvPhases) {
  const RunReport r = run(table1_state(), Config{}, RunAlgorithm::kDrma);
  const auto after = lines(emitted(r, EmitFormat::kCsv));
  ASSERT_EQ(after.size(), 5u);
  EXPECT_EQ(after[0], "server,task1,task2,task3,task4,task5,total");
  EXPECT_EQ(after[1], "S1,10,30,30,20,10,100");
  EXPECT_EQ(after[3], "S3,0,0,0,0,0,0");
  const auto before = lines(emitted(r, EmitFormat::kCsv, TablePhase::kBefore));
  EXPECT_EQ(before[3], "S3,20,10,10,0,0,40");
}

TEST(Emit, PlotDataIsCumulative) {
  const RunReport r = run(table1_state(), Config{}, RunAlgorithm::kDrma);
  const auto rows = lines(emitted(r, EmitFormat::kPlotData));
  EXPECT_EQ(rows[0], "series,x,y");
  EXPECT_EQ(rows[1], "before/S1,1,10");
  EXPECT_EQ(rows[2], "before/S1,2,40");
  EXPECT_NE(std::find(rows.begin(), rows.end(), "after/S1,5,100"), rows.end());
}

TEST(Emit, JsonCarriesMetricsAndPlan) {
  const RunReport r = run(table1_state(), Config{}, RunAlgorithm::kDrma, "table1");
  const auto doc = nlohmann::json::parse(emitted(r, EmitFormat::kJson));
  EXPECT_EQ(doc.at("scenario"), "table1");
  EXPECT_EQ(doc.at("metrics").at("tasks_migrated"), 3);
  EXPECT_EQ(doc.at("plan").size(), 3u);
}

TEST(Emit, ByteDeterministic) {
  const Scenario s = load_scenario(testing::scenario_dir() / "generated.json");
  for (EmitFormat f : {EmitFormat::kTable, EmitFormat::kCsv, EmitFormat::kJson,
                       EmitFormat::kPlotData}) {
    const RunReport a = run(s.state, s.config, RunAlgorithm::kDrma, s.id);
    const RunReport b = run(s.state, s.config, RunAlgorithm::kDrma, s.id);
    EXPECT_EQ(emitted(a, f), emitted(b, f));
  }
}

TEST(Emit, AfterTableReplaysFromBeforeAndPlan) {
  const RunReport r = run(table1_state(), Config{}, RunAlgorithm::kDrma);
  RunReport replayed = r;
  replayed.after = apply_plan(r.before, r.plan, 100);
  EXPECT_EQ(emitted(replayed, EmitFormat::kCsv), emitted(r, EmitFormat::kCsv));
}

TEST(Batch, DeterministicAndAggregated) {
  WorkloadSpec spec;
  const auto algos = parse_algorithm_list("all");
  const BatchSummary a = run_batch(spec, Config{}, algos, 50, 7);
  const BatchSummary b = run_batch(spec, Config{}, algos, 50, 7);
  ASSERT_EQ(a.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.rows[i].scenarios, 50u);
    EXPECT_DOUBLE_EQ(a.rows[i].mean_servers_used, b.rows[i].mean_servers_used);
    EXPECT_DOUBLE_EQ(a.rows[i].mean_tasks_migrated, b.rows[i].mean_tasks_migrated);
  }
  std::ostringstream x, y;
  emit(a, EmitFormat::kCsv, x);
  emit(b, EmitFormat::kCsv, y);
  EXPECT_EQ(x.str(), y.str());
}

TEST(Batch, SpecsDifferBySeed) {
  const auto specs = batch_specs(WorkloadSpec{}, 10, 1);
  ASSERT_EQ(specs.size(), 10u);
  EXPECT_NE(specs[0].seed, specs[1].seed);
  EXPECT_EQ(specs, batch_specs(WorkloadSpec{}, 10, 1));
}

}  // namespace
}  // namespace drma
