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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "drma/allocator.hpp"
#include "drma/oracle.hpp"
#include "drma/planner.hpp"
#include "drma/report.hpp"
#include "drma/scenario.hpp"
#include "drma/workload.hpp"

namespace {

using namespace drma;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Points> totals(const DatacenterState& state) {
  std::vector<Points> out;
  for (std::size_t s = 0; s < state.servers.size(); ++s) out.push_back(state.load(s)[0]);
  return out;
}

std::filesystem::path fixture(const char* name) {
  return std::filesystem::path(DRMA_SCENARIO_DIR) / name;
}

Outcome table_replication() {
  const auto start = Clock::now();
  const Scenario s = load_scenario(fixture("table1.json"));
  const RunReport r = run(s.state, s.config, RunAlgorithm::kDrma, s.id);
  const double elapsed = seconds_since(start);

  std::multiset<std::tuple<Points, ServerId, ServerId>> moves;
  for (const PlanStep& step : r.plan.moves()) {
    moves.emplace(s.state.task(step.task).demand[0], *step.from, step.to);
  }
  const std::multiset<std::tuple<Points, ServerId, ServerId>> expected = {
      {20, "S3", "S1"}, {10, "S3", "S1"}, {10, "S3", "S2"}};

  Outcome o;
  o.pass = totals(r.after) == std::vector<Points>{100, 80, 0, 70} &&
           r.metrics.servers_used == 3 && r.metrics.servers_released == 1 &&
           r.metrics.tasks_migrated == 3 && moves == expected &&
           r.plan.allocation_count() == 0 && elapsed < 1.0;
  std::ostringstream d;
  d << "totals";
  for (Points t : totals(r.after)) d << ' ' << t;
  d << ", used " << r.metrics.servers_used << ", released "
    << r.metrics.servers_released << ", migrated " << r.metrics.tasks_migrated
    << ", " << elapsed * 1000 << " ms";
  o.detail = d.str();
  return o;
}

Outcome threshold_gate() {
  Scenario s = load_scenario(fixture("table1.json"));
  s.config.post_max = 70;
  const RunReport r = run(s.state, s.config, RunAlgorithm::kDrma, s.id);
  Outcome o;
  o.pass = r.plan.steps.empty() && r.metrics.servers_released == 0 && r.after == r.before;
  o.detail = "plan steps " + std::to_string(r.plan.steps.size()) + ", released " +
             std::to_string(r.metrics.servers_released);
  return o;
}

// Every multiset of 1..max_tasks demands drawn from {10, ..., 70}.
void for_each_multiset(std::size_t max_tasks,
                       const std::function<void(const std::vector<Points>&)>& fn) {
  std::vector<Points> current;
  std::function<void(Points)> rec = [&](Points min_value) {
    if (!current.empty()) fn(current);
    if (current.size() == max_tasks) return;
    for (Points v = min_value; v <= 70; v += 10) {
      current.push_back(v);
      rec(v);
      current.pop_back();
    }
  };
  rec(10);
}

// Distinct placements of `items` onto servers with load <= limit. Two
// placements are the same when they produce the same multiset of server
// contents; server order follows first use.
void for_each_partition(const std::vector<Points>& items, Points limit,
                        const std::function<void(const std::vector<std::vector<Points>>&)>& fn) {
  std::set<std::vector<std::vector<Points>>> seen;
  std::vector<std::vector<Points>> bins;
  std::vector<Points> loads;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == items.size()) {
      std::vector<std::vector<Points>> key = bins;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) fn(bins);
      return;
    }
    for (std::size_t b = 0; b <= bins.size(); ++b) {
      const bool fresh = b == bins.size();
      if (fresh) {
        bins.emplace_back();
        loads.push_back(0);
      }
      if (loads[b] + items[i] <= limit) {
        bins[b].push_back(items[i]);
        loads[b] += items[i];
        rec(i + 1);
        loads[b] -= items[i];
        bins[b].pop_back();
      }
      if (fresh) {
        bins.pop_back();
        loads.pop_back();
      }
    }
  };
  rec(0);
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const Config config;
  const ResourceVector capacity = make_resources({kDefaultCapacity});
  std::size_t packing_instances = 0;
  std::size_t packing_violations = 0;
  double worst_ratio = 1.0;
  std::vector<Points> worst_instance;
  std::size_t states = 0;
  std::size_t oracle_calls = 0;
  std::size_t migration_violations = 0;

  for_each_multiset(6, [&](const std::vector<Points>& demands) {
    // (a) best-fit repack onto empty servers against the optimum, both
    // under the allocation threshold.
    DatacenterState empty(1);
    std::vector<ResourceVector> vectors;
    for (std::size_t s = 0; s < demands.size(); ++s) empty.add_server("S" + std::to_string(s + 1));
    for (std::size_t t = 0; t < demands.size(); ++t) {
      empty.add_task("t" + std::to_string(t + 1), make_resources({demands[t]}));
      vectors.push_back(make_resources({demands[t]}));
    }
    const PackResult packed = pack_all(empty.tasks, empty, Algorithm::kBestFit, config);
    const auto opt = oracle::optimal_bin_count(vectors, capacity, config.pre_max);
    ++packing_instances;
    const std::size_t used = packed.state.non_empty_server_count();
    if (!packed.unplaced.empty() || used < opt.optimum) ++packing_violations;
    const double ratio = static_cast<double>(used) / static_cast<double>(opt.optimum);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_instance = demands;
    }

    // (b) every distinct initial placement at or under pre_max.
    for_each_partition(demands, threshold_limit(kDefaultCapacity, config.pre_max),
                       [&](const std::vector<std::vector<Points>>& bins) {
      DatacenterState state(1);
      for (std::size_t b = 0; b < bins.size(); ++b) {
        const ServerId id = "S" + std::to_string(b + 1);
        state.add_server(id);
        for (std::size_t j = 0; j < bins[b].size(); ++j) {
          state.add_task(id + "-" + std::to_string(j + 1), make_resources({bins[b][j]}), id);
        }
      }
      ++states;
      const ConsolidationReport r = drma::drma(state, config);
      if (r.metrics.servers_released == 0) return;
      ++oracle_calls;
      // Capped at drma's own count: absent means the optimum needs more
      // moves than drma used, which would be a violation.
      const auto best = oracle::min_migrations_to_release(
          state, r.metrics.servers_released, config, r.metrics.tasks_migrated);
      if (!best || *best > r.metrics.tasks_migrated) ++migration_violations;
    });
  });

  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = packing_violations == 0 && migration_violations == 0 && elapsed < 60.0;
  std::ostringstream d;
  d << packing_instances << " packings (" << packing_violations << " below optimum), "
    << states << " states, " << oracle_calls << " migration oracle calls ("
    << migration_violations << " below optimum), max best-fit/optimal ratio "
    << worst_ratio;
  if (!worst_instance.empty()) {
    d << " at {";
    for (std::size_t i = 0; i < worst_instance.size(); ++i) {
      d << (i ? "," : "") << worst_instance[i];
    }
    d << "}";
  }
  d << ", " << elapsed << " s";
  o.detail = d.str();
  return o;
}

// Returns the first violated property for one consolidate run, or empty.
std::string check_run(const DatacenterState& before, const Config& config) {
  const ConsolidationReport r = consolidate(before, config);
  if (r.after.tasks.size() != before.tasks.size()) return "task count changed";
  for (std::size_t i = 0; i < before.tasks.size(); ++i) {
    const Task& a = before.tasks[i];
    const Task& b = r.after.tasks[i];
    if (a.id != b.id || !same_resources(a.demand, b.demand)) return "task altered";
    if (a.placement.has_value() != b.placement.has_value()) return "task lost";
  }
  if (!validate_state(r.after).empty()) return "after-state invalid";

  // Replay step by step, checking post_max after each step.
  DatacenterState replay = before;
  for (const PlanStep& step : r.plan.steps) {
    Plan one;
    one.steps.push_back(step);
    try {
      replay = apply_plan(replay, one, config.post_max);
    } catch (const Error& e) {
      return std::string("replay step failed: ") + e.what();
    }
    for (std::size_t s = 0; s < replay.servers.size(); ++s) {
      if (!all_leq(replay.load(s), threshold_limit(replay.servers[s].capacity, config.post_max))) {
        return "threshold exceeded during replay";
      }
    }
  }
  if (!(replay == r.after)) return "replay differs from reported after-state";
  if (r.after.non_empty_server_count() > before.non_empty_server_count()) {
    return "servers_used increased";
  }
  for (const PlanStep& step : r.plan.moves()) {
    const auto src = r.after.server_index(*step.from);
    if (!src || !r.after.servers[*src].empty()) return "partial evacuation of " + *step.from;
  }
  std::size_t on_released = 0;
  for (const ServerId& id : r.released) {
    on_released += before.tasks_on(*before.server_index(id)).size();
  }
  if (r.plan.move_count() > on_released) return "migration budget exceeded";
  const CostBenefit cb = cost_benefit(r.plan, r.metrics.servers_released, before, config);
  if (cb.cost > cb.benefit) return "cost exceeds benefit";
  if (!(cb == r.cost_benefit)) return "reported cost/benefit differs";
  const ConsolidationMetrics m = compute_metrics(before, r.after, r.plan);
  if (!(m == r.metrics)) return "reported metrics differ";
  return {};
}

Outcome property_suite() {
  const Config config;
  SeededRng rng(20260101);
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::size_t released = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    WorkloadSpec spec;
    spec.n_servers = 4 + rng.below(13);
    spec.dims = 1 + static_cast<int>(rng.below(2));
    spec.seed = rng.next();
    const DatacenterState before = generate_scenario(spec);
    const std::string problem = check_run(before, config);
    ++runs;
    if (!problem.empty()) {
      ++violations;
      if (first.empty()) first = "seed " + std::to_string(spec.seed) + ": " + problem;
    }
    released += consolidate(before, config).metrics.servers_released;
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(violations) +
             " violations, " + std::to_string(released) + " servers released";
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

Outcome determinism() {
  auto render = [](const char* name, EmitFormat format) {
    const Scenario s = load_scenario(fixture(name));
    const RunReport r = run(s.state, s.config, RunAlgorithm::kDrma, s.id);
    std::ostringstream out;
    emit(r, format, out);
    return out.str();
  };
  std::size_t compared = 0;
  std::size_t differing = 0;
  for (const char* name : {"table1.json", "generated.json"}) {
    for (EmitFormat f : {EmitFormat::kCsv, EmitFormat::kPlotData, EmitFormat::kJson}) {
      ++compared;
      if (render(name, f) != render(name, f)) ++differing;
    }
  }
  // Seeded generation end to end.
  WorkloadSpec spec;
  spec.n_servers = 12;
  spec.seed = 99;
  for (EmitFormat f : {EmitFormat::kCsv, EmitFormat::kPlotData, EmitFormat::kJson}) {
    std::string outputs[2];
    for (auto& text : outputs) {
      const RunReport r = run(generate_scenario(spec), Config{}, RunAlgorithm::kDrma, "gen");
      std::ostringstream out;
      emit(r, f, out);
      text = out.str();
    }
    ++compared;
    if (outputs[0] != outputs[1]) ++differing;
  }
  Outcome o;
  o.pass = differing == 0;
  o.detail = std::to_string(compared) + " output pairs, " + std::to_string(differing) +
             " differing";
  return o;
}

Outcome generator_contract() {
  const WorkloadSpec base;  // 4 servers, 5 slots, totals 40..70
  SeededRng rng(6);
  std::size_t bad = 0;
  std::size_t rows = 0;
  for (int i = 0; i < 1000; ++i) {
    // Direct draws: the row must sum to the drawn total.
    const Points steps = (base.total_hi - base.total_lo) / base.granularity + 1;
    const Points total = base.total_lo + base.granularity *
                                              static_cast<Points>(rng.below(steps));
    const auto row = generate_server_load(total, base.slots_per_server, rng, base.granularity);
    Points sum = 0;
    for (Points d : row) {
      if (d < 0 || d % base.granularity != 0) ++bad;
      sum += d;
    }
    if (sum != total || row.size() != base.slots_per_server) ++bad;
    ++rows;

    // Whole scenarios: every server total within range and on the grid.
    WorkloadSpec spec = base;
    spec.seed = static_cast<std::uint64_t>(i);
    const DatacenterState state = generate_scenario(spec);
    for (std::size_t s = 0; s < state.servers.size(); ++s) {
      const Points t = state.load(s)[0];
      if (t < base.total_lo || t > base.total_hi || t % base.granularity != 0) ++bad;
      ++rows;
    }
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(rows) + " rows checked, " + std::to_string(bad) + " out of contract";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {1, "table replication", table_replication},
      {2, "threshold gate", threshold_gate},
      {3, "oracle equivalence", oracle_equivalence},
      {4, "property suite", property_suite},
      {5, "determinism", determinism},
      {6, "generator contract", generator_contract},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << " ("
              << c.name << "): " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
