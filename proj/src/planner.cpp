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

#include "drma/planner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace drma {

namespace {

void require_pair(std::size_t si, std::size_t sj) {
  if (si == sj) throw InvalidArgument("pairwise bound needs two distinct servers");
}

}  // namespace

Points pairwise_max_free(const DatacenterState& state, std::size_t si,
                         std::size_t sj, int k) {
  require_pair(si, sj);
  return std::max(state.free_capacity(si)[k], state.free_capacity(sj)[k]);
}

Points pairwise_min_free(const DatacenterState& state, std::size_t si,
                         std::size_t sj, int k) {
  require_pair(si, sj);
  return std::min(state.free_capacity(si)[k], state.free_capacity(sj)[k]);
}

FeasibilityVerdict migration_feasible(const Task& task,
                                      const DatacenterState& state,
                                      std::size_t si, std::size_t sj,
                                      const Config& config) {
  if (si == sj) throw InvalidArgument("migration_feasible needs two servers");
  const int k = config.primary_dim;
  const Points free_i = state.free_capacity(si)[k];
  const Points free_j = state.free_capacity(sj)[k];
  std::size_t richer;
  if (free_i != free_j) {
    richer = free_i > free_j ? si : sj;
  } else {
    richer = std::min(si, sj);
  }
  FeasibilityVerdict verdict;
  verdict.bound = std::max(free_i, free_j);
  if (verdict.bound >= task.demand[k] &&
      fits(state, richer, task.demand, config.post_max)) {
    verdict.feasible = true;
    verdict.target = richer;
  }
  return verdict;
}

namespace {

bool fits_anywhere(const Task& task, const DatacenterState& state,
                   Points threshold) {
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    if (fits(state, s, task.demand, threshold)) return true;
  }
  return false;
}

// Search behind drma_allocate_with_migration, without the precondition.
std::optional<MigrationAllocation> search_supporting_migration(
    const Task& task, const DatacenterState& state, const Config& config) {
  const int k = config.primary_dim;
  const std::size_t n = state.servers.size();

  std::vector<Points> free(n);
  for (std::size_t s = 0; s < n; ++s) free[s] = state.free_capacity(s)[k];
  std::vector<std::size_t> targets(n);
  std::iota(targets.begin(), targets.end(), std::size_t{0});
  std::stable_sort(targets.begin(), targets.end(),
                   [&](std::size_t a, std::size_t b) {
                     return config.target_order == TargetOrder::kAscending
                                ? free[a] < free[b]
                                : free[a] > free[b];
                   });

  for (std::size_t target : targets) {
    std::vector<const Task*> candidates;
    for (const Task& t : state.tasks) {
      if (t.placement && *t.placement != state.servers[target].id) {
        candidates.push_back(&t);
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [k](const Task* a, const Task* b) {
                       if (a->demand[k] != b->demand[k]) {
                         return a->demand[k] < b->demand[k];
                       }
                       return a->id < b->id;
                     });
    for (const Task* candidate : candidates) {
      if (!fits(state, target, candidate->demand, config.post_max)) continue;
      const std::size_t source = *state.server_index(*candidate->placement);
      DatacenterState next = state;
      next.place(candidate->id, target);
      if (!fits(next, source, task.demand, config.post_max)) continue;
      next.place(task.id, source);
      MigrationAllocation out{{}, std::move(next)};
      out.delta.add_move(candidate->id, state.servers[source].id,
                         state.servers[target].id);
      out.delta.add_allocation(task.id, state.servers[source].id);
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

AllocationDiagnosis diagnose_allocation(const Task& task,
                                        const DatacenterState& state,
                                        const Config& config) {
  AllocationDiagnosis d;
  d.infeasible = allocation_infeasible(task, state, config);
  const int k = config.primary_dim;
  bool first = true;
  for (std::size_t i = 0; i < state.servers.size(); ++i) {
    for (std::size_t j = i + 1; j < state.servers.size(); ++j) {
      const Points hi = pairwise_max_free(state, i, j, k);
      const Points lo = pairwise_min_free(state, i, j, k);
      d.max_pairwise_free = first ? hi : std::max(d.max_pairwise_free, hi);
      d.min_pairwise_free = first ? lo : std::min(d.min_pairwise_free, lo);
      first = false;
    }
  }
  return d;
}

bool allocation_infeasible(const Task& task, const DatacenterState& state,
                           const Config& config) {
  if (fits_anywhere(task, state, config.post_max)) return false;
  return !search_supporting_migration(task, state, config).has_value();
}

std::optional<MigrationAllocation> drma_allocate_with_migration(
    const Task& task, const DatacenterState& state, const Config& config) {
  auto index = state.task_index(task.id);
  if (!index || !state.tasks[*index].waiting()) {
    throw InvalidArgument("task '" + task.id + "' is not waiting");
  }
  if (fits_anywhere(task, state, config.pre_max)) {
    throw InvalidArgument("task '" + task.id +
                          "' fits directly; use best_fit_allocate");
  }
  return search_supporting_migration(task, state, config);
}

CostBenefit cost_benefit(const Plan& plan, std::size_t released,
                         const DatacenterState& reference,
                         const Config& config) {
  Points moved = 0;
  for (const PlanStep& step : plan.steps) {
    if (step.is_move()) moved += reference.task(step.task).demand[config.primary_dim];
  }
  return CostBenefit{static_cast<double>(moved) * config.cost_per_point_moved,
                     static_cast<double>(released) *
                         config.benefit_per_server_released};
}

GateDecision cost_benefit_gate(const Plan& plan, std::size_t released,
                               const DatacenterState& reference,
                               const Config& config) {
  const CostBenefit value = cost_benefit(plan, released, reference, config);
  return GateDecision{value.cost <= value.benefit, value};
}

std::optional<std::size_t> select_release_candidate(
    const DatacenterState& state, const Config& config,
    const std::set<std::size_t>& failed) {
  const int k = config.primary_dim;
  std::optional<std::size_t> best;
  Points best_load = std::numeric_limits<Points>::max();
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    if (state.servers[s].empty() || failed.contains(s)) continue;
    const Points load = state.load(s)[k];
    if (load < best_load) {
      best = s;
      best_load = load;
    }
  }
  return best;
}

Plan collapse_chained_moves(const Plan& plan) {
  Plan out;
  std::map<TaskId, std::size_t> last_move;  // task -> index in out.steps
  std::vector<bool> dropped;
  for (const PlanStep& step : plan.steps) {
    if (step.is_move()) {
      auto it = last_move.find(step.task);
      if (it != last_move.end() && !dropped[it->second]) {
        PlanStep& earlier = out.steps[it->second];
        earlier.to = step.to;
        if (earlier.from == earlier.to) dropped[it->second] = true;
        continue;
      }
      last_move[step.task] = out.steps.size();
    } else {
      last_move.erase(step.task);
    }
    out.steps.push_back(step);
    dropped.push_back(false);
  }
  Plan compact;
  for (std::size_t i = 0; i < out.steps.size(); ++i) {
    if (!dropped[i]) compact.steps.push_back(out.steps[i]);
  }
  return compact;
}

namespace {

struct ConsolidationPass {
  DatacenterState state;
  Plan plan;
  std::vector<ServerId> released;
  std::vector<ServerId> failed;
};

ConsolidationPass run_consolidation(const DatacenterState& start,
                                    const Config& config) {
  ConsolidationPass pass{start, {}, {}, {}};
  std::set<std::size_t> failed;
  while (auto candidate = select_release_candidate(pass.state, config, failed)) {
    const std::size_t c = *candidate;
    ServerMask excluded(pass.state.servers.size(), false);
    for (std::size_t s = 0; s < pass.state.servers.size(); ++s) {
      excluded[s] = s == c || pass.state.servers[s].empty();
    }

    std::vector<const Task*> evacuees = pass.state.tasks_on(c);
    sort_tasks_desc(evacuees, config.primary_dim);

    DatacenterState work = pass.state;
    Plan delta;
    bool emptied = true;
    for (const Task* t : evacuees) {
      work.unplace(t->id);
      auto decision = best_fit_allocate(work.task(t->id), work, config,
                                        Phase::kMigration, excluded);
      if (!decision) {
        emptied = false;
        break;
      }
      work.place(t->id, decision->server);
      delta.add_move(t->id, pass.state.servers[c].id, decision->server_id);
    }

    if (emptied && cost_benefit_gate(delta, 1, pass.state, config).commit) {
      pass.state = std::move(work);
      pass.plan.append(delta);
      pass.released.push_back(pass.state.servers[c].id);
    } else {
      pass.failed.push_back(pass.state.servers[c].id);
    }
    failed.insert(c);
  }
  pass.plan = collapse_chained_moves(pass.plan);
  return pass;
}

ConsolidationReport finish(const DatacenterState& before,
                           DatacenterState after, Plan plan,
                           const Config& config) {
  ConsolidationReport report;
  report.metrics = compute_metrics(before, after, plan);
  report.cost_benefit =
      cost_benefit(plan, report.metrics.servers_released, before, config);
  report.before = before;
  report.after = std::move(after);
  report.plan = std::move(plan);
  return report;
}

}  // namespace

ConsolidationReport consolidate(const DatacenterState& state,
                                const Config& config) {
  validate_config(config, state.dims);
  ConsolidationPass pass = run_consolidation(state, config);
  ConsolidationReport report =
      finish(state, std::move(pass.state), std::move(pass.plan), config);
  report.released = std::move(pass.released);
  report.failed = std::move(pass.failed);
  for (const Task* t : report.after.waiting_tasks()) {
    report.unplaced.push_back(t->id);
  }
  return report;
}

ConsolidationReport drma(const DatacenterState& state, const Config& config) {
  validate_config(config, state.dims);
  DatacenterState current = state;
  Plan plan;
  std::vector<TaskId> unplaced;

  std::vector<const Task*> waiting = state.waiting_tasks();
  sort_tasks_desc(waiting, config.primary_dim);
  for (const Task* w : waiting) {
    const Task& task = current.task(w->id);
    auto decision = best_fit_allocate(task, current, config, Phase::kAllocation);
    if (!decision) {
      decision = best_fit_allocate(task, current, config, Phase::kMigration);
    }
    if (decision) {
      current.place(task.id, decision->server);
      plan.add_allocation(task.id, decision->server_id);
      continue;
    }
    if (auto migrated = drma_allocate_with_migration(task, current, config)) {
      plan.append(migrated->delta);
      current = std::move(migrated->state);
      continue;
    }
    unplaced.push_back(task.id);
  }

  ConsolidationPass pass = run_consolidation(current, config);
  plan.append(pass.plan);
  ConsolidationReport report =
      finish(state, std::move(pass.state), std::move(plan), config);
  report.released = std::move(pass.released);
  report.failed = std::move(pass.failed);
  report.unplaced = std::move(unplaced);
  return report;
}

}  // namespace drma
