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

#include "drma/allocator.hpp"

#include <algorithm>
#include <limits>

namespace drma {

const char* to_string(FitKind kind) {
  switch (kind) {
    case FitKind::kExact: return "exact";
    case FitKind::kClosest: return "closest";
    case FitKind::kFirst: return "first";
  }
  return "unknown";
}

Points phase_threshold(const Config& config, Phase phase) {
  return phase == Phase::kAllocation ? config.pre_max : config.post_max;
}

bool precedes_desc(const Task& a, const Task& b, int k) {
  if (a.demand[k] != b.demand[k]) return a.demand[k] > b.demand[k];
  const int next = k + 1;
  if (next < a.demand.size() && next < b.demand.size() &&
      a.demand[next] != b.demand[next]) {
    return a.demand[next] > b.demand[next];
  }
  return a.id < b.id;
}

namespace {

void check_dimension(const Task& task, int k) {
  if (k < 0 || k >= task.demand.size()) {
    throw InvalidArgument("task '" + task.id + "' has no dimension " +
                          std::to_string(k));
  }
}

bool excluded(const ServerMask& mask, std::size_t s) {
  return s < mask.size() && mask[s];
}

}  // namespace

std::vector<Task> sort_tasks_desc(std::vector<Task> tasks, int k) {
  for (const Task& t : tasks) check_dimension(t, k);
  std::stable_sort(tasks.begin(), tasks.end(),
                   [k](const Task& a, const Task& b) { return precedes_desc(a, b, k); });
  return tasks;
}

void sort_tasks_desc(std::vector<const Task*>& tasks, int k) {
  for (const Task* t : tasks) check_dimension(*t, k);
  std::stable_sort(tasks.begin(), tasks.end(), [k](const Task* a, const Task* b) {
    return precedes_desc(*a, *b, k);
  });
}

std::optional<std::size_t> find_exact_fit(const Task& task,
                                          const DatacenterState& state,
                                          const FitQuery& query) {
  const int k = query.primary_dim;
  check_dimension(task, k);
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    if (excluded(query.excluded, s)) continue;
    if (state.free_capacity(s)[k] == task.demand[k] &&
        fits(state, s, task.demand, query.threshold)) {
      return s;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> find_closest_fit(const Task& task,
                                            const DatacenterState& state,
                                            const FitQuery& query) {
  const int k = query.primary_dim;
  check_dimension(task, k);
  std::optional<std::size_t> best;
  Points best_slack = std::numeric_limits<Points>::max();
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    if (excluded(query.excluded, s)) continue;
    if (!fits(state, s, task.demand, query.threshold)) continue;
    const Points slack = state.free_capacity(s)[k] - task.demand[k];
    if (slack < best_slack) {
      best = s;
      best_slack = slack;
    }
  }
  return best;
}

std::optional<std::size_t> find_first_fit(const Task& task,
                                          const DatacenterState& state,
                                          const FitQuery& query) {
  check_dimension(task, query.primary_dim);
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    if (excluded(query.excluded, s)) continue;
    if (fits(state, s, task.demand, query.threshold)) return s;
  }
  return std::nullopt;
}

namespace {

PlacementDecision decide(const Task& task, const DatacenterState& state,
                         std::size_t s, FitKind kind) {
  return PlacementDecision{task.id, s, state.servers[s].id, kind};
}

}  // namespace

std::optional<PlacementDecision> best_fit_allocate(const Task& task,
                                                   const DatacenterState& state,
                                                   const Config& config,
                                                   Phase phase,
                                                   const ServerMask& excluded) {
  const FitQuery query{phase_threshold(config, phase), config.primary_dim,
                       excluded};
  if (auto s = find_exact_fit(task, state, query)) {
    return decide(task, state, *s, FitKind::kExact);
  }
  if (auto s = find_closest_fit(task, state, query)) {
    return decide(task, state, *s, FitKind::kClosest);
  }
  return std::nullopt;
}

std::optional<PlacementDecision> first_fit_allocate(
    const Task& task, const DatacenterState& state, const Config& config,
    Phase phase, const ServerMask& excluded) {
  const FitQuery query{phase_threshold(config, phase), config.primary_dim,
                       excluded};
  if (auto s = find_first_fit(task, state, query)) {
    return decide(task, state, *s, FitKind::kFirst);
  }
  return std::nullopt;
}

PackResult pack_all(const std::vector<Task>& tasks,
                    const DatacenterState& state, Algorithm algorithm,
                    const Config& config, Phase phase) {
  PackResult result{state, {}, {}, {}};
  for (const Task& t : sort_tasks_desc(tasks, config.primary_dim)) {
    auto index = result.state.task_index(t.id);
    if (!index || !result.state.tasks[*index].waiting()) {
      throw InvalidArgument("pack_all expects waiting task '" + t.id + "'");
    }
    const Task& task = result.state.tasks[*index];
    auto decision = algorithm == Algorithm::kBestFit
                        ? best_fit_allocate(task, result.state, config, phase)
                        : first_fit_allocate(task, result.state, config, phase);
    if (!decision) {
      result.unplaced.push_back(t.id);
      continue;
    }
    result.state.place(t.id, decision->server);
    result.plan.add_allocation(t.id, decision->server_id);
    result.decisions.push_back(std::move(*decision));
  }
  return result;
}

}  // namespace drma
