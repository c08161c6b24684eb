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

// First-fit and best-fit placement of waiting tasks.
//
// Feasibility ("fits") is always checked in every dimension against the
// active threshold. Selection and ordering look only at the primary
// dimension k, with dimension k+1 as the secondary sort key.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "drma/model.hpp"

namespace drma {

enum class FitKind { kExact, kClosest, kFirst };

const char* to_string(FitKind kind);

struct PlacementDecision {
  TaskId task;
  std::size_t server = 0;
  ServerId server_id;
  FitKind kind = FitKind::kFirst;
};

// Initial allocation is bounded by pre_max, allocation that happens while
// migrating by post_max.
enum class Phase { kAllocation, kMigration };

Points phase_threshold(const Config& config, Phase phase);

// Servers flagged true are skipped. A shorter (or empty) mask excludes
// nothing beyond its length.
using ServerMask = std::vector<bool>;

struct FitQuery {
  Points threshold = 100;
  int primary_dim = 0;
  ServerMask excluded;
};

// Strict weak order for descending placement: demand[k] desc, then
// demand[k+1] desc when that dimension exists, then id asc.
bool precedes_desc(const Task& a, const Task& b, int k);

std::vector<Task> sort_tasks_desc(std::vector<Task> tasks, int k);
void sort_tasks_desc(std::vector<const Task*>& tasks, int k);

// Lowest-index server whose free capacity in the primary dimension equals
// the task's demand there and that fits the task under the threshold.
std::optional<std::size_t> find_exact_fit(const Task& task,
                                          const DatacenterState& state,
                                          const FitQuery& query);

// Feasible server minimizing free[k] - demand[k]; lowest index on ties.
std::optional<std::size_t> find_closest_fit(const Task& task,
                                            const DatacenterState& state,
                                            const FitQuery& query);

std::optional<std::size_t> find_first_fit(const Task& task,
                                          const DatacenterState& state,
                                          const FitQuery& query);

// nullopt means no server fits: the caller hands the task to migration.
std::optional<PlacementDecision> best_fit_allocate(
    const Task& task, const DatacenterState& state, const Config& config,
    Phase phase = Phase::kAllocation, const ServerMask& excluded = {});

std::optional<PlacementDecision> first_fit_allocate(
    const Task& task, const DatacenterState& state, const Config& config,
    Phase phase = Phase::kAllocation, const ServerMask& excluded = {});

enum class Algorithm { kFirstFit, kBestFit };

struct PackResult {
  DatacenterState state;
  std::vector<TaskId> unplaced;
  std::vector<PlacementDecision> decisions;
  Plan plan;  // one allocation per decision, in decision order
};

// Places `tasks` (all waiting in `state`) in sort_tasks_desc order. Tasks no
// server can take end up in `unplaced`.
PackResult pack_all(const std::vector<Task>& tasks,
                    const DatacenterState& state, Algorithm algorithm,
                    const Config& config, Phase phase = Phase::kAllocation);

}  // namespace drma
