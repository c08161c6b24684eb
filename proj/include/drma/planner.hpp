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

// Migration planning: pairwise feasibility bounds, allocation with a single
// supporting migration, and whole-server consolidation.
//
// A migration is only ever committed as part of emptying a server. Each
// release attempt is all-or-nothing: if any task on the candidate cannot be
// placed elsewhere under post_max, nothing moves.

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "drma/allocator.hpp"
#include "drma/metrics.hpp"
#include "drma/model.hpp"

namespace drma {

// Larger of two servers' free capacities in dimension k.
Points pairwise_max_free(const DatacenterState& state, std::size_t si,
                         std::size_t sj, int k);
// Smaller of the two; the amount that can move between them in one go.
Points pairwise_min_free(const DatacenterState& state, std::size_t si,
                         std::size_t sj, int k);

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<std::size_t> target;  // set when feasible
  Points bound = 0;                   // pairwise_max_free(si, sj)
};

// Can `task` (placed on neither server) go to the richer of si and sj?
// The richer server is the one with more free capacity in the primary
// dimension, lowest index on ties.
FeasibilityVerdict migration_feasible(const Task& task,
                                      const DatacenterState& state,
                                      std::size_t si, std::size_t sj,
                                      const Config& config);

struct AllocationDiagnosis {
  bool infeasible = false;
  Points max_pairwise_free = 0;
  Points min_pairwise_free = 0;  // smallest pairwise-min bound over all pairs
};

AllocationDiagnosis diagnose_allocation(const Task& task,
                                        const DatacenterState& state,
                                        const Config& config);

// True when no server takes `task` under post_max, directly or after one
// supporting migration.
bool allocation_infeasible(const Task& task, const DatacenterState& state,
                           const Config& config);

struct MigrationAllocation {
  Plan delta;  // one move, then one allocation
  DatacenterState state;
};

// Makes room for a waiting task that no server can take under pre_max.
// Targets are scanned by free capacity (ascending by default, see
// Config::target_order); candidates are tasks on the other servers in
// ascending demand order. The first candidate that fits the target and whose
// departure lets the current task fit on its old server is moved. Throws
// InvalidArgument when the task is not waiting or fits directly under
// pre_max.
std::optional<MigrationAllocation> drma_allocate_with_migration(
    const Task& task, const DatacenterState& state, const Config& config);

struct CostBenefit {
  double cost = 0;     // points moved (primary dimension) x cost weight
  double benefit = 0;  // servers released x benefit weight

  friend bool operator==(const CostBenefit&, const CostBenefit&) = default;
};

// Demands are looked up in `reference`, which must contain every moved task.
CostBenefit cost_benefit(const Plan& plan, std::size_t released,
                         const DatacenterState& reference,
                         const Config& config);

struct GateDecision {
  bool commit = false;
  CostBenefit value;
};

// Commits iff cost <= benefit.
GateDecision cost_benefit_gate(const Plan& plan, std::size_t released,
                               const DatacenterState& reference,
                               const Config& config);

// Non-empty server with the smallest primary-dimension load, lowest index on
// ties, skipping servers in `failed`.
std::optional<std::size_t> select_release_candidate(
    const DatacenterState& state, const Config& config,
    const std::set<std::size_t>& failed = {});

// Rewrites A->B, B->C chains of the same task into A->C, dropping moves that
// end where they started. Allocations are left alone.
Plan collapse_chained_moves(const Plan& plan);

struct ConsolidationReport {
  DatacenterState before;
  DatacenterState after;
  Plan plan;
  std::vector<ServerId> released;       // in release order
  std::vector<ServerId> failed;         // candidates that could not be emptied
  std::vector<TaskId> unplaced;         // waiting tasks nothing could take
  ConsolidationMetrics metrics;
  CostBenefit cost_benefit;
};

// Releases servers one candidate at a time, smallest load first. Empty
// servers are never used as destinations.
ConsolidationReport consolidate(const DatacenterState& state,
                                const Config& config);

// Full pipeline: allocate waiting tasks (best fit under pre_max, then under
// post_max, then with one supporting migration) and consolidate.
ConsolidationReport drma(const DatacenterState& state, const Config& config);

}  // namespace drma
