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

#pragma once

#include <cstddef>
#include <vector>

#include "drma/model.hpp"

namespace drma {

// Servers used, servers released and tasks migrated. A server counts as
// used when it carries at least one task; idle servers are switched off.
struct ConsolidationMetrics {
  std::size_t servers_used = 0;
  std::size_t servers_released = 0;  // non-empty before, empty after
  std::size_t tasks_migrated = 0;    // move steps in the plan

  friend bool operator==(const ConsolidationMetrics&,
                         const ConsolidationMetrics&) = default;
};

// Throws StateMismatch unless replaying `plan` over `before` gives `after`.
ConsolidationMetrics compute_metrics(
    const DatacenterState& before, const DatacenterState& after,
    const Plan& plan, ReplayCheck check = ReplayCheck::kEveryStep);

// Tasks placed in both states whose server differs.
std::size_t placement_changes(const DatacenterState& before,
                              const DatacenterState& after);

struct UtilizationRow {
  ServerId server;
  std::vector<TaskId> tasks;            // declaration order
  std::vector<ResourceVector> demands;  // parallel to `tasks`
  ResourceVector total;
  Eigen::VectorXd utilization;          // percent of capacity per dimension
};

struct UtilizationTable {
  int dims = 1;
  std::vector<UtilizationRow> rows;  // declared server order

  std::size_t max_tasks_per_server() const;
};

UtilizationTable utilization_report(const DatacenterState& state);

}  // namespace drma
