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

#include "drma/metrics.hpp"

#include <algorithm>

namespace drma {

ConsolidationMetrics compute_metrics(const DatacenterState& before,
                                     const DatacenterState& after,
                                     const Plan& plan, ReplayCheck check) {
  DatacenterState replayed;
  try {
    replayed = apply_plan(before, plan, kDefaultCapacity, check);
  } catch (const Error& e) {
    throw StateMismatch(std::string("plan does not replay: ") + e.what());
  }
  if (!(replayed == after)) {
    throw StateMismatch("after-state is not the replay of the plan");
  }
  ConsolidationMetrics m;
  m.servers_used = after.non_empty_server_count();
  for (std::size_t s = 0; s < before.servers.size(); ++s) {
    if (!before.servers[s].empty() && after.servers[s].empty()) {
      ++m.servers_released;
    }
  }
  m.tasks_migrated = plan.move_count();
  return m;
}

std::size_t placement_changes(const DatacenterState& before,
                              const DatacenterState& after) {
  std::size_t changed = 0;
  for (const Task& t : before.tasks) {
    if (!t.placement) continue;
    auto i = after.task_index(t.id);
    if (i && after.tasks[*i].placement && *after.tasks[*i].placement != *t.placement) {
      ++changed;
    }
  }
  return changed;
}

std::size_t UtilizationTable::max_tasks_per_server() const {
  std::size_t out = 0;
  for (const UtilizationRow& r : rows) out = std::max(out, r.tasks.size());
  return out;
}

UtilizationTable utilization_report(const DatacenterState& state) {
  UtilizationTable table;
  table.dims = state.dims;
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    const Server& server = state.servers[s];
    UtilizationRow row;
    row.server = server.id;
    for (const Task* t : state.tasks_on(s)) {
      row.tasks.push_back(t->id);
      row.demands.push_back(t->demand);
    }
    row.total = state.load(s);
    row.utilization = Eigen::VectorXd::Zero(state.dims);
    for (int d = 0; d < state.dims; ++d) {
      if (server.capacity[d] > 0) {
        row.utilization[d] = 100.0 * static_cast<double>(row.total[d]) /
                             static_cast<double>(server.capacity[d]);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace drma
