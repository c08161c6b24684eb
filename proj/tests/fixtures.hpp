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

#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "drma/model.hpp"

namespace drma::testing {

inline std::filesystem::path scenario_dir() { return DRMA_SCENARIO_DIR; }

// One-dimensional state from per-server CPU demands. Servers are "S1"..,
// tasks "Si-j", capacity 100.
inline DatacenterState cpu_state(
    std::initializer_list<std::initializer_list<Points>> servers) {
  DatacenterState state(1);
  std::size_t i = 1;
  for (const auto& demands : servers) {
    const ServerId id = "S" + std::to_string(i++);
    state.add_server(id);
    std::size_t j = 1;
    for (Points d : demands) {
      state.add_task(id + "-" + std::to_string(j++), make_resources({d}), id);
    }
  }
  return state;
}

// The table1 fixture: CPU demands per server, memory demand zero.
inline DatacenterState table1_state() {
  const std::vector<std::vector<Points>> rows = {
      {10, 30, 30}, {30, 20, 20}, {20, 10, 10}, {40, 20, 10}};
  DatacenterState state(2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ServerId id = "S" + std::to_string(i + 1);
    state.add_server(id);
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      state.add_task(id + "-" + std::to_string(j + 1),
                     make_resources({rows[i][j], Points{0}}), id);
    }
  }
  return state;
}

inline std::vector<Points> primary_totals(const DatacenterState& state,
                                          int k = 0) {
  std::vector<Points> out;
  for (std::size_t s = 0; s < state.servers.size(); ++s) {
    out.push_back(state.load(s)[k]);
  }
  return out;
}

// Adds a waiting task.
inline void add_waiting(DatacenterState& state, const TaskId& id,
                        std::initializer_list<Points> demand) {
  state.add_task(id, make_resources(demand));
}

}  // namespace drma::testing
