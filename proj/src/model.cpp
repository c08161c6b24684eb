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

#include "drma/model.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <utility>

namespace drma {

Server& DatacenterState::add_server(ServerId id,
                                    std::optional<ResourceVector> capacity) {
  servers.push_back(Server{
      std::move(id),
      capacity ? std::move(*capacity) : uniform_resources(dims, kDefaultCapacity),
      {}});
  return servers.back();
}

Task& DatacenterState::add_task(TaskId id, ResourceVector demand,
                                std::optional<ServerId> on) {
  if (on) {
    auto s = server_index(*on);
    if (!s) throw InvalidArgument("unknown server '" + *on + "'");
    servers[*s].placed.push_back(id);
  }
  tasks.push_back(Task{std::move(id), std::move(demand), std::move(on)});
  return tasks.back();
}

std::optional<std::size_t> DatacenterState::server_index(
    const ServerId& id) const {
  for (std::size_t i = 0; i < servers.size(); ++i) {
    if (servers[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> DatacenterState::task_index(const TaskId& id) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id == id) return i;
  }
  return std::nullopt;
}

const Task& DatacenterState::task(const TaskId& id) const {
  auto i = task_index(id);
  if (!i) throw InvalidArgument("unknown task '" + id + "'");
  return tasks[*i];
}

ResourceVector DatacenterState::load(std::size_t s) const {
  ResourceVector total = ResourceVector::Zero(dims);
  for (const TaskId& id : servers.at(s).placed) {
    if (auto t = task_index(id); t && tasks[*t].demand.size() == dims) {
      total += tasks[*t].demand;
    }
  }
  return total;
}

ResourceVector DatacenterState::free_capacity(std::size_t s) const {
  return servers.at(s).capacity - load(s);
}

std::vector<const Task*> DatacenterState::tasks_on(std::size_t s) const {
  const ServerId& id = servers.at(s).id;
  std::vector<const Task*> out;
  for (const Task& t : tasks) {
    if (t.placement && *t.placement == id) out.push_back(&t);
  }
  return out;
}

std::vector<const Task*> DatacenterState::waiting_tasks() const {
  std::vector<const Task*> out;
  for (const Task& t : tasks) {
    if (t.waiting()) out.push_back(&t);
  }
  return out;
}

std::size_t DatacenterState::non_empty_server_count() const {
  return static_cast<std::size_t>(
      std::count_if(servers.begin(), servers.end(),
                    [](const Server& s) { return !s.empty(); }));
}

void DatacenterState::place(const TaskId& id, std::size_t s) {
  auto t = task_index(id);
  if (!t) throw InvalidArgument("unknown task '" + id + "'");
  unplace(id);
  servers.at(s).placed.push_back(id);
  tasks[*t].placement = servers[s].id;
}

void DatacenterState::unplace(const TaskId& id) {
  auto t = task_index(id);
  if (!t) throw InvalidArgument("unknown task '" + id + "'");
  for (Server& server : servers) {
    std::erase(server.placed, id);
  }
  tasks[*t].placement.reset();
}

bool operator==(const DatacenterState& a, const DatacenterState& b) {
  if (a.dims != b.dims || a.servers.size() != b.servers.size() ||
      a.tasks.size() != b.tasks.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.servers.size(); ++i) {
    const Server& x = a.servers[i];
    const Server& y = b.servers[i];
    if (x.id != y.id || !same_resources(x.capacity, y.capacity)) return false;
    std::multiset<TaskId> px(x.placed.begin(), x.placed.end());
    std::multiset<TaskId> py(y.placed.begin(), y.placed.end());
    if (px != py) return false;
  }
  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    const Task& x = a.tasks[i];
    const Task& y = b.tasks[i];
    if (x.id != y.id || x.placement != y.placement ||
        !same_resources(x.demand, y.demand)) {
      return false;
    }
  }
  return true;
}

ResourceVector threshold_limit(const ResourceVector& capacity,
                               Points threshold) {
  return capacity.unaryExpr(
      [threshold](Points c) { return threshold_limit(c, threshold); });
}

bool fits(const DatacenterState& state, std::size_t s,
          const ResourceVector& demand, Points threshold) {
  const Server& server = state.servers.at(s);
  return all_leq(state.load(s) + demand,
                 threshold_limit(server.capacity, threshold));
}

ResourceVector free_capacity(const DatacenterState& state, std::size_t s) {
  ResourceVector free = state.free_capacity(s);
  if (!all_non_negative(free)) {
    throw CapacityViolation("server '" + state.servers.at(s).id +
                            "' carries more than its capacity");
  }
  return free;
}

std::size_t Plan::move_count() const {
  return static_cast<std::size_t>(std::count_if(
      steps.begin(), steps.end(), [](const PlanStep& s) { return s.is_move(); }));
}

std::size_t Plan::allocation_count() const {
  return steps.size() - move_count();
}

std::vector<PlanStep> Plan::moves() const {
  std::vector<PlanStep> out;
  std::copy_if(steps.begin(), steps.end(), std::back_inserter(out),
               [](const PlanStep& s) { return s.is_move(); });
  return out;
}

std::vector<PlanStep> Plan::allocations() const {
  std::vector<PlanStep> out;
  std::copy_if(steps.begin(), steps.end(), std::back_inserter(out),
               [](const PlanStep& s) { return !s.is_move(); });
  return out;
}

void Plan::add_move(TaskId task, ServerId from, ServerId to) {
  steps.push_back(PlanStep{std::move(task), std::move(from), std::move(to)});
}

void Plan::add_allocation(TaskId task, ServerId to) {
  steps.push_back(PlanStep{std::move(task), std::nullopt, std::move(to)});
}

void Plan::append(const Plan& other) {
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
}

void validate_config(const Config& config, int dims) {
  if (config.pre_max <= 0 || config.pre_max > config.post_max ||
      config.post_max > 100) {
    throw InvalidArgument("thresholds must satisfy 0 < pre_max <= post_max <= 100");
  }
  if (config.primary_dim < 0 || config.primary_dim >= dims) {
    throw InvalidArgument("primary_dim out of range");
  }
  if (config.cost_per_point_moved < 0 ||
      config.benefit_per_server_released < 0) {
    throw InvalidArgument("cost and benefit weights must be non-negative");
  }
}

namespace {

void check_limit(const DatacenterState& state, std::size_t s,
                 Points threshold) {
  const Server& server = state.servers[s];
  if (!all_leq(state.load(s), threshold_limit(server.capacity, threshold))) {
    throw IntermediateCapacityViolation("server '" + server.id +
                                        "' exceeds threshold " +
                                        std::to_string(threshold));
  }
}

}  // namespace

DatacenterState apply_plan(const DatacenterState& state, const Plan& plan,
                           Points threshold, ReplayCheck check) {
  DatacenterState next = state;
  std::vector<std::size_t> touched;
  for (const PlanStep& step : plan.steps) {
    auto t = next.task_index(step.task);
    if (!t) throw InvalidMove("unknown task '" + step.task + "'");
    auto to = next.server_index(step.to);
    if (!to) throw InvalidMove("unknown server '" + step.to + "'");
    const Task& task = next.tasks[*t];
    if (step.from) {
      if (*step.from == step.to) {
        throw InvalidMove("move of '" + step.task + "' has from == to");
      }
      auto from = next.server_index(*step.from);
      if (!from || task.placement != step.from ||
          std::find(next.servers[*from].placed.begin(),
                    next.servers[*from].placed.end(),
                    step.task) == next.servers[*from].placed.end()) {
        throw InvalidMove("task '" + step.task + "' is not on '" + *step.from +
                          "'");
      }
    } else if (!task.waiting()) {
      throw InvalidMove("allocation of '" + step.task +
                        "' which is already placed");
    }
    next.place(step.task, *to);
    if (check == ReplayCheck::kEveryStep) {
      check_limit(next, *to, threshold);
    } else {
      touched.push_back(*to);
    }
  }
  for (std::size_t s : touched) check_limit(next, s, threshold);
  return next;
}

DatacenterState apply_plan(const DatacenterState& state, const Plan& plan,
                           const Config& config) {
  return apply_plan(state, plan, config.post_max);
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDimensionMismatch: return "DimensionMismatch";
    case ViolationKind::kNegativeQuantity: return "NegativeQuantity";
    case ViolationKind::kDuplicateServerId: return "DuplicateServerId";
    case ViolationKind::kDuplicateTaskId: return "DuplicateTaskId";
    case ViolationKind::kUnknownServer: return "UnknownServer";
    case ViolationKind::kUnknownTask: return "UnknownTask";
    case ViolationKind::kDuplicatePlacement: return "DuplicatePlacement";
    case ViolationKind::kPlacementMismatch: return "PlacementMismatch";
    case ViolationKind::kDemandExceedsCapacity: return "DemandExceedsCapacity";
    case ViolationKind::kCapacityViolation: return "CapacityViolation";
  }
  return "Unknown";
}

std::vector<Violation> validate_state(const DatacenterState& state) {
  std::vector<Violation> out;
  auto report = [&out](ViolationKind kind, const std::string& subject,
                       std::string message) {
    out.push_back(Violation{kind, subject, std::move(message)});
  };
  const int dims = state.dims;

  if (dims < 1) report(ViolationKind::kDimensionMismatch, "", "dims must be >= 1");
  for (const Server& s : state.servers) {
    if (s.capacity.size() != dims) {
      report(ViolationKind::kDimensionMismatch, s.id,
             "server capacity has " + std::to_string(s.capacity.size()) +
                 " dimensions, expected " + std::to_string(dims));
    }
  }
  for (const Task& t : state.tasks) {
    if (t.demand.size() != dims) {
      report(ViolationKind::kDimensionMismatch, t.id,
             "task demand has " + std::to_string(t.demand.size()) +
                 " dimensions, expected " + std::to_string(dims));
    }
  }

  for (const Server& s : state.servers) {
    if (!all_non_negative(s.capacity)) {
      report(ViolationKind::kNegativeQuantity, s.id, "negative capacity");
    }
  }
  for (const Task& t : state.tasks) {
    if (!all_non_negative(t.demand)) {
      report(ViolationKind::kNegativeQuantity, t.id, "negative demand");
    }
  }

  std::set<ServerId> server_ids;
  for (const Server& s : state.servers) {
    if (!server_ids.insert(s.id).second) {
      report(ViolationKind::kDuplicateServerId, s.id, "server id declared twice");
    }
  }
  std::set<TaskId> task_ids;
  for (const Task& t : state.tasks) {
    if (!task_ids.insert(t.id).second) {
      report(ViolationKind::kDuplicateTaskId, t.id, "task id declared twice");
    }
  }

  std::set<TaskId> flagged;
  for (const Task& t : state.tasks) {
    if (t.placement && !server_ids.contains(*t.placement)) {
      report(ViolationKind::kUnknownServer, t.id,
             "placed on unknown server '" + *t.placement + "'");
      flagged.insert(t.id);
    }
  }
  for (const Server& s : state.servers) {
    for (const TaskId& id : s.placed) {
      if (!task_ids.contains(id)) {
        report(ViolationKind::kUnknownTask, s.id,
               "lists unknown task '" + id + "'");
      }
    }
  }

  // Where each task id is listed, in server order.
  std::map<TaskId, std::vector<ServerId>> listed;
  for (const Server& s : state.servers) {
    for (const TaskId& id : s.placed) listed[id].push_back(s.id);
  }
  for (const Task& t : state.tasks) {
    auto it = listed.find(t.id);
    if (it != listed.end() && it->second.size() > 1) {
      report(ViolationKind::kDuplicatePlacement, t.id,
             "listed on " + std::to_string(it->second.size()) + " servers");
      flagged.insert(t.id);
    }
  }
  for (const Task& t : state.tasks) {
    if (flagged.contains(t.id)) continue;
    auto it = listed.find(t.id);
    const bool is_listed = it != listed.end();
    if (t.placement && (!is_listed || it->second.front() != *t.placement)) {
      report(ViolationKind::kPlacementMismatch, t.id,
             "placement says '" + *t.placement +
                 "' but the server does not list it");
    } else if (!t.placement && is_listed) {
      report(ViolationKind::kPlacementMismatch, t.id,
             "waiting task is listed on '" + it->second.front() + "'");
    }
  }

  if (dims >= 1) {
    ResourceVector max_capacity = ResourceVector::Zero(dims);
    for (const Server& s : state.servers) {
      if (s.capacity.size() == dims) max_capacity = max_capacity.cwiseMax(s.capacity);
    }
    for (const Task& t : state.tasks) {
      if (t.demand.size() == dims && !all_leq(t.demand, max_capacity)) {
        report(ViolationKind::kDemandExceedsCapacity, t.id,
               "demand exceeds every server's capacity");
      }
    }
    for (std::size_t i = 0; i < state.servers.size(); ++i) {
      const Server& s = state.servers[i];
      if (s.capacity.size() != dims) continue;
      if (!all_leq(state.load(i), s.capacity)) {
        report(ViolationKind::kCapacityViolation, s.id,
               "placed demands exceed capacity");
      }
    }
  }
  return out;
}

}  // namespace drma
