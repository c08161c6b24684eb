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

// Datacenter state, plans and their replay.
//
// States are plain values. Every operation in this library takes a state by
// const reference and hands back a new one, so a before-state can always be
// replayed against the plan that was derived from it.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drma/types.hpp"

namespace drma {

struct Task {
  TaskId id;
  ResourceVector demand;
  std::optional<ServerId> placement;  // nullopt while waiting

  bool waiting() const { return !placement.has_value(); }
};

struct Server {
  ServerId id;
  ResourceVector capacity;
  std::vector<TaskId> placed;  // set semantics; insertion order is kept

  bool empty() const { return placed.empty(); }
};

// A datacenter snapshot. Servers keep their declared order, which is the
// tie-break order used throughout. The struct can hold inconsistent data so
// that `validate_state` has something to report; the mutators below keep a
// consistent state consistent.
struct DatacenterState {
  int dims = 1;
  std::vector<Server> servers;
  std::vector<Task> tasks;

  DatacenterState() = default;
  explicit DatacenterState(int dimensions) : dims(dimensions) {}

  Server& add_server(ServerId id, std::optional<ResourceVector> capacity = {});
  // Appends a task; when `on` names a server the task is also listed there.
  Task& add_task(TaskId id, ResourceVector demand,
                 std::optional<ServerId> on = {});

  std::optional<std::size_t> server_index(const ServerId& id) const;
  std::optional<std::size_t> task_index(const TaskId& id) const;
  const Task& task(const TaskId& id) const;  // throws InvalidArgument

  // Sum of the demands of the tasks listed on server `s`.
  ResourceVector load(std::size_t s) const;
  ResourceVector free_capacity(std::size_t s) const;

  // Tasks on server `s` in task declaration order.
  std::vector<const Task*> tasks_on(std::size_t s) const;
  std::vector<const Task*> waiting_tasks() const;

  std::size_t non_empty_server_count() const;

  // Unchecked mutators; capacity is the caller's business.
  void place(const TaskId& task, std::size_t s);
  void unplace(const TaskId& task);

  friend bool operator==(const DatacenterState& a, const DatacenterState& b);
};

// Largest total a server of capacity `capacity` may carry under a threshold
// expressed in points of a 100-point server.
inline Points threshold_limit(Points capacity, Points threshold) {
  return capacity * threshold / 100;
}

ResourceVector threshold_limit(const ResourceVector& capacity,
                               Points threshold);

// True when server `s` can take `demand` on top of its current load without
// exceeding `threshold` in any dimension.
bool fits(const DatacenterState& state, std::size_t s,
          const ResourceVector& demand, Points threshold);

// Free capacity derived from a server's placed demands; throws
// CapacityViolation on an over-committed server.
ResourceVector free_capacity(const DatacenterState& state, std::size_t s);

// One step of a plan. A step without `from` allocates a waiting task; a step
// with `from` is a live migration.
struct PlanStep {
  TaskId task;
  std::optional<ServerId> from;
  ServerId to;

  bool is_move() const { return from.has_value(); }
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct Plan {
  std::vector<PlanStep> steps;

  std::size_t move_count() const;
  std::size_t allocation_count() const;
  std::vector<PlanStep> moves() const;
  std::vector<PlanStep> allocations() const;
  bool empty() const { return steps.empty(); }

  void add_move(TaskId task, ServerId from, ServerId to);
  void add_allocation(TaskId task, ServerId to);
  void append(const Plan& other);

  friend bool operator==(const Plan&, const Plan&) = default;
};

enum class TargetOrder { kAscending, kDescending };
enum class TieBreak { kLowestIndex };

struct Config {
  int primary_dim = 0;
  Points pre_max = 70;
  Points post_max = 100;
  double cost_per_point_moved = 1.0;
  double benefit_per_server_released = 100.0;
  TargetOrder target_order = TargetOrder::kAscending;
  TieBreak tie_break = TieBreak::kLowestIndex;
  std::uint64_t seed = 0;

  friend bool operator==(const Config&, const Config&) = default;
};

// Throws InvalidArgument unless 0 < pre_max <= post_max <= 100, the weights
// are non-negative and primary_dim < dims.
void validate_config(const Config& config, int dims);

enum class ReplayCheck {
  kEveryStep,  // every destination is checked right after each step
  kFinalOnly,  // only the end state is checked (repack baselines)
};

// Replays `plan` against `state`. Throws InvalidMove for a step that does not
// match the state and IntermediateCapacityViolation when a server ends up
// above `threshold`.
DatacenterState apply_plan(const DatacenterState& state, const Plan& plan,
                           Points threshold,
                           ReplayCheck check = ReplayCheck::kEveryStep);
DatacenterState apply_plan(const DatacenterState& state, const Plan& plan,
                           const Config& config);

enum class ViolationKind {
  kDimensionMismatch,
  kNegativeQuantity,
  kDuplicateServerId,
  kDuplicateTaskId,
  kUnknownServer,
  kUnknownTask,
  kDuplicatePlacement,
  kPlacementMismatch,
  kDemandExceedsCapacity,
  kCapacityViolation,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // offending task or server id
  std::string message;
};

// Every broken invariant, grouped by kind in enum order and then by
// declaration order. Empty means valid.
std::vector<Violation> validate_state(const DatacenterState& state);

}  // namespace drma
