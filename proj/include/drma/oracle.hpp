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

// Exhaustive ground truth for small instances. Nothing here shares code with
// the allocator or planner; only the model types are common.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "drma/model.hpp"

namespace drma::oracle {

inline constexpr std::size_t kMaxItems = 12;

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class InfeasibleItem : public Error {
 public:
  using Error::Error;
};

struct OracleResult {
  std::size_t optimum = 0;
  // Bin of each item, in restricted-growth form (item 0 in bin 0, every new
  // bin is the next unused index). Lexicographically first among optimal
  // packings.
  std::vector<std::size_t> witness;
};

// Minimum number of identical servers of `capacity` that hold all `demands`
// without any server exceeding `threshold`.
OracleResult optimal_bin_count(std::span<const ResourceVector> demands,
                               const ResourceVector& capacity,
                               Points threshold);

// Fewest single-task moves that leave at least `k` initially non-empty
// servers empty, with every destination within post_max after each move.
// nullopt means no move sequence gets there (or none within `max_moves`
// when a cap is given). Waiting tasks are ignored.
std::optional<std::size_t> min_migrations_to_release(
    const DatacenterState& state, std::size_t k, const Config& config,
    std::optional<std::size_t> max_moves = std::nullopt);

}  // namespace drma::oracle
