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

#include "drma/oracle.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace drma::oracle {

namespace {

class PartitionSearch {
 public:
  PartitionSearch(std::span<const ResourceVector> items, ResourceVector limit)
      : items_(items), limit_(std::move(limit)) {
    remaining_.assign(items.size() + 1, ResourceVector::Zero(limit_.size()));
    for (std::size_t i = items.size(); i-- > 0;) {
      remaining_[i] = remaining_[i + 1] + items[i];
    }
  }

  // Lexicographically first restricted-growth assignment into <= bins.
  std::optional<std::vector<std::size_t>> solve(std::size_t bins) {
    bins_ = bins;
    loads_.assign(bins, ResourceVector::Zero(limit_.size()));
    assignment_.assign(items_.size(), 0);
    if (place(0, 0)) return assignment_;
    return std::nullopt;
  }

 private:
  bool place(std::size_t item, std::size_t used) {
    if (item == items_.size()) return true;
    // Whatever is left has to fit into the spare room of all bins.
    ResourceVector spare = limit_ * static_cast<Points>(bins_);
    for (std::size_t b = 0; b < used; ++b) spare -= loads_[b];
    if (!all_leq(remaining_[item], spare)) return false;

    const std::size_t options = std::min(used + 1, bins_);
    for (std::size_t b = 0; b < options; ++b) {
      ResourceVector next = loads_[b] + items_[item];
      if (!all_leq(next, limit_)) continue;
      std::swap(loads_[b], next);
      assignment_[item] = b;
      if (place(item + 1, b == used ? used + 1 : used)) return true;
      std::swap(loads_[b], next);
    }
    return false;
  }

  std::span<const ResourceVector> items_;
  ResourceVector limit_;
  std::vector<ResourceVector> remaining_;  // suffix sums
  std::vector<ResourceVector> loads_;
  std::vector<std::size_t> assignment_;
  std::size_t bins_ = 0;
};

}  // namespace

OracleResult optimal_bin_count(std::span<const ResourceVector> demands,
                               const ResourceVector& capacity,
                               Points threshold) {
  if (demands.size() > kMaxItems) {
    throw InstanceTooLarge("optimal_bin_count handles at most " +
                           std::to_string(kMaxItems) + " items");
  }
  const ResourceVector limit = threshold_limit(capacity, threshold);
  ResourceVector total = ResourceVector::Zero(capacity.size());
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (demands[i].size() != capacity.size()) {
      throw InvalidArgument("demand and capacity dimensions differ");
    }
    if (!all_non_negative(demands[i]) || !all_leq(demands[i], limit)) {
      throw InfeasibleItem("item " + std::to_string(i) +
                           " does not fit an empty server");
    }
    total += demands[i];
  }
  if (demands.empty()) return {};

  std::size_t lower = 1;
  for (Eigen::Index d = 0; d < capacity.size(); ++d) {
    if (limit[d] > 0) {
      lower = std::max<std::size_t>(
          lower, static_cast<std::size_t>((total[d] + limit[d] - 1) / limit[d]));
    }
  }
  PartitionSearch search(demands, limit);
  for (std::size_t bins = lower; bins <= demands.size(); ++bins) {
    if (auto witness = search.solve(bins)) {
      return OracleResult{bins, std::move(*witness)};
    }
  }
  // One item per bin always works once every item fits on its own.
  throw Error("optimal_bin_count: unreachable");
}

std::optional<std::size_t> min_migrations_to_release(
    const DatacenterState& state, std::size_t k, const Config& config,
    std::optional<std::size_t> max_moves) {
  std::vector<const Task*> placed;
  for (const Task& t : state.tasks) {
    if (t.placement) placed.push_back(&t);
  }
  if (placed.size() > kMaxItems) {
    throw InstanceTooLarge("min_migrations_to_release handles at most " +
                           std::to_string(kMaxItems) + " placed tasks");
  }
  if (k == 0) return 0;

  const std::size_t n = state.servers.size();
  if (n > 255) throw InstanceTooLarge("too many servers");
  std::vector<ResourceVector> limits;
  for (const Server& s : state.servers) {
    limits.push_back(threshold_limit(s.capacity, config.post_max));
  }

  // A search node is the server index of every placed task, one byte each.
  std::string start(placed.size(), '\0');
  std::vector<bool> initially_used(n, false);
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const std::size_t s = *state.server_index(*placed[i]->placement);
    start[i] = static_cast<char>(s);
    initially_used[s] = true;
  }

  auto loads_of = [&](const std::string& node) {
    std::vector<ResourceVector> loads(n, ResourceVector::Zero(state.dims));
    for (std::size_t i = 0; i < placed.size(); ++i) {
      loads[static_cast<unsigned char>(node[i])] += placed[i]->demand;
    }
    return loads;
  };
  auto released = [&](const std::string& node) {
    std::vector<bool> occupied(n, false);
    for (char c : node) occupied[static_cast<unsigned char>(c)] = true;
    std::size_t count = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (initially_used[s] && !occupied[s]) ++count;
    }
    return count;
  };

  std::unordered_set<std::string> seen{start};
  std::vector<std::string> frontier{start};
  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    if (max_moves && depth > *max_moves) return std::nullopt;
    std::vector<std::string> next;
    for (const std::string& node : frontier) {
      const auto loads = loads_of(node);
      if (released(node) >= k) return depth;
      for (std::size_t i = 0; i < placed.size(); ++i) {
        const auto from = static_cast<unsigned char>(node[i]);
        for (std::size_t to = 0; to < n; ++to) {
          if (to == from) continue;
          if (!all_leq(loads[to] + placed[i]->demand, limits[to])) continue;
          std::string child = node;
          child[i] = static_cast<char>(to);
          if (seen.insert(child).second) next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace drma::oracle
