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

#include "drma/workload.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

namespace drma {

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("SeededRng::below needs a positive bound");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

SeededRng SeededRng::split() {
  return SeededRng(engine_() ^ 0x9e3779b97f4a7c15ULL);
}

std::vector<Points> generate_server_load(Points total, std::size_t slots,
                                         SeededRng& rng, Points granularity) {
  if (slots < 1) throw InvalidArgument("slots must be >= 1");
  if (granularity <= 0) throw InvalidArgument("granularity must be positive");
  if (total < 0 || total % granularity != 0) {
    throw InfeasibleTotal("total " + std::to_string(total) +
                          " is not a non-negative multiple of " +
                          std::to_string(granularity));
  }
  // Stars and bars: choose slots-1 bar positions among units+slots-1 cells,
  // uniformly (Floyd's sampling), then read the parts off the gaps.
  const auto units = static_cast<std::uint64_t>(total / granularity);
  const std::uint64_t cells = units + slots - 1;
  const std::uint64_t bars = slots - 1;
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = cells - bars; j < cells; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<Points> parts;
  parts.reserve(slots);
  std::uint64_t previous = 0;
  for (std::uint64_t bar : chosen) {
    parts.push_back(static_cast<Points>(bar - previous) * granularity);
    previous = bar + 1;
  }
  parts.push_back(static_cast<Points>(cells - previous) * granularity);
  return parts;
}

void validate_workload(const WorkloadSpec& spec, Points pre_max) {
  if (spec.slots_per_server < 1) throw InvalidArgument("slots_per_server must be >= 1");
  if (spec.dims < 1) throw InvalidArgument("dims must be >= 1");
  if (spec.granularity <= 0) throw InvalidArgument("granularity must be positive");
  if (spec.total_lo < 0 || spec.total_lo > spec.total_hi) {
    throw InvalidArgument("total range must satisfy 0 <= lo <= hi");
  }
  if (spec.total_lo % spec.granularity != 0) {
    throw InvalidArgument("total_lo must be a multiple of granularity");
  }
  if (spec.total_hi > pre_max) {
    throw InvalidArgument("total_hi exceeds pre_max");
  }
}

DatacenterState generate_scenario(const WorkloadSpec& spec) {
  validate_workload(spec, kDefaultCapacity);
  SeededRng rng(spec.seed);
  DatacenterState state(spec.dims);
  const auto steps = static_cast<std::uint64_t>(
      (spec.total_hi - spec.total_lo) / spec.granularity + 1);
  for (std::size_t i = 1; i <= spec.n_servers; ++i) {
    const ServerId server = "S" + std::to_string(i);
    state.add_server(server);
    std::vector<std::vector<Points>> per_dim;
    for (int d = 0; d < spec.dims; ++d) {
      const Points total =
          spec.total_lo + static_cast<Points>(rng.below(steps)) * spec.granularity;
      per_dim.push_back(generate_server_load(total, spec.slots_per_server, rng,
                                             spec.granularity));
    }
    for (std::size_t j = 0; j < spec.slots_per_server; ++j) {
      ResourceVector demand(spec.dims);
      for (int d = 0; d < spec.dims; ++d) demand[d] = per_dim[d][j];
      if ((demand.array() == 0).all()) continue;
      state.add_task(server + "-" + std::to_string(j + 1), demand, server);
    }
  }
  return state;
}

}  // namespace drma
