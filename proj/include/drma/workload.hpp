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

// Seeded scenario generation.
//
// Each server draws a total per dimension uniformly from the configured
// range (in granularity steps) and splits it across a fixed number of task
// slots, uniformly over all compositions of the total. Empty slots produce
// no task. Output is bit-identical across platforms for a given seed: the
// engine is mt19937_64 and bounded draws use plain rejection sampling
// rather than std::uniform_int_distribution.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "drma/model.hpp"

namespace drma {

class InfeasibleTotal : public Error {
 public:
  using Error::Error;
};

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  // Independent child stream; advances this one by a single draw.
  SeededRng split();

 private:
  std::mt19937_64 engine_;
};

inline constexpr Points kDefaultGranularity = 10;

// `slots` non-negative multiples of `granularity` summing to `total`.
std::vector<Points> generate_server_load(Points total, std::size_t slots,
                                         SeededRng& rng,
                                         Points granularity = kDefaultGranularity);

struct WorkloadSpec {
  std::size_t n_servers = 4;
  std::size_t slots_per_server = 5;
  Points total_lo = 40;
  Points total_hi = 70;
  int dims = 1;
  std::uint64_t seed = 0;
  Points granularity = kDefaultGranularity;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

// Throws InvalidArgument on a malformed spec, including total_hi > pre_max.
void validate_workload(const WorkloadSpec& spec, Points pre_max = 100);

// Servers "S1".."Sn" at 100 points per dimension; the task in slot j of
// server i is "Si-j".
DatacenterState generate_scenario(const WorkloadSpec& spec);

}  // namespace drma
