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

// Scenario files (JSON). See docs/scenario-format.md for the schema.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "drma/model.hpp"
#include "drma/workload.hpp"

namespace drma {

class ParseError : public Error {
 public:
  using Error::Error;
};

// Carries the JSON path of the offending value, e.g. "tasks[3].id".
class SchemaError : public Error {
 public:
  SchemaError(std::string location, const std::string& what)
      : Error(location + ": " + what), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct Scenario {
  std::string id;
  DatacenterState state;
  Config config;
  // When present without explicit servers the state was generated from it.
  std::optional<WorkloadSpec> workload;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario scenario_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);

// The scenario id defaults to the file stem.
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const Config& config);
nlohmann::ordered_json workload_to_json(const WorkloadSpec& spec);

const char* to_string(TargetOrder order);
TargetOrder parse_target_order(const std::string& text);

}  // namespace drma
