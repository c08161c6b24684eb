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

#include "drma/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace drma {

using Json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const Json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) {
      throw SchemaError(where.empty() ? item.key() : where + "." + item.key(),
                        "unknown field");
    }
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(where.empty() ? key : where + "." + key, "missing field");
  }
  return *it;
}

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

void expect_object(const Json& value, const std::string& where) {
  if (!value.is_object()) throw SchemaError(where, "expected an object");
}

std::string as_string(const Json& value, const std::string& where) {
  if (!value.is_string()) throw SchemaError(where, "expected a string");
  return value.get<std::string>();
}

std::int64_t as_integer(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) throw SchemaError(where, "expected an integer");
  return value.get<std::int64_t>();
}

std::uint64_t as_unsigned(const Json& value, const std::string& where) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  const std::int64_t v = as_integer(value, where);
  if (v < 0) throw SchemaError(where, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

double as_number(const Json& value, const std::string& where) {
  if (!value.is_number()) throw SchemaError(where, "expected a number");
  return value.get<double>();
}

ResourceVector as_resources(const Json& value, int dims,
                            const std::string& where) {
  if (!value.is_array()) throw SchemaError(where, "expected an array");
  if (static_cast<int>(value.size()) != dims) {
    throw SchemaError(where, "expected " + std::to_string(dims) + " values");
  }
  ResourceVector out(dims);
  for (int d = 0; d < dims; ++d) {
    const std::string at = where + "[" + std::to_string(d) + "]";
    out[d] = as_integer(value[static_cast<std::size_t>(d)], at);
    if (out[d] < 0) throw SchemaError(at, "must be non-negative");
  }
  return out;
}

Json resources_json(const ResourceVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Config config_from_json(const Json& obj, int dims) {
  const std::string where = "config";
  expect_object(obj, where);
  reject_unknown_keys(obj, where,
                      {"primary_dim", "pre_max", "post_max",
                       "cost_per_point_moved", "benefit_per_server_released",
                       "target_order", "tie_break", "seed"});
  Config c;
  if (obj.contains("primary_dim")) {
    c.primary_dim = static_cast<int>(as_integer(obj["primary_dim"], join(where, "primary_dim")));
  }
  if (obj.contains("pre_max")) c.pre_max = as_integer(obj["pre_max"], join(where, "pre_max"));
  if (obj.contains("post_max")) c.post_max = as_integer(obj["post_max"], join(where, "post_max"));
  if (obj.contains("cost_per_point_moved")) {
    c.cost_per_point_moved =
        as_number(obj["cost_per_point_moved"], join(where, "cost_per_point_moved"));
  }
  if (obj.contains("benefit_per_server_released")) {
    c.benefit_per_server_released = as_number(
        obj["benefit_per_server_released"], join(where, "benefit_per_server_released"));
  }
  if (obj.contains("target_order")) {
    const std::string at = join(where, "target_order");
    try {
      c.target_order = parse_target_order(as_string(obj["target_order"], at));
    } catch (const InvalidArgument& e) {
      throw SchemaError(at, e.what());
    }
  }
  if (obj.contains("tie_break")) {
    const std::string at = join(where, "tie_break");
    if (as_string(obj["tie_break"], at) != "lowest_index") {
      throw SchemaError(at, "only \"lowest_index\" is supported");
    }
  }
  if (obj.contains("seed")) c.seed = as_unsigned(obj["seed"], join(where, "seed"));
  try {
    validate_config(c, dims);
  } catch (const InvalidArgument& e) {
    throw SchemaError(where, e.what());
  }
  return c;
}

WorkloadSpec workload_from_json(const Json& obj) {
  const std::string where = "workload";
  expect_object(obj, where);
  reject_unknown_keys(obj, where,
                      {"n_servers", "slots_per_server", "total_range", "dims",
                       "seed", "granularity"});
  WorkloadSpec w;
  if (obj.contains("n_servers")) {
    w.n_servers = as_unsigned(obj["n_servers"], join(where, "n_servers"));
  }
  if (obj.contains("slots_per_server")) {
    w.slots_per_server =
        as_unsigned(obj["slots_per_server"], join(where, "slots_per_server"));
  }
  if (obj.contains("total_range")) {
    const std::string at = join(where, "total_range");
    const Json& range = obj["total_range"];
    if (!range.is_array() || range.size() != 2) {
      throw SchemaError(at, "expected [lo, hi]");
    }
    w.total_lo = as_integer(range[0], at + "[0]");
    w.total_hi = as_integer(range[1], at + "[1]");
  }
  if (obj.contains("dims")) w.dims = static_cast<int>(as_integer(obj["dims"], join(where, "dims")));
  if (obj.contains("seed")) w.seed = as_unsigned(obj["seed"], join(where, "seed"));
  if (obj.contains("granularity")) {
    w.granularity = as_integer(obj["granularity"], join(where, "granularity"));
  }
  try {
    validate_workload(w);
  } catch (const InvalidArgument& e) {
    throw SchemaError(where, e.what());
  }
  return w;
}

std::string location_of(const DatacenterState& state, const Violation& v) {
  for (std::size_t i = 0; i < state.tasks.size(); ++i) {
    if (state.tasks[i].id == v.subject) return "tasks[" + std::to_string(i) + "]";
  }
  for (std::size_t i = 0; i < state.servers.size(); ++i) {
    if (state.servers[i].id == v.subject) return "servers[" + std::to_string(i) + "]";
  }
  return "state";
}

}  // namespace

const char* to_string(TargetOrder order) {
  return order == TargetOrder::kAscending ? "asc" : "desc";
}

TargetOrder parse_target_order(const std::string& text) {
  if (text == "asc") return TargetOrder::kAscending;
  if (text == "desc") return TargetOrder::kDescending;
  throw InvalidArgument("target order must be \"asc\" or \"desc\", got \"" +
                        text + "\"");
}

Scenario scenario_from_json(const Json& doc) {
  expect_object(doc, "$");
  reject_unknown_keys(doc, "", {"id", "dims", "servers", "tasks", "config", "workload"});
  Scenario scenario;
  if (doc.contains("id")) scenario.id = as_string(doc["id"], "id");
  if (doc.contains("workload")) scenario.workload = workload_from_json(doc["workload"]);

  int dims = scenario.workload ? scenario.workload->dims : 1;
  if (doc.contains("dims")) {
    dims = static_cast<int>(as_integer(doc["dims"], "dims"));
    if (dims < 1) throw SchemaError("dims", "must be >= 1");
  }

  if (doc.contains("servers")) {
    DatacenterState state(dims);
    const Json& servers = doc["servers"];
    if (!servers.is_array()) throw SchemaError("servers", "expected an array");
    std::set<ServerId> server_ids;
    for (std::size_t i = 0; i < servers.size(); ++i) {
      const std::string where = "servers[" + std::to_string(i) + "]";
      const Json& s = servers[i];
      expect_object(s, where);
      reject_unknown_keys(s, where, {"id", "capacity"});
      ServerId id = as_string(require(s, "id", where), join(where, "id"));
      if (!server_ids.insert(id).second) {
        throw SchemaError(join(where, "id"), "duplicate server id '" + id + "'");
      }
      std::optional<ResourceVector> capacity;
      if (s.contains("capacity")) {
        capacity = as_resources(s["capacity"], dims, join(where, "capacity"));
      }
      state.add_server(std::move(id), std::move(capacity));
    }

    const Json empty = Json::array();
    const Json& tasks = doc.contains("tasks") ? doc["tasks"] : empty;
    if (!tasks.is_array()) throw SchemaError("tasks", "expected an array");
    std::set<TaskId> task_ids;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::string where = "tasks[" + std::to_string(i) + "]";
      const Json& t = tasks[i];
      expect_object(t, where);
      reject_unknown_keys(t, where, {"id", "demand", "placement", "waiting"});
      TaskId id = as_string(require(t, "id", where), join(where, "id"));
      if (!task_ids.insert(id).second) {
        throw SchemaError(join(where, "id"), "duplicate task id '" + id + "'");
      }
      ResourceVector demand =
          as_resources(require(t, "demand", where), dims, join(where, "demand"));
      const bool has_placement = t.contains("placement");
      const bool waiting =
          t.contains("waiting") && [&] {
            if (!t["waiting"].is_boolean()) {
              throw SchemaError(join(where, "waiting"), "expected a boolean");
            }
            return t["waiting"].get<bool>();
          }();
      if (has_placement == waiting) {
        throw SchemaError(where, "exactly one of \"placement\" or \"waiting\": true is required");
      }
      std::optional<ServerId> on;
      if (has_placement) {
        on = as_string(t["placement"], join(where, "placement"));
        if (!server_ids.contains(*on)) {
          throw SchemaError(join(where, "placement"), "unknown server '" + *on + "'");
        }
      }
      state.add_task(std::move(id), std::move(demand), std::move(on));
    }
    scenario.state = std::move(state);
  } else if (doc.contains("tasks")) {
    throw SchemaError("tasks", "tasks given without servers");
  } else if (scenario.workload) {
    scenario.state = generate_scenario(*scenario.workload);
  } else {
    throw SchemaError("servers", "missing field (or give a workload section)");
  }

  const auto violations = validate_state(scenario.state);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw SchemaError(location_of(scenario.state, v),
                      std::string(to_string(v.kind)) + " '" + v.subject + "': " + v.message);
  }

  scenario.config = doc.contains("config") ? config_from_json(doc["config"], scenario.state.dims)
                                           : Config{};
  return scenario;
}

Json config_to_json(const Config& c) {
  Json out;
  out["primary_dim"] = c.primary_dim;
  out["pre_max"] = c.pre_max;
  out["post_max"] = c.post_max;
  out["cost_per_point_moved"] = c.cost_per_point_moved;
  out["benefit_per_server_released"] = c.benefit_per_server_released;
  out["target_order"] = to_string(c.target_order);
  out["tie_break"] = "lowest_index";
  out["seed"] = c.seed;
  return out;
}

Json workload_to_json(const WorkloadSpec& w) {
  Json out;
  out["n_servers"] = w.n_servers;
  out["slots_per_server"] = w.slots_per_server;
  out["total_range"] = Json::array({w.total_lo, w.total_hi});
  out["dims"] = w.dims;
  out["seed"] = w.seed;
  out["granularity"] = w.granularity;
  return out;
}

Json scenario_to_json(const Scenario& scenario) {
  Json out;
  out["id"] = scenario.id;
  out["dims"] = scenario.state.dims;
  Json servers = Json::array();
  for (const Server& s : scenario.state.servers) {
    servers.push_back(Json{{"id", s.id}, {"capacity", resources_json(s.capacity)}});
  }
  out["servers"] = std::move(servers);
  Json tasks = Json::array();
  for (const Task& t : scenario.state.tasks) {
    Json task{{"id", t.id}, {"demand", resources_json(t.demand)}};
    if (t.placement) {
      task["placement"] = *t.placement;
    } else {
      task["waiting"] = true;
    }
    tasks.push_back(std::move(task));
  }
  out["tasks"] = std::move(tasks);
  out["config"] = config_to_json(scenario.config);
  if (scenario.workload) out["workload"] = workload_to_json(*scenario.workload);
  return out;
}

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return scenario_from_json(doc);
}

std::string serialize_scenario(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Scenario scenario = parse_scenario(buffer.str());
  if (scenario.id.empty()) scenario.id = path.stem().string();
  return scenario;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << serialize_scenario(scenario);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace drma
