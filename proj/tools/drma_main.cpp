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

// drma: run, compare or batch-evaluate consolidation on a scenario file.
//
// Exit codes: 0 success, 2 input error, 3 infeasible run (some task could
// not be placed), 1 anything else (I/O failure on --out).

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "drma/report.hpp"
#include "drma/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

struct Options {
  std::string scenario;
  std::string algorithm = "drma";
  std::optional<drma::Points> pre_max;
  std::optional<drma::Points> post_max;
  std::optional<std::uint64_t> seed;
  std::string emit = "table";
  std::string out;
  std::string phase = "after";
  std::optional<std::size_t> batch;
  std::optional<std::string> target_order;
  bool timing = false;
};

int execute(const Options& opt) {
  drma::Scenario scenario;
  if (!opt.scenario.empty()) {
    scenario = drma::load_scenario(opt.scenario);
  } else if (!opt.batch) {
    throw drma::InvalidArgument("--scenario is required unless --batch is given");
  }
  drma::Config& config = scenario.config;
  if (opt.pre_max) config.pre_max = *opt.pre_max;
  if (opt.post_max) config.post_max = *opt.post_max;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.target_order) config.target_order = drma::parse_target_order(*opt.target_order);
  drma::validate_config(config, opt.batch && opt.scenario.empty()
                                    ? drma::WorkloadSpec{}.dims
                                    : scenario.state.dims);

  // A scenario generated from a workload section is regenerated when the
  // seed is overridden.
  if (opt.seed && scenario.workload && !opt.batch) {
    drma::WorkloadSpec spec = *scenario.workload;
    spec.seed = *opt.seed;
    scenario.state = drma::generate_scenario(spec);
  }

  const auto format = drma::parse_emit_format(opt.emit);
  const auto phase = drma::parse_table_phase(opt.phase);
  const auto algorithms = drma::parse_algorithm_list(opt.algorithm);

  std::ostringstream text;
  int status = kExitOk;
  const auto start = std::chrono::steady_clock::now();
  if (opt.batch) {
    const drma::WorkloadSpec spec = scenario.workload.value_or(drma::WorkloadSpec{});
    const auto summary =
        drma::run_batch(spec, config, algorithms, *opt.batch, config.seed);
    drma::emit(summary, format, text);
  } else if (algorithms.size() > 1) {
    const auto comparison =
        drma::compare(scenario.state, config, algorithms, scenario.id);
    drma::emit(comparison, format, text);
    for (const auto& row : comparison.rows) {
      if (row.unplaced > 0) status = kExitInfeasible;
    }
  } else {
    const auto report =
        drma::run(scenario.state, config, algorithms.front(), scenario.id);
    drma::emit(report, format, text, phase, config.primary_dim);
    if (report.infeasible()) status = kExitInfeasible;
  }
  if (opt.timing) {
    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - start);
    std::cerr << "elapsed_ms " << elapsed.count() << '\n';
  }

  if (opt.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream file(opt.out, std::ios::binary);
    file << text.str();
    if (!file) {
      std::cerr << "drma: cannot write '" << opt.out << "'\n";
      return kExitFailure;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Server consolidation: best-fit allocation with migration planning"};
  Options opt;
  app.add_option("--scenario", opt.scenario, "Scenario file (JSON)");
  app.add_option("--algorithm", opt.algorithm,
                 "first-fit, best-fit, drma, a comma list, or all")
      ->capture_default_str();
  app.add_option("--pre-max", opt.pre_max, "Threshold before migration (points)");
  app.add_option("--post-max", opt.post_max, "Threshold after migration (points)");
  app.add_option("--seed", opt.seed, "Seed for generated scenarios");
  app.add_option("--emit", opt.emit, "table, csv, json or plotdata")
      ->capture_default_str();
  app.add_option("--out", opt.out, "Output file (default stdout)");
  app.add_option("--phase", opt.phase, "State written by csv: before or after")
      ->capture_default_str();
  app.add_option("--batch", opt.batch, "Run COUNT generated scenarios and aggregate");
  app.add_option("--target-order", opt.target_order,
                 "Migration target scan order: asc or desc");
  app.add_flag("--timing", opt.timing, "Print elapsed time to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return execute(opt);
  } catch (const drma::IoError& e) {
    std::cerr << "drma: " << e.what() << '\n';
    return kExitInput;
  } catch (const drma::ParseError& e) {
    std::cerr << "drma: parse error: " << e.what() << '\n';
    return kExitInput;
  } catch (const drma::SchemaError& e) {
    std::cerr << "drma: schema error at " << e.what() << '\n';
    return kExitInput;
  } catch (const drma::InvalidArgument& e) {
    std::cerr << "drma: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "drma: " << e.what() << '\n';
    return kExitFailure;
  }
}
