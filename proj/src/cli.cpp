// Copyright 2026 The phasetrack authors
//
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

#include "phasetrack/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasetrack/scenario.hpp"
#include "phasetrack/version.hpp"

namespace phasetrack {

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitIo = 4;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const double value = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      grid.push_back(value);
    } catch (const std::exception&) {
      throw SchemaError("sweep grid: cannot parse \"" + item + "\" as a number");
    }
  }
  if (grid.empty()) throw SchemaError("sweep grid: empty");
  return grid;
}

Scenario load_with_overrides(const std::string& path, const std::optional<uint64_t>& seed,
                             const std::optional<std::string>& tier) {
  Scenario sc = load_scenario(path);
  if (seed) sc.seed = *seed;
  if (tier) {
    if (*tier == "baseband") {
      sc.tier = Tier::Baseband;
    } else if (*tier == "rf") {
      sc.tier = Tier::Rf;
    } else {
      throw SchemaError("--tier must be \"baseband\" or \"rf\"");
    }
  }
  return sc;
}

void print_summary(const RunSummary& s) {
  std::printf("records: %zu  var_u: %.4f  var_v: %.4f  (%.2f dB / %.2f dB)\n", s.n_records,
              s.var_u, s.var_v, s.squeezing_db_u, s.squeezing_db_v);
  std::printf("uncertainty product: %.4f  violation factor: %.2f  bound: %s\n",
              s.product_inferred, s.violation_factor_eq2, to_string(s.bound).c_str());
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"phasetrack: simultaneous quadrature monitoring with an entangled reference"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::optional<uint64_t> seed_override;
  std::optional<std::string> tier_override;
  app.add_option("--out-dir", out_dir, "Output directory")
      ->envname("PHASETRACK_OUT_DIR");
  app.add_option("--seed", seed_override, "Override the scenario seed");
  app.add_option("--tier", tier_override, "Override the scenario tier (baseband|rf)");

  std::string scenario_path;
  std::string sweep_param;
  std::string sweep_grid;

  auto* run_cmd = app.add_subcommand("run", "Execute a scenario, writing records and summary");
  run_cmd->fallthrough();
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario across a parameter grid");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("parameter", sweep_param, "loss | squeezing_db | visibility")->required();
  sweep_cmd->add_option("grid", sweep_grid, "Comma-separated values, e.g. 1.0,0.9,0.7")
      ->required();
  sweep_cmd->add_option("scenario", scenario_path, "Base scenario JSON file")->required();

  auto* cal_cmd = app.add_subcommand(
      "calibrate", "Run the entanglement-off zero-displacement variant, write calibration.json");
  cal_cmd->fallthrough();
  cal_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const Scenario sc = load_with_overrides(scenario_path, seed_override, tier_override);
    if (run_cmd->parsed()) {
      const RunArtifacts artifacts = run_scenario_to(sc, out_dir);
      print_summary(artifacts.summary);
      std::printf("wrote %s and %s under %s\n", sc.outputs.records.c_str(),
                  sc.outputs.summary.c_str(), out_dir.c_str());
    } else if (sweep_cmd->parsed()) {
      const auto rows = sweep(sweep_param, parse_grid(sweep_grid), sc, out_dir);
      for (const auto& row : rows) {
        std::printf("%s=%g  product=%.4f  factor=%.2f  db=%.2f\n", sweep_param.c_str(), row.value,
                    row.product, row.factor, row.db);
      }
      std::printf("wrote sweep_%s.csv under %s\n", sweep_param.c_str(), out_dir.c_str());
    } else {
      const CalibrationScale scale = run_calibration(sc);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
      const std::string path = (std::filesystem::path(out_dir) / "calibration.json").string();
      write_calibration_json(scale, path);
      std::printf("scale_u: %.6f  scale_v: %.6f\nwrote %s\n", scale.scale_u, scale.scale_v,
                  path.c_str());
    }
    return 0;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kExitSchema;
  } catch (const PhysicsError& e) {
    std::fprintf(stderr, "physics error: %s\n", e.what());
    return kExitPhysics;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::logic_error& e) {
    // Range/domain violations from the physics layers.
    std::fprintf(stderr, "physics error: %s\n", e.what());
    return kExitPhysics;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  }
}

}  // namespace phasetrack
