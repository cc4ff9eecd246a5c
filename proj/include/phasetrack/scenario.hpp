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

#ifndef PHASETRACK_SCENARIO_HPP
#define PHASETRACK_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasetrack/analysis.hpp"
#include "phasetrack/bench.hpp"
#include "phasetrack/dsp.hpp"
#include "phasetrack/signal.hpp"
#include "phasetrack/trajectory.hpp"

namespace phasetrack {

inline constexpr const char* kScenarioSchema = "phasetrack/scenario/v1";
inline constexpr const char* kSummarySchema = "phasetrack/summary/v1";
inline constexpr const char* kCalibrationSchema = "phasetrack/calibration/v1";

/// Malformed or incomplete scenario file; message carries the field path.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed input describing an unphysical configuration.
struct PhysicsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Tier { Baseband, Rf };

struct DspSettings {
  FirSpec fir;
  double sample_rate = 2e8;
  double carrier_f = 5e6;
  double noise_oversample_rate = 1e6;
  double antialias_corner = 5e7;
  double out_dt = 1e-5;
  bool broadband_floor = false;
};

struct OutputSpec {
  std::string records = "records.csv";
  std::string summary = "summary.json";
  std::optional<std::string> windows_csv;
  std::optional<std::string> residuals_csv;
  std::optional<std::string> rf_trace_csv;
  std::optional<std::string> rf_trace_raw;
  std::optional<std::string> fir_taps_csv;
};

/// Calibration policy: "auto" runs a deterministic entanglement-off,
/// zero-displacement companion through the same DSP settings (RF tier only;
/// baseband records are analytically vacuum-normalized already), "none"
/// skips calibration, anything else is read as a calibration.json path.
struct Scenario {
  BenchConfig bench;
  TrajectorySpec trajectory;
  Tier tier = Tier::Baseband;
  double duration = 0.026;
  uint64_t seed = 1;
  DspSettings dsp;
  std::string calibration = "auto";
  std::size_t calibration_records = 10400;
  int analysis_window = 2600;
  OutputSpec outputs;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::string& path);

nlohmann::json summary_to_json(const RunSummary& summary, const Scenario& scenario);

struct RunArtifacts {
  std::vector<SampleRecord> records;  // calibrated
  RunSummary summary;
  ReadoutModel model;
  CalibrationScale calibration;
};

/// Execute a scenario in memory (no file output).
RunArtifacts run_scenario(const Scenario& scenario);

/// Execute and write records/summary (and optional extras) under out_dir.
RunArtifacts run_scenario_to(const Scenario& scenario, const std::string& out_dir);

/// The entanglement-off zero-displacement variant used by "auto" calibration
/// and the `calibrate` subcommand. Deterministically derived from the
/// scenario seed (stream tag "calibration").
CalibrationScale run_calibration(const Scenario& scenario);
void write_calibration_json(const CalibrationScale& scale, const std::string& path);
CalibrationScale load_calibration_json(const std::string& path);

struct SweepRow {
  double value;
  double product;
  double factor;
  double db;  // 10*log10(sqrt(var_u * var_v))
};

/// One run per grid value (same master seed for every point). parameter is
/// one of "loss" (both arms), "squeezing_db" (both squeezers) or
/// "visibility" (both splitters). Points run in parallel; the row order
/// follows the grid.
std::vector<SweepRow> sweep(const std::string& parameter, const std::vector<double>& grid,
                            const Scenario& base, const std::string& out_dir);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

void write_records_csv(const std::vector<SampleRecord>& records, const ReadoutModel& model,
                       const std::string& path);

}  // namespace phasetrack

#endif
