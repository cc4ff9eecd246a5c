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

#include "phasetrack/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "phasetrack/rng.hpp"
#include "phasetrack/version.hpp"

namespace phasetrack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_path(const std::string& parent, const char* key) {
  return parent.empty() ? std::string(key) : parent + "." + key;
}

const json& require_field(const json& j, const std::string& parent, const char* key) {
  if (!j.is_object()) {
    throw SchemaError((parent.empty() ? std::string("document") : parent) + " must be an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError("missing required field: " + join_path(parent, key));
  }
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError("field " + path + " must be a number");
  return j.get<double>();
}

double require_number(const json& j, const std::string& parent, const char* key) {
  return as_number(require_field(j, parent, key), join_path(parent, key));
}

double number_or(const json& j, const std::string& parent, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_number(j.at(key), join_path(parent, key));
}

bool require_bool(const json& j, const std::string& parent, const char* key) {
  const json& field = require_field(j, parent, key);
  if (!field.is_boolean()) {
    throw SchemaError("field " + join_path(parent, key) + " must be a boolean");
  }
  return field.get<bool>();
}

bool bool_or(const json& j, const std::string& parent, const char* key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& field = j.at(key);
  if (!field.is_boolean()) {
    throw SchemaError("field " + join_path(parent, key) + " must be a boolean");
  }
  return field.get<bool>();
}

std::string require_string(const json& j, const std::string& parent, const char* key) {
  const json& field = require_field(j, parent, key);
  if (!field.is_string()) {
    throw SchemaError("field " + join_path(parent, key) + " must be a string");
  }
  return field.get<std::string>();
}

std::string string_or(const json& j, const std::string& parent, const char* key,
                      const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& field = j.at(key);
  if (!field.is_string()) {
    throw SchemaError("field " + join_path(parent, key) + " must be a string");
  }
  return field.get<std::string>();
}

PiecewiseLinear knots_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError("field " + path + " must be a non-empty array of [t, value] pairs");
  }
  PiecewiseLinear out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SchemaError("field " + path + " must contain [t, value] pairs");
    }
    out.knots.emplace_back(as_number(pair[0], path), as_number(pair[1], path));
  }
  return out;
}

json knots_to_json(const PiecewiseLinear& p) {
  json out = json::array();
  for (const auto& [t, value] : p.knots) out.push_back({t, value});
  return out;
}

TrajectorySpec trajectory_from_json(const json& j, double scenario_duration) {
  const std::string parent = "trajectory";
  const std::string kind = require_string(j, parent, "kind");
  const double duration = number_or(j, parent, "duration", scenario_duration);

  if (kind == "zero") return zero_trajectory(duration);
  if (kind == "constant") {
    return constant_trajectory(require_number(j, parent, "x"), require_number(j, parent, "y"),
                               duration);
  }
  if (kind == "arc") {
    TrajectorySpec spec;
    spec.kind = TrajectorySpec::Kind::Arc;
    spec.duration = duration;
    spec.radius = require_number(j, parent, "radius");
    if (j.contains("phase_knots")) {
      spec.phase = knots_from_json(j.at("phase_knots"), "trajectory.phase_knots");
    } else {
      const double start = require_number(j, parent, "phase_start");
      const double rate = require_number(j, parent, "phase_rate");
      spec.phase.knots = {{0.0, start}, {duration, start + rate * duration}};
    }
    return spec;
  }
  if (kind == "spiral") {
    TrajectorySpec spec;
    spec.kind = TrajectorySpec::Kind::Spiral;
    spec.duration = duration;
    spec.radius_profile =
        knots_from_json(require_field(j, parent, "radius_knots"), "trajectory.radius_knots");
    spec.phase = knots_from_json(require_field(j, parent, "phase_knots"), "trajectory.phase_knots");
    return spec;
  }
  if (kind == "waypoints") {
    TrajectorySpec spec;
    spec.kind = TrajectorySpec::Kind::Waypoints;
    spec.duration = duration;
    const json& points = require_field(j, parent, "points");
    if (!points.is_array() || points.empty()) {
      throw SchemaError("field trajectory.points must be a non-empty array");
    }
    for (const auto& p : points) {
      if (!p.is_array() || p.size() != 3) {
        throw SchemaError("field trajectory.points must contain [t, x, y] triples");
      }
      spec.waypoints.push_back({as_number(p[0], "trajectory.points"),
                                as_number(p[1], "trajectory.points"),
                                as_number(p[2], "trajectory.points")});
    }
    const std::string interp = string_or(j, parent, "interp", "linear");
    if (interp == "linear") {
      spec.interp = TrajectorySpec::Interp::Linear;
    } else if (interp == "cubic") {
      spec.interp = TrajectorySpec::Interp::Cubic;
    } else {
      throw SchemaError("field trajectory.interp must be \"linear\" or \"cubic\"");
    }
    return spec;
  }
  // Presets expand to their canonical variants at load time.
  if (kind == "fig4_top") {
    return fig4_top_preset(duration, number_or(j, parent, "sweep_cycles", 0.92));
  }
  if (kind == "fig4_bottom") {
    return fig4_bottom_preset(duration, number_or(j, parent, "radius_start", 9.0),
                              number_or(j, parent, "radius_end", 1.5),
                              number_or(j, parent, "phase_cycles", 1.25));
  }
  throw SchemaError("field trajectory.kind has unknown value \"" + kind + "\"");
}

json trajectory_to_json(const TrajectorySpec& spec) {
  json j;
  j["duration"] = spec.duration;
  switch (spec.kind) {
    case TrajectorySpec::Kind::Zero:
      j["kind"] = "zero";
      break;
    case TrajectorySpec::Kind::Constant:
      j["kind"] = "constant";
      j["x"] = spec.x;
      j["y"] = spec.y;
      break;
    case TrajectorySpec::Kind::Arc:
      j["kind"] = "arc";
      j["radius"] = spec.radius;
      j["phase_knots"] = knots_to_json(spec.phase);
      break;
    case TrajectorySpec::Kind::Spiral:
      j["kind"] = "spiral";
      j["radius_knots"] = knots_to_json(spec.radius_profile);
      j["phase_knots"] = knots_to_json(spec.phase);
      break;
    case TrajectorySpec::Kind::Waypoints: {
      j["kind"] = "waypoints";
      json points = json::array();
      for (const auto& p : spec.waypoints) points.push_back({p[0], p[1], p[2]});
      j["points"] = points;
      j["interp"] = spec.interp == TrajectorySpec::Interp::Cubic ? "cubic" : "linear";
      break;
    }
  }
  return j;
}

void rethrow_as_physics(const std::exception& e, const char* where) {
  throw PhysicsError(std::string(where) + ": " + e.what());
}

// Semantic validation beyond JSON shape. Throws PhysicsError.
void validate_scenario(const Scenario& sc) {
  try {
    validate(sc.bench);
    validate(sc.trajectory);
  } catch (const std::logic_error& e) {
    rethrow_as_physics(e, "scenario");
  }
  if (!(sc.duration > 0.0)) throw PhysicsError("scenario.duration must be > 0");
  if (sc.trajectory.duration + 1e-12 < sc.duration) {
    throw PhysicsError("scenario.trajectory.duration shorter than scenario.duration");
  }
  if (!(sc.dsp.out_dt > 0.0)) throw PhysicsError("scenario.dsp.out_dt must be > 0");
  const auto expected_records =
      static_cast<std::size_t>(std::floor(sc.duration / sc.dsp.out_dt + 1e-9)) + 1;
  if (expected_records < 260) {
    throw PhysicsError("scenario must produce at least 260 records (duration/out_dt too small)");
  }
  if (sc.analysis_window < 2 ||
      expected_records < static_cast<std::size_t>(sc.analysis_window)) {
    throw PhysicsError("scenario.analysis_window exceeds the expected record count");
  }
  if (sc.calibration_records < 2600) {
    throw PhysicsError("scenario.calibration_records must be >= 2600");
  }
  if (sc.tier == Tier::Rf) {
    if (!(sc.dsp.carrier_f < sc.dsp.antialias_corner &&
          sc.dsp.antialias_corner < sc.dsp.sample_rate / 2.0)) {
      throw PhysicsError("scenario.dsp requires carrier_f < antialias_corner < sample_rate/2");
    }
    if (sc.dsp.out_dt > 1.0 / (2.0 * sc.dsp.fir.cutoff_hz)) {
      throw PhysicsError("scenario.dsp.out_dt too coarse for the FIR cutoff");
    }
  }
}

RfSynthOptions synth_options(const Scenario& sc) {
  RfSynthOptions options;
  options.sample_rate = sc.dsp.sample_rate;
  options.carrier_f = sc.dsp.carrier_f;
  options.noise_oversample_rate = sc.dsp.noise_oversample_rate;
  options.broadband_floor = sc.dsp.broadband_floor;
  // Pad by the demodulation group delay plus the anti-alias kernel so the
  // record grid covers all of [0, duration].
  const int taps = fir_tap_count(sc.dsp.fir, sc.dsp.sample_rate);
  options.guard = static_cast<double>((taps - 1) / 2 + 1024) / sc.dsp.sample_rate;
  return options;
}

std::vector<SampleRecord> demodulated_records(const Scenario& sc, const ReadoutModel& model,
                                              const TrajectorySpec& trajectory, uint64_t seed,
                                              RfTrace* keep_trace) {
  RfTrace trace =
      synthesize_rf(model, truncate_to(trajectory, sc.duration), sc.duration, seed,
                    synth_options(sc));
  antialias_in_place(trace, sc.dsp.antialias_corner);
  auto records = demodulate(trace, sc.dsp.carrier_f, 0.0, sc.dsp.fir, sc.dsp.out_dt);
  if (keep_trace != nullptr) *keep_trace = std::move(trace);
  return records;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw IoError("failed writing " + path);
}

std::string resolve(const std::string& out_dir, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return name;
  return (fs::path(out_dir) / p).string();
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  const std::string schema = require_string(j, "", "schema");
  if (schema != kScenarioSchema) {
    throw SchemaError("field schema must be \"" + std::string(kScenarioSchema) + "\", got \"" +
                      schema + "\"");
  }

  Scenario sc;
  {
    const json& seed_field = require_field(j, "", "seed");
    if (!seed_field.is_number_integer() && !seed_field.is_number_unsigned()) {
      throw SchemaError("field seed must be an integer");
    }
    sc.seed = seed_field.get<uint64_t>();
  }
  sc.duration = require_number(j, "", "duration");

  const std::string tier = require_string(j, "", "tier");
  if (tier == "baseband") {
    sc.tier = Tier::Baseband;
  } else if (tier == "rf") {
    sc.tier = Tier::Rf;
  } else {
    throw SchemaError("field tier must be \"baseband\" or \"rf\"");
  }

  const json& bench = require_field(j, "", "bench");
  sc.bench.entanglement_on = require_bool(bench, "bench", "entanglement_on");
  sc.bench.squeezer1_db = require_number(bench, "bench", "squeezer1_db");
  sc.bench.squeezer2_db = require_number(bench, "bench", "squeezer2_db");
  BenchConfig defaults;
  sc.bench.bs1_visibility = number_or(bench, "bench", "bs1_visibility", defaults.bs1_visibility);
  sc.bench.bs3_visibility = number_or(bench, "bench", "bs3_visibility", defaults.bs3_visibility);
  sc.bench.arm_loss_a = number_or(bench, "bench", "arm_loss_a", defaults.arm_loss_a);
  sc.bench.arm_loss_b = number_or(bench, "bench", "arm_loss_b", defaults.arm_loss_b);
  sc.bench.detector_efficiency =
      number_or(bench, "bench", "detector_efficiency", defaults.detector_efficiency);
  sc.bench.bs2_reflectivity =
      number_or(bench, "bench", "bs2_reflectivity", defaults.bs2_reflectivity);
  sc.bench.lo_phase_1 = number_or(bench, "bench", "lo_phase_1", defaults.lo_phase_1);
  sc.bench.lo_phase_2 = number_or(bench, "bench", "lo_phase_2", defaults.lo_phase_2);

  try {
    sc.trajectory = trajectory_from_json(require_field(j, "", "trajectory"), sc.duration);
  } catch (const std::logic_error& e) {
    rethrow_as_physics(e, "scenario.trajectory");
  }

  if (j.contains("dsp")) {
    const json& dsp = j.at("dsp");
    if (dsp.contains("fir")) {
      sc.dsp.fir.cutoff_hz = number_or(dsp.at("fir"), "dsp.fir", "cutoff", sc.dsp.fir.cutoff_hz);
      sc.dsp.fir.transition_hz =
          number_or(dsp.at("fir"), "dsp.fir", "transition", sc.dsp.fir.transition_hz);
    }
    sc.dsp.sample_rate = number_or(dsp, "dsp", "sample_rate", sc.dsp.sample_rate);
    sc.dsp.carrier_f = number_or(dsp, "dsp", "carrier_f", sc.dsp.carrier_f);
    sc.dsp.noise_oversample_rate =
        number_or(dsp, "dsp", "noise_oversample_rate", sc.dsp.noise_oversample_rate);
    sc.dsp.antialias_corner = number_or(dsp, "dsp", "antialias_corner", sc.dsp.antialias_corner);
    sc.dsp.out_dt = number_or(dsp, "dsp", "out_dt", sc.dsp.out_dt);
    sc.dsp.broadband_floor = bool_or(dsp, "dsp", "broadband_floor", sc.dsp.broadband_floor);
  }

  sc.calibration = string_or(j, "", "calibration", "auto");
  const double cal_records =
      number_or(j, "", "calibration_records", static_cast<double>(sc.calibration_records));
  if (!(cal_records >= 0.0 && cal_records <= 1e8)) {
    throw PhysicsError("scenario.calibration_records out of range");
  }
  sc.calibration_records = static_cast<std::size_t>(cal_records);
  const double window = number_or(j, "", "analysis_window", sc.analysis_window);
  if (!(window >= 2.0 && window <= 1e8)) {
    throw PhysicsError("scenario.analysis_window out of range");
  }
  sc.analysis_window = static_cast<int>(window);

  if (j.contains("outputs")) {
    const json& outputs = j.at("outputs");
    sc.outputs.records = string_or(outputs, "outputs", "records", sc.outputs.records);
    sc.outputs.summary = string_or(outputs, "outputs", "summary", sc.outputs.summary);
    if (outputs.contains("windows_csv")) {
      sc.outputs.windows_csv = require_string(outputs, "outputs", "windows_csv");
    }
    if (outputs.contains("residuals_csv")) {
      sc.outputs.residuals_csv = require_string(outputs, "outputs", "residuals_csv");
    }
    if (outputs.contains("rf_trace_csv")) {
      sc.outputs.rf_trace_csv = require_string(outputs, "outputs", "rf_trace_csv");
    }
    if (outputs.contains("rf_trace_raw")) {
      sc.outputs.rf_trace_raw = require_string(outputs, "outputs", "rf_trace_raw");
    }
    if (outputs.contains("fir_taps_csv")) {
      sc.outputs.fir_taps_csv = require_string(outputs, "outputs", "fir_taps_csv");
    }
  }

  validate_scenario(sc);
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["schema"] = kScenarioSchema;
  j["seed"] = sc.seed;
  j["duration"] = sc.duration;
  j["tier"] = sc.tier == Tier::Rf ? "rf" : "baseband";
  j["bench"] = {{"entanglement_on", sc.bench.entanglement_on},
                {"squeezer1_db", sc.bench.squeezer1_db},
                {"squeezer2_db", sc.bench.squeezer2_db},
                {"bs1_visibility", sc.bench.bs1_visibility},
                {"bs3_visibility", sc.bench.bs3_visibility},
                {"arm_loss_a", sc.bench.arm_loss_a},
                {"arm_loss_b", sc.bench.arm_loss_b},
                {"detector_efficiency", sc.bench.detector_efficiency},
                {"bs2_reflectivity", sc.bench.bs2_reflectivity},
                {"lo_phase_1", sc.bench.lo_phase_1},
                {"lo_phase_2", sc.bench.lo_phase_2}};
  j["trajectory"] = trajectory_to_json(sc.trajectory);
  j["dsp"] = {{"fir", {{"cutoff", sc.dsp.fir.cutoff_hz}, {"transition", sc.dsp.fir.transition_hz}}},
              {"sample_rate", sc.dsp.sample_rate},
              {"carrier_f", sc.dsp.carrier_f},
              {"noise_oversample_rate", sc.dsp.noise_oversample_rate},
              {"antialias_corner", sc.dsp.antialias_corner},
              {"out_dt", sc.dsp.out_dt},
              {"broadband_floor", sc.dsp.broadband_floor}};
  j["calibration"] = sc.calibration;
  j["calibration_records"] = sc.calibration_records;
  j["analysis_window"] = sc.analysis_window;
  json outputs = {{"records", sc.outputs.records}, {"summary", sc.outputs.summary}};
  if (sc.outputs.windows_csv) outputs["windows_csv"] = *sc.outputs.windows_csv;
  if (sc.outputs.residuals_csv) outputs["residuals_csv"] = *sc.outputs.residuals_csv;
  if (sc.outputs.rf_trace_csv) outputs["rf_trace_csv"] = *sc.outputs.rf_trace_csv;
  if (sc.outputs.rf_trace_raw) outputs["rf_trace_raw"] = *sc.outputs.rf_trace_raw;
  if (sc.outputs.fir_taps_csv) outputs["fir_taps_csv"] = *sc.outputs.fir_taps_csv;
  j["outputs"] = outputs;
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("scenario file is not valid JSON: " + std::string(e.what()));
  }
  return scenario_from_json(j);
}

json summary_to_json(const RunSummary& s, const Scenario& scenario) {
  json j;
  j["schema"] = kSummarySchema;
  j["version"] = kVersion;
  j["scenario"] = scenario_to_json(scenario);
  j["n_records"] = s.n_records;
  j["window_size"] = s.window_size;
  j["known_mean_estimator"] = s.known_mean;
  j["var_u"] = s.var_u;
  j["var_v"] = s.var_v;
  j["cov_uv"] = s.cov_uv;
  j["var_x_inferred"] = s.var_x_inferred;
  j["var_y_inferred"] = s.var_y_inferred;
  j["product_inferred"] = s.product_inferred;
  j["violation_factor_eq2"] = s.violation_factor_eq2;
  j["squeezing_db"] = {{"u", s.squeezing_db_u}, {"v", s.squeezing_db_v}};
  j["per_window_variances"] = {{"u", s.per_window_u}, {"v", s.per_window_v}};
  j["statistics"] = {{"var_rel_sigma", s.var_rel_sigma},
                     {"product_sigma", s.product_sigma},
                     {"correlation_factor", s.correlation_factor},
                     {"predicted_product", s.predicted_product},
                     {"kurtosis_u", s.kurtosis_u},
                     {"kurtosis_v", s.kurtosis_v}};
  j["bound"] = to_string(s.bound);
  j["trajectory_error"] = {{"rms_x", s.rms_x}, {"rms_y", s.rms_y}};
  j["calibration"] = {{"scale_u", s.calibration.scale_u}, {"scale_v", s.calibration.scale_v}};
  return j;
}

CalibrationScale run_calibration(const Scenario& sc) {
  validate_scenario(sc);
  Scenario cal = sc;
  cal.bench.entanglement_on = false;
  cal.duration = static_cast<double>(sc.calibration_records - 1) * sc.dsp.out_dt;
  cal.trajectory = zero_trajectory(cal.duration);
  cal.seed = derive_seed(sc.seed, "calibration", 0);

  const ReadoutModel model = build_bench(cal.bench);
  std::vector<SampleRecord> records;
  if (sc.tier == Tier::Rf) {
    records = demodulated_records(cal, model, cal.trajectory, cal.seed, nullptr);
  } else {
    records = simulate_baseband(model, cal.trajectory, cal.dsp.out_dt, cal.seed);
  }
  return calibrate(records);
}

void write_calibration_json(const CalibrationScale& scale, const std::string& path) {
  json j;
  j["schema"] = kCalibrationSchema;
  j["scale_u"] = scale.scale_u;
  j["scale_v"] = scale.scale_v;
  write_text_file(path, j.dump(2) + "\n");
}

CalibrationScale load_calibration_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open calibration file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("calibration file is not valid JSON: " + std::string(e.what()));
  }
  if (require_string(j, "", "schema") != kCalibrationSchema) {
    throw SchemaError("calibration file has wrong schema");
  }
  CalibrationScale scale;
  scale.scale_u = require_number(j, "", "scale_u");
  scale.scale_v = require_number(j, "", "scale_v");
  if (!(scale.scale_u > 0.0) || !(scale.scale_v > 0.0)) {
    throw PhysicsError("calibration scales must be > 0");
  }
  return scale;
}

RunArtifacts run_scenario(const Scenario& sc) {
  validate_scenario(sc);

  RunArtifacts artifacts;
  try {
    artifacts.model = build_bench(sc.bench);
  } catch (const std::logic_error& e) {
    throw PhysicsError(e.what());
  }
  const TrajectorySpec trajectory = truncate_to(sc.trajectory, sc.duration);

  std::vector<SampleRecord> raw;
  if (sc.tier == Tier::Baseband) {
    raw = simulate_baseband(artifacts.model, trajectory, sc.dsp.out_dt, sc.seed);
    // Baseband draws are vacuum-normalized by construction; "auto" is the
    // identity here, only an explicit calibration file is applied.
    if (sc.calibration != "auto" && sc.calibration != "none") {
      artifacts.calibration = load_calibration_json(sc.calibration);
    }
  } else {
    raw = demodulated_records(sc, artifacts.model, trajectory, sc.seed, nullptr);
    if (sc.calibration == "auto") {
      artifacts.calibration = run_calibration(sc);
    } else if (sc.calibration != "none") {
      artifacts.calibration = load_calibration_json(sc.calibration);
    }
  }
  artifacts.records = apply_calibration(std::move(raw), artifacts.calibration);
  const double correlation =
      sc.tier == Tier::Rf
          ? record_correlation_factor(sc.dsp.fir, sc.dsp.sample_rate, sc.dsp.out_dt)
          : 1.0;
  artifacts.summary = analyze_run(artifacts.records, artifacts.model, &trajectory,
                                  sc.analysis_window, artifacts.calibration, correlation);
  return artifacts;
}

void write_records_csv(const std::vector<SampleRecord>& records, const ReadoutModel& model,
                       const std::string& path) {
  const Eigen::Matrix2d inv = model.gain.inverse();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "t,u,v,x_inferred,y_inferred\n";
  char line[192];
  for (const auto& record : records) {
    const double x = inv(0, 0) * record.u + inv(0, 1) * record.v;
    const double y = inv(1, 0) * record.u + inv(1, 1) * record.v;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", record.t, record.u,
                  record.v, x, y);
    out << line;
  }
  if (!out) throw IoError("failed writing " + path);
}

RunArtifacts run_scenario_to(const Scenario& sc, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  RunArtifacts artifacts = run_scenario(sc);
  write_records_csv(artifacts.records, artifacts.model, resolve(out_dir, sc.outputs.records));
  write_text_file(resolve(out_dir, sc.outputs.summary),
                  summary_to_json(artifacts.summary, sc).dump(2) + "\n");
  if (sc.outputs.windows_csv) {
    write_windows_csv(artifacts.summary, resolve(out_dir, *sc.outputs.windows_csv));
  }
  if (sc.outputs.residuals_csv) {
    const TrajectorySpec trajectory = truncate_to(sc.trajectory, sc.duration);
    const TrajectoryError error =
        trajectory_error(artifacts.records, trajectory, artifacts.model);
    write_residuals_csv(artifacts.records, error, resolve(out_dir, *sc.outputs.residuals_csv));
  }
  if (sc.outputs.fir_taps_csv) {
    write_fir_taps_csv(design_lowpass_taps(sc.dsp.fir, sc.dsp.sample_rate),
                       resolve(out_dir, *sc.outputs.fir_taps_csv));
  }
  if (sc.tier == Tier::Rf && (sc.outputs.rf_trace_csv || sc.outputs.rf_trace_raw)) {
    // Re-synthesize for export; runs are deterministic so this matches the
    // trace the records came from.
    const TrajectorySpec trajectory = truncate_to(sc.trajectory, sc.duration);
    RfTrace trace;
    (void)demodulated_records(sc, artifacts.model, trajectory, sc.seed, &trace);
    if (sc.outputs.rf_trace_csv) write_rf_csv(trace, resolve(out_dir, *sc.outputs.rf_trace_csv));
    if (sc.outputs.rf_trace_raw) write_rf_raw(trace, resolve(out_dir, *sc.outputs.rf_trace_raw));
  }
  return artifacts;
}

std::vector<SweepRow> sweep(const std::string& parameter, const std::vector<double>& grid,
                            const Scenario& base, const std::string& out_dir) {
  if (grid.empty()) throw SchemaError("sweep: empty grid");
  enum class Param { Loss, SqueezingDb, Visibility } param;
  if (parameter == "loss") {
    param = Param::Loss;
  } else if (parameter == "squeezing_db") {
    param = Param::SqueezingDb;
  } else if (parameter == "visibility") {
    param = Param::Visibility;
  } else {
    throw SchemaError("sweep parameter must be one of loss, squeezing_db, visibility");
  }

  std::vector<Scenario> points;
  points.reserve(grid.size());
  for (double value : grid) {
    Scenario sc = base;
    switch (param) {
      case Param::Loss:
        sc.bench.arm_loss_a = value;
        sc.bench.arm_loss_b = value;
        break;
      case Param::SqueezingDb:
        sc.bench.squeezer1_db = value;
        sc.bench.squeezer2_db = value;
        break;
      case Param::Visibility:
        sc.bench.bs1_visibility = value;
        sc.bench.bs3_visibility = value;
        break;
    }
    validate_scenario(sc);  // reject unphysical grid values up front
    points.push_back(std::move(sc));
  }

  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) return;
      try {
        char label[64];
        std::snprintf(label, sizeof label, "%s_%g", parameter.c_str(), grid[i]);
        const RunArtifacts artifacts =
            run_scenario_to(points[i], (fs::path(out_dir) / label).string());
        rows[i] = SweepRow{grid[i], artifacts.summary.product_inferred,
                           artifacts.summary.violation_factor_eq2,
                           0.5 * (artifacts.summary.squeezing_db_u +
                                  artifacts.summary.squeezing_db_v)};
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(points.size(),
                            std::max<std::size_t>(1, std::thread::hardware_concurrency() / 2));
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (first_error) std::rethrow_exception(first_error);

  write_sweep_csv(rows, (fs::path(out_dir) / ("sweep_" + parameter + ".csv")).string());
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "value,product,factor,db\n";
  char line[160];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", row.value, row.product,
                  row.factor, row.db);
    out << line;
  }
}

}  // namespace phasetrack
