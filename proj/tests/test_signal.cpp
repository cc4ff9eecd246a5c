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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "phasetrack/bench.hpp"
#include "phasetrack/dsp.hpp"
#include "phasetrack/signal.hpp"
#include "phasetrack/trajectory.hpp"

using namespace phasetrack;

namespace {

ReadoutModel make_model(double db, bool entangled, double arm_loss = 1.0) {
  BenchConfig config;
  config.squeezer1_db = db;
  config.squeezer2_db = db;
  config.detector_efficiency = 1.0;
  config.bs2_reflectivity = 1.0;
  config.arm_loss_a = arm_loss;
  config.arm_loss_b = arm_loss;
  config.entanglement_on = entangled;
  return build_bench(config);
}

double known_mean_var(const std::vector<SampleRecord>& records, bool second) {
  double acc = 0.0;
  for (const auto& record : records) {
    const double value = second ? record.v : record.u;
    acc += value * value;
  }
  return acc / static_cast<double>(records.size());
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("baseband vacuum calibration case: variance 1 within the 3-sigma band") {
  const auto records =
      simulate_baseband(make_model(0.0, false), zero_trajectory(0.026), 1e-5, 1401);
  REQUIRE(records.size() == 2601);
  CHECK(known_mean_var(records, false) == doctest::Approx(1.0).epsilon(0.06));
  CHECK(known_mean_var(records, true) == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("baseband 10 dB model: variances 0.1 within 10%") {
  const auto records =
      simulate_baseband(make_model(10.0, true), zero_trajectory(0.026), 1e-5, 1402);
  CHECK(known_mean_var(records, false) == doctest::Approx(0.1).epsilon(0.10));
  CHECK(known_mean_var(records, true) == doctest::Approx(0.1).epsilon(0.10));
}

TEST_CASE("baseband means follow the gain map and the symplectic chain") {
  const ReadoutModel model = make_model(0.0, false);
  const auto records =
      simulate_baseband(model, constant_trajectory(3.0, 0.0, 0.026), 1e-5, 1403);
  double mean_u = 0.0, mean_v = 0.0;
  for (const auto& record : records) {
    mean_u += record.u;
    mean_v += record.v;
  }
  mean_u /= static_cast<double>(records.size());
  mean_v /= static_cast<double>(records.size());
  const double sigma_mean = 1.0 / std::sqrt(static_cast<double>(records.size()));
  CHECK(std::abs(mean_u - 3.0 / std::sqrt(2.0)) < 4.0 * sigma_mean);
  CHECK(std::abs(mean_v) < 4.0 * sigma_mean);

  // Independent oracle for the gain map: push the displacement through the
  // gaussian ops directly and read the homodyne means.
  QuadratureState state = vacuum(2);
  state = beamsplitter(state, 0, 1, 0.5);
  state = displace(state, 0, 3.0, 0.0);
  state = beamsplitter(state, 0, 1, 0.5);
  const double expected_u = homodyne_moments(state, 0, 0.0).mean;
  const double expected_v = homodyne_moments(state, 1, std::numbers::pi / 2.0).mean;
  CHECK(model.gain(0, 0) * 3.0 == doctest::Approx(expected_u).epsilon(1e-12));
  CHECK(model.gain(1, 0) * 3.0 == doctest::Approx(expected_v).epsilon(1e-12));
}

TEST_CASE("baseband runs are deterministic and seed-sensitive") {
  const ReadoutModel model = make_model(10.0, true);
  const auto a = simulate_baseband(model, zero_trajectory(0.01), 1e-5, 99);
  const auto b = simulate_baseband(model, zero_trajectory(0.01), 1e-5, 99);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(SampleRecord)) == 0);

  const auto c = simulate_baseband(model, zero_trajectory(0.01), 1e-5, 100);
  CHECK(std::memcmp(a.data(), c.data(), a.size() * sizeof(SampleRecord)) != 0);
}

TEST_CASE("chunked seeding makes prefixes length-independent") {
  const ReadoutModel model = make_model(10.0, true);
  const auto long_run = simulate_baseband(model, zero_trajectory(0.70), 1e-5, 4);
  const auto short_run = simulate_baseband(model, zero_trajectory(0.66), 1e-5, 4);
  REQUIRE(long_run.size() > short_run.size());
  REQUIRE(short_run.size() > 65536);  // spans a chunk boundary
  CHECK(std::memcmp(long_run.data(), short_run.data(),
                    short_run.size() * sizeof(SampleRecord)) == 0);
}

TEST_CASE("noiseless synthesis demodulates to the displaced mean") {
  const ReadoutModel model = make_model(0.0, false);
  RfSynthOptions options;
  options.inject_noise = false;
  const RfTrace trace =
      synthesize_rf(model, constant_trajectory(4.0, 0.0, 1e-3), 1e-3, 1, options);
  const auto records = demodulate(trace, trace.carrier_f, 0.0, FirSpec{}, 1e-5);
  REQUIRE(records.size() == 101);
  const double expected = 4.0 / std::sqrt(2.0);
  for (const auto& record : records) {
    CHECK(record.u == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::abs(record.v) < 1e-9);
  }
}

TEST_CASE("doubling the displacement doubles the demodulated means exactly") {
  const ReadoutModel model = make_model(10.0, true);
  const auto run = [&](double amplitude) {
    const RfTrace trace = synthesize_rf(model, constant_trajectory(amplitude, 1.0, 2e-3), 2e-3,
                                        909, RfSynthOptions{});
    return demodulate(trace, trace.carrier_f, 0.0, FirSpec{}, 1e-5);
  };
  const auto base = run(2.0);
  const auto doubled = run(4.0);
  // Identical seeds put identical noise in both runs; the difference
  // isolates the signal path.
  REQUIRE(base.size() == doubled.size());
  const double expected = 2.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(doubled[i].u - base[i].u == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("rf tier matches the analytic noise within tolerance") {
  const ReadoutModel model = make_model(10.0, true, 0.9);
  const double expected = 0.9 * 0.1 + 0.1;
  const RfTrace trace =
      synthesize_rf(model, zero_trajectory(0.05), 0.05, 616, RfSynthOptions{});
  const auto records = demodulate(trace, trace.carrier_f, 0.0, FirSpec{}, 1e-5);
  REQUIRE(records.size() == 5001);
  CHECK(known_mean_var(records, false) == doctest::Approx(expected).epsilon(0.10));
  CHECK(known_mean_var(records, true) == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("rf synthesis is deterministic") {
  const ReadoutModel model = make_model(10.0, true);
  const RfTrace a = synthesize_rf(model, zero_trajectory(1e-3), 1e-3, 2718, RfSynthOptions{});
  const RfTrace b = synthesize_rf(model, zero_trajectory(1e-3), 1e-3, 2718, RfSynthOptions{});
  CHECK(a.bhd1 == b.bhd1);
  CHECK(a.bhd2 == b.bhd2);
}

TEST_CASE("broadband floor passes the anti-alias filter attenuated") {
  const ReadoutModel model = make_model(0.0, false);
  RfSynthOptions options;
  options.inject_noise = false;
  options.broadband_floor = true;
  options.broadband_sigma = 1.0;
  const RfTrace raw = synthesize_rf(model, zero_trajectory(5e-4), 5e-4, 33, options);
  const RfTrace filtered = antialias(raw);
  double raw_power = 0.0, filtered_power = 0.0;
  for (std::size_t i = raw.bhd1.size() / 4; i < 3 * raw.bhd1.size() / 4; ++i) {
    raw_power += raw.bhd1[i] * raw.bhd1[i];
    filtered_power += filtered.bhd1[i] * filtered.bhd1[i];
  }
  // A 50 MHz corner at 200 MS/s keeps roughly half the white power.
  CHECK(filtered_power / raw_power > 0.3);
  CHECK(filtered_power / raw_power < 0.75);
}

TEST_CASE("rf trace exports") {
  namespace fs = std::filesystem;
  const ReadoutModel model = make_model(0.0, false);
  RfSynthOptions options;
  options.inject_noise = false;
  options.guard = 0.0;
  RfTrace trace = synthesize_rf(model, constant_trajectory(1.0, 0.0, 1e-5), 1e-5, 1, options);

  const auto csv_path = fs::temp_directory_path() / "phasetrack_trace.csv";
  const auto raw_path = fs::temp_directory_path() / "phasetrack_trace.bin";
  write_rf_csv(trace, csv_path.string());
  write_rf_raw(trace, raw_path.string());

  std::ifstream csv(csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,i1,i2");

  CHECK(fs::file_size(raw_path) == trace.bhd1.size() * 2 * sizeof(double));
  std::ifstream raw(raw_path, std::ios::binary);
  double first = 0.0;
  raw.read(reinterpret_cast<char*>(&first), sizeof first);
  CHECK(first == trace.bhd1.front());

  fs::remove(csv_path);
  fs::remove(raw_path);
}

TEST_CASE("synthesis rejects inconsistent rates and durations") {
  const ReadoutModel model = make_model(0.0, false);
  const TrajectorySpec spec = zero_trajectory(1e-3);

  RfSynthOptions options;
  options.noise_oversample_rate = 3e7;  // does not divide 2e8
  CHECK_THROWS_AS(synthesize_rf(model, spec, 1e-3, 1, options), std::domain_error);

  options = RfSynthOptions{};
  options.noise_oversample_rate = 2e7;  // band reaches past the 5 MHz carrier
  CHECK_THROWS_AS(synthesize_rf(model, spec, 1e-3, 1, options), std::domain_error);

  options = RfSynthOptions{};
  options.guard = -1.0;
  CHECK_THROWS_AS(synthesize_rf(model, spec, 1e-3, 1, options), std::domain_error);

  CHECK_THROWS_AS(synthesize_rf(model, spec, 2e-3, 1, RfSynthOptions{}), std::domain_error);
}

}  // TEST_SUITE
