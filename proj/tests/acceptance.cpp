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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "phasetrack/analysis.hpp"
#include "phasetrack/bench.hpp"
#include "phasetrack/dsp.hpp"
#include "phasetrack/gaussian.hpp"
#include "phasetrack/rng.hpp"
#include "phasetrack/scenario.hpp"
#include "phasetrack/signal.hpp"
#include "phasetrack/trajectory.hpp"

using namespace phasetrack;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const std::string kScenarioDir = PHASETRACK_SCENARIO_DIR;

int g_failures = 0;

void criterion(int index, const char* name, bool pass, const std::string& details) {
  std::printf("[%s] %d. %s — %s\n", pass ? "PASS" : "FAIL", index, name, details.c_str());
  if (!pass) ++g_failures;
}

double wall_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double known_mean_var(const std::vector<SampleRecord>& records, bool second) {
  double acc = 0.0;
  for (const auto& record : records) {
    const double value = second ? record.v : record.u;
    acc += value * value;
  }
  return acc / static_cast<double>(records.size());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

BenchConfig grid_config(bool entangled, double arm_efficiency) {
  BenchConfig config;
  config.squeezer1_db = 10.0;
  config.squeezer2_db = 10.0;
  config.detector_efficiency = 1.0;
  config.bs2_reflectivity = 1.0;
  config.arm_loss_a = arm_efficiency;
  config.arm_loss_b = arm_efficiency;
  config.entanglement_on = entangled;
  return config;
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const Scenario sc = load_scenario(kScenarioDir + "/vacuum.json");
  const RunArtifacts artifacts = run_scenario(sc);
  const double elapsed = wall_seconds(start);
  const double product = artifacts.summary.product_inferred;

  char details[160];
  std::snprintf(details, sizeof details, "product %.4f (target 2.0 within 6%%), runtime %.3fs",
                product, elapsed);
  criterion(1, "semiclassical baseline saturates the factor-2 bound",
            std::abs(product - 2.0) <= 0.12 && elapsed < 1.0 &&
                artifacts.summary.bound == BoundClass::Semiclassical,
            details);
}

// --- criterion 2 -----------------------------------------------------------

void criterion_2() {
  const Scenario sc = load_scenario(kScenarioDir + "/tenDB_fig3.json");
  const RunArtifacts artifacts = run_scenario(sc);
  const RunSummary& summary = artifacts.summary;

  const bool vars_ok = std::abs(summary.var_u - 0.1) <= 0.01 &&
                       std::abs(summary.var_v - 0.1) <= 0.01;
  const bool product_ok = std::abs(summary.product_inferred - 0.2) <= 0.02;
  const bool factor_ok = summary.violation_factor_eq2 >= 9.0;

  // 260-point windows scatter around 0.1 consistently with the estimator's
  // chi-square statistics at the records' correlation.
  const TrajectorySpec spec = zero_trajectory(sc.duration);
  const ReadoutModel& model = artifacts.model;
  const WindowedVariance windows = windowed_variance(artifacts.records, 260, &spec, &model);
  const double corr = record_correlation_factor(sc.dsp.fir, sc.dsp.sample_rate, sc.dsp.out_dt);
  const double sigma_window = std::sqrt(2.0 * corr / 260.0);
  double worst_z = 0.0, sum_z = 0.0, sum_z2 = 0.0;
  for (std::size_t w = 0; w < windows.per_window_u.size(); ++w) {
    for (double value : {windows.per_window_u[w], windows.per_window_v[w]}) {
      const double z = (value / 0.1 - 1.0) / sigma_window;
      worst_z = std::max(worst_z, std::abs(z));
      sum_z += z;
      sum_z2 += z * z;
    }
  }
  const double n_z = 2.0 * static_cast<double>(windows.per_window_u.size());
  const double sd_z = std::sqrt(std::max(sum_z2 / n_z - (sum_z / n_z) * (sum_z / n_z), 0.0));
  const bool windows_ok = worst_z < 4.5 && sd_z > 0.35 && sd_z < 2.0;

  char details[240];
  std::snprintf(details, sizeof details,
                "var (%.4f, %.4f), product %.4f, factor %.2f, window z: max %.2f sd %.2f",
                summary.var_u, summary.var_v, summary.product_inferred,
                summary.violation_factor_eq2, worst_z, sd_z);
  criterion(2, "10 dB run reproduces the 0.1 variances and product 0.2",
            vars_ok && product_ok && factor_ok && windows_ok, details);
}

// --- criterion 3 -----------------------------------------------------------

void criterion_3() {
  // Tier cross-validation: raw RF pipeline variances against the analytic
  // baseband noise for entanglement on/off and three loss values. Records
  // stay on the 10 us grid; the run length (>= the 2600-sample minimum)
  // keeps the estimator's own spread inside the 5% tolerance.
  const double duration = 0.18;
  const FirSpec fir;
  bool all_ok = true;
  double worst = 0.0;
  uint64_t seed = 860000;
  for (bool entangled : {false, true}) {
    for (double eta : {1.0, 0.9, 0.7}) {
      const ReadoutModel model = build_bench(grid_config(entangled, eta));
      const RfTrace trace =
          synthesize_rf(model, zero_trajectory(duration), duration, seed++, RfSynthOptions{});
      RfTrace filtered = trace;
      antialias_in_place(filtered);
      const auto records = demodulate(filtered, filtered.carrier_f, 0.0, fir, 1e-5);
      const double expected = entangled ? eta * 0.1 + (1.0 - eta) : 1.0;
      for (bool channel : {false, true}) {
        const double rel = known_mean_var(records, channel) / expected - 1.0;
        worst = std::max(worst, std::abs(rel));
        all_ok = all_ok && std::abs(rel) <= 0.05;
      }
    }
  }

  // Throughput: a full 5 ms faithful-tier run (10^6 samples per channel at
  // 200 MS/s) through synthesis, anti-aliasing and demodulation.
  const auto start = std::chrono::steady_clock::now();
  const ReadoutModel model = build_bench(grid_config(true, 1.0));
  RfTrace trace = synthesize_rf(model, fig4_top_preset(), 5e-3, 1, RfSynthOptions{});
  antialias_in_place(trace);
  const auto records = demodulate(trace, trace.carrier_f, 0.0, fir, 1e-5);
  const double elapsed = wall_seconds(start);

  char details[200];
  std::snprintf(details, sizeof details,
                "worst tier mismatch %.2f%% (tolerance 5%%), 5 ms rf run %.2fs (< 30 s), %zu records",
                100.0 * worst, elapsed, records.size());
  criterion(3, "rf tier matches the baseband analytic noise across the loss grid",
            all_ok && elapsed < 30.0, details);
}

// --- criterion 4 -----------------------------------------------------------

void criterion_4() {
  const Scenario sc = load_scenario(kScenarioDir + "/fig4_top.json");
  const RunArtifacts artifacts = run_scenario(sc);
  const TrajectorySpec spec = truncate_to(sc.trajectory, sc.duration);
  const Eigen::Matrix2d inferred = inferred_noise_cov(artifacts.model);
  const double sigma_combined = std::sqrt(inferred(0, 0) + inferred(1, 1));

  const double sqrt2 = std::numbers::sqrt2;
  const double quoted_start_x = -3.7 * sqrt2, quoted_start_y = 5.8 * sqrt2;
  const double quoted_stop_x = -5.3 * sqrt2, quoted_stop_y = -4.3 * sqrt2;

  const Eigen::Matrix2d gain_inv = artifacts.model.gain.inverse();
  const auto infer = [&](const SampleRecord& record) {
    return std::pair<double, double>{
        gain_inv(0, 0) * record.u + gain_inv(0, 1) * record.v,
        gain_inv(1, 0) * record.u + gain_inv(1, 1) * record.v};
  };
  const auto [x0, y0] = infer(artifacts.records.front());
  const auto [x1, y1] = infer(artifacts.records.back());
  const double start_miss = std::hypot(x0 - quoted_start_x, y0 - quoted_start_y);
  const double stop_miss = std::hypot(x1 - quoted_stop_x, y1 - quoted_stop_y);
  const bool endpoints_ok =
      start_miss <= 3.0 * sigma_combined && stop_miss <= 3.0 * sigma_combined;

  // RMS residual ratio between the no-entanglement reference and the 10 dB
  // run, pooled over repeated measurements of the same trajectory (the
  // repeat-count style of the reproduced figure).
  Scenario vacuum_sc = sc;
  vacuum_sc.bench.entanglement_on = false;
  vacuum_sc.calibration = "none";
  Scenario squeezed_sc = sc;
  squeezed_sc.calibration = "none";

  double ss_vac = 0.0, ss_sq = 0.0;
  std::size_t n_vac = 0, n_sq = 0;
  for (uint64_t repeat = 0; repeat < 8; ++repeat) {
    squeezed_sc.seed = derive_seed(sc.seed, "repeat", repeat);
    vacuum_sc.seed = derive_seed(sc.seed + 1, "repeat", repeat);
    const RunArtifacts sq = run_scenario(squeezed_sc);
    const RunArtifacts vac = run_scenario(vacuum_sc);
    const TrajectoryError err_sq = trajectory_error(sq.records, spec, sq.model);
    const TrajectoryError err_vac = trajectory_error(vac.records, spec, vac.model);
    const auto n1 = static_cast<double>(sq.records.size());
    const auto n2 = static_cast<double>(vac.records.size());
    ss_sq += (err_sq.rms_x * err_sq.rms_x + err_sq.rms_y * err_sq.rms_y) * n1;
    ss_vac += (err_vac.rms_x * err_vac.rms_x + err_vac.rms_y * err_vac.rms_y) * n2;
    n_sq += 2 * sq.records.size();
    n_vac += 2 * vac.records.size();
  }
  const double ratio = std::sqrt((ss_vac / static_cast<double>(n_vac)) /
                                 (ss_sq / static_cast<double>(n_sq)));
  const bool ratio_ok = std::abs(ratio - std::sqrt(10.0)) <= 0.1 * std::sqrt(10.0);

  char details[240];
  std::snprintf(details, sizeof details,
                "endpoint misses %.3f / %.3f (3 combined SE = %.3f), rms ratio %.3f "
                "(target sqrt(10) = %.3f within 10%%)",
                start_miss, stop_miss, 3.0 * sigma_combined, ratio, std::sqrt(10.0));
  criterion(4, "fig4 trajectory tracked through the quoted endpoints", endpoints_ok && ratio_ok,
            details);
}

// --- criterion 5 -----------------------------------------------------------

void criterion_5() {
  Xoshiro256pp rng(424242);
  const auto uniform = [&](double lo, double hi) { return lo + rng.uniform01() * (hi - lo); };
  const auto uniform_int = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.uniform01() * (hi - lo + 1));
  };

  bool physical_ok = true, homodyne_ok = true, inverse_ok = true;
  double min_eigenvalue = 1e300, min_product = 1e300, worst_inverse = 0.0;

  for (int trial = 0; trial < 1000; ++trial) {
    const int n_modes = uniform_int(1, 4);
    QuadratureState state = vacuum(n_modes);
    const int n_ops = uniform_int(1, 8);
    for (int k = 0; k < n_ops; ++k) {
      switch (uniform_int(0, 4)) {
        case 0:
          state = squeeze(state, uniform_int(0, n_modes - 1), uniform(0.0, 1.2),
                          uniform(0.0, 2.0 * kPi));
          break;
        case 1: {
          if (n_modes < 2) break;
          const int i = uniform_int(0, n_modes - 1);
          int j = uniform_int(0, n_modes - 2);
          if (j >= i) ++j;
          state = beamsplitter(state, i, j, uniform(0.0, 1.0), uniform(0.0, 2.0 * kPi));
          break;
        }
        case 2:
          state = phase_rotate(state, uniform_int(0, n_modes - 1), uniform(0.0, 2.0 * kPi));
          break;
        case 3:
          state = displace(state, uniform_int(0, n_modes - 1), uniform(-4.0, 4.0),
                           uniform(-4.0, 4.0));
          break;
        default:
          state = loss(state, uniform_int(0, n_modes - 1), LossChannel(uniform(0.0, 1.0)));
          break;
      }
    }

    const double nu_min = symplectic_eigenvalues(state.cov).minCoeff();
    min_eigenvalue = std::min(min_eigenvalue, nu_min);
    physical_ok = physical_ok && nu_min >= 1.0 - 1e-9;

    for (int mode = 0; mode < n_modes; ++mode) {
      for (int i = 0; i < 4; ++i) {
        const double theta = i * kPi / 4.0;
        const double product = homodyne_moments(state, mode, theta).variance *
                               homodyne_moments(state, mode, theta + kPi / 2.0).variance;
        min_product = std::min(min_product, product);
        homodyne_ok = homodyne_ok && product >= 1.0 - 1e-9;
      }
    }

    if (n_modes >= 2) {
      const double t_power = uniform(0.0, 1.0);
      const double phase = uniform(0.0, 2.0 * kPi);
      QuadratureState round = beamsplitter(state, 0, 1, t_power, phase);
      round = beamsplitter(round, 0, 1, t_power, phase + kPi);
      const double deviation =
          std::max((round.cov - state.cov).cwiseAbs().maxCoeff(),
                   (round.mean - state.mean).cwiseAbs().maxCoeff());
      worst_inverse = std::max(worst_inverse, deviation);
      inverse_ok = inverse_ok && deviation <= 1e-10;
    }
  }

  char details[200];
  std::snprintf(details, sizeof details,
                "min symplectic eigenvalue %.12f, min homodyne product %.12f, "
                "worst splitter inverse %.2e",
                min_eigenvalue, min_product, worst_inverse);
  criterion(5, "1000 random op sequences respect physicality and the Heisenberg bound",
            physical_ok && homodyne_ok && inverse_ok, details);
}

// --- criterion 6 -----------------------------------------------------------

void criterion_6() {
  bool closed_ok = true, mc_ok = true;
  double worst_closed = 0.0, worst_mc = 0.0;
  for (double db : {3.0, 10.0, 13.0}) {
    const double r = squeeze_parameter_from_db(db);
    QuadratureState state = vacuum(2);
    state = squeeze(state, 0, r, kPi / 2.0);
    state = squeeze(state, 1, r, 0.0);
    state = beamsplitter(state, 0, 1, 0.5);
    const double expected = std::exp(-2.0 * r);

    const double x_diff =
        joint_quadrature_variance(state, 0, 1, Quadrature::X, CombineSign::Minus);
    const double y_sum =
        joint_quadrature_variance(state, 0, 1, Quadrature::Y, CombineSign::Plus);
    worst_closed = std::max({worst_closed, std::abs(x_diff - expected),
                             std::abs(y_sum - expected)});
    closed_ok = closed_ok && std::abs(x_diff - expected) < 1e-10 &&
                std::abs(y_sum - expected) < 1e-10;

    // Monte-Carlo oracle: 10^6 draws via an independent Cholesky sampler.
    const Eigen::Matrix4d chol = state.cov.llt().matrixL();
    GaussianStream stream(fnv1a64("epr-mc") ^ static_cast<uint64_t>(db * 1000));
    const std::size_t draws = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    Eigen::Vector4d z;
    for (std::size_t i = 0; i < draws; ++i) {
      for (int k = 0; k < 4; ++k) z(k) = stream.next();
      const Eigen::Vector4d sample = chol * z;
      const double value = (sample(0) - sample(2)) / std::numbers::sqrt2;
      sum += value;
      sum_sq += value * value;
    }
    const double mean = sum / static_cast<double>(draws);
    const double empirical = sum_sq / static_cast<double>(draws) - mean * mean;
    const double standard_error = expected * std::sqrt(2.0 / static_cast<double>(draws));
    worst_mc = std::max(worst_mc, std::abs(empirical - expected) / standard_error);
    mc_ok = mc_ok && std::abs(empirical - expected) < 5.0 * standard_error;
  }

  char details[160];
  std::snprintf(details, sizeof details,
                "worst closed-form deviation %.2e (tol 1e-10), worst MC z-score %.2f (tol 5)",
                worst_closed, worst_mc);
  criterion(6, "EPR variances e^{-2r} from the chain and a 10^6-draw sampler",
            closed_ok && mc_ok, details);
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7() {
  const FirSpec fir;
  const double dc = fir_response_db(fir, 0.0, 2e8);
  const double stop = fir_response_db(fir, fir.cutoff_hz + fir.transition_hz, 2e8);
  const bool response_ok = std::abs(dc) <= 0.05 && stop <= -40.0;

  // Pure-tone amplitude recovery at the production rate (no anti-alias
  // filter in the path; the demodulation contract alone).
  RfTrace tone;
  tone.sample_rate = 2e8;
  tone.carrier_f = 5e6;
  const std::size_t n = static_cast<std::size_t>(2e8 * 2.2e-3);
  tone.bhd1.resize(n);
  tone.bhd2.resize(n);
  const double amplitude = 1.23456;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 2e8;
    tone.bhd1[i] = amplitude * std::cos(2.0 * kPi * 5e6 * t);
    tone.bhd2[i] = 0.0;
  }
  const auto records = demodulate(tone, 5e6, 0.0, fir, 1e-5);
  double worst_tone = 1e300;
  for (const auto& record : records) {
    worst_tone = std::min(worst_tone, -std::abs(record.u - amplitude));
  }
  worst_tone = -worst_tone / amplitude;
  const bool tone_ok = !records.empty() && worst_tone < 1e-3;

  // Group-delay compensation at the production rate: an amplitude step
  // lands within one output sample of its true time.
  RfTrace step = tone;
  const double t_step = 1.1037e-3;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<double>(i) / 2e8 < t_step) step.bhd1[i] = 0.0;
  }
  const auto step_records = demodulate(step, 5e6, 0.0, fir, 1e-5);
  double crossing = -1.0;
  for (std::size_t i = 1; i < step_records.size(); ++i) {
    if (step_records[i - 1].u < amplitude / 2.0 && step_records[i].u >= amplitude / 2.0) {
      crossing = step_records[i].t;
      break;
    }
  }
  const bool step_ok = crossing > 0.0 && std::abs(crossing - t_step) <= 1e-5 + 1e-12;

  char details[200];
  std::snprintf(details, sizeof details,
                "DC %.3f dB, stopband %.1f dB, tone error %.2e, step offset %.2e s", dc, stop,
                worst_tone, crossing > 0 ? std::abs(crossing - t_step) : -1.0);
  criterion(7, "FIR probes: DC gain, stopband, tone recovery, group delay",
            response_ok && tone_ok && step_ok, details);
}

// --- criterion 8 -----------------------------------------------------------

void criterion_8() {
  bool all_ok = true;
  std::string detail;
  for (const char* name : {"vacuum.json", "fig4_top.json"}) {
    const Scenario sc = load_scenario(kScenarioDir + "/" + name);
    const fs::path dir_a = fs::temp_directory_path() / (std::string("phasetrack_acc_a_") + name);
    const fs::path dir_b = fs::temp_directory_path() / (std::string("phasetrack_acc_b_") + name);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    run_scenario_to(sc, dir_a.string());
    run_scenario_to(sc, dir_b.string());
    const bool same = read_file(dir_a / "records.csv") == read_file(dir_b / "records.csv");
    all_ok = all_ok && same;
    detail += std::string(name) + (same ? " bit-identical; " : " DIFFERS; ");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
  }
  criterion(8, "re-running scenarios reproduces records.csv bit for bit", all_ok, detail);
}

}  // namespace

int main() {
  std::printf("phasetrack acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures == 0) {
    std::printf("ACCEPTANCE: 8/8 criteria passed\n");
    return 0;
  }
  std::printf("ACCEPTANCE: %d criteria FAILED\n", g_failures);
  return 1;
}
