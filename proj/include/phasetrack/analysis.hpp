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

#ifndef PHASETRACK_ANALYSIS_HPP
#define PHASETRACK_ANALYSIS_HPP

#include <span>
#include <string>
#include <vector>

#include "phasetrack/bench.hpp"
#include "phasetrack/dsp.hpp"
#include "phasetrack/records.hpp"
#include "phasetrack/trajectory.hpp"

namespace phasetrack {

/// Neumaier-compensated summation; analysis results are required to be
/// deterministic up to evaluation order, so plain accumulation is not used.
double compensated_sum(std::span<const double> values);

/// Sample excess kurtosis.
double excess_kurtosis(std::span<const double> values);

/// Windowed second moments of the (u, v) record streams.
/// When a trajectory (and readout model) is supplied the residuals are taken
/// about the known means gain*(x(t), y(t)) and the estimator divides by n;
/// otherwise each window subtracts its own sample mean and divides by n - 1.
struct WindowedVariance {
  int window = 0;
  std::size_t n_used = 0;  // records covered by complete windows
  bool known_mean = false;
  double var_u = 0.0;  // pooled over complete windows
  double var_v = 0.0;
  double cov_uv = 0.0;
  std::vector<double> per_window_u;
  std::vector<double> per_window_v;
};

WindowedVariance windowed_variance(std::span<const SampleRecord> records, int window,
                                   const TrajectorySpec* trajectory = nullptr,
                                   const ReadoutModel* model = nullptr);

/// Inferred-observable statistics: record covariance mapped back through the
/// readout gain. product is the product of the inferred standard deviations;
/// violation_factor_eq2 = 2 / product (the simultaneous-measurement bound).
struct UncertaintyProduct {
  double var_x_inferred = 0.0;
  double var_y_inferred = 0.0;
  double product = 0.0;
  double violation_factor_eq2 = 0.0;
};

UncertaintyProduct uncertainty_product(const WindowedVariance& variance,
                                       const ReadoutModel& model);

/// Residuals of the inferred records against the true trajectory.
struct TrajectoryError {
  double rms_x = 0.0;
  double rms_y = 0.0;
  std::vector<double> residual_x;
  std::vector<double> residual_y;
};

TrajectoryError trajectory_error(std::span<const SampleRecord> records,
                                 const TrajectorySpec& trajectory, const ReadoutModel& model);

enum class BoundClass { ViolatesEq2, Semiclassical, UnphysicalFlag };

std::string to_string(BoundClass value);

/// Classify a measured uncertainty product:
///   - more than 5 sigma below the model's own prediction -> UnphysicalFlag
///     (self-consistency alarm; the zero-commutator bound itself allows any
///     positive value, but the configured model fixes the expectation),
///   - more than 3 sigma below 2 -> ViolatesEq2,
///   - otherwise semiclassical.
BoundClass bound_check(double product, double product_sigma, double predicted_product);

/// Everything the run reports: windowed variances, uncertainty products,
/// bound classification, squeezing in dB, and trajectory-tracking errors.
/// Statistical one-sigma bands come from chi-square estimator statistics at
/// the achieved record count and are carried in the summary rather than
/// being hard-coded anywhere.
struct RunSummary {
  std::size_t n_records = 0;
  int window_size = 0;
  bool known_mean = false;
  double var_u = 0.0;
  double var_v = 0.0;
  double cov_uv = 0.0;
  double var_x_inferred = 0.0;
  double var_y_inferred = 0.0;
  double product_inferred = 0.0;
  double violation_factor_eq2 = 0.0;
  double squeezing_db_u = 0.0;
  double squeezing_db_v = 0.0;
  std::vector<double> per_window_u;
  std::vector<double> per_window_v;
  double var_rel_sigma = 0.0;        // 1-sigma relative error of each variance
  double product_sigma = 0.0;        // 1-sigma absolute error of the product
  double correlation_factor = 1.0;   // estimator dof inflation of the records
  double predicted_product = 0.0;    // model expectation
  BoundClass bound = BoundClass::Semiclassical;
  double rms_x = 0.0;
  double rms_y = 0.0;
  double kurtosis_u = 0.0;  // excess kurtosis of the u residuals
  double kurtosis_v = 0.0;
  CalibrationScale calibration;
};

/// correlation_factor is the variance-estimator inflation of correlated
/// records (record_correlation_factor); 1 for independent (baseband) draws.
RunSummary analyze_run(std::span<const SampleRecord> records, const ReadoutModel& model,
                       const TrajectorySpec* trajectory, int window,
                       const CalibrationScale& calibration, double correlation_factor = 1.0);

void write_windows_csv(const RunSummary& summary, const std::string& path);
void write_residuals_csv(std::span<const SampleRecord> records, const TrajectoryError& error,
                         const std::string& path);

}  // namespace phasetrack

#endif
