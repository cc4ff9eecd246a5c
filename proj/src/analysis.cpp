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

#include "phasetrack/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

namespace phasetrack {

namespace {

class NeumaierSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    comp_ += std::abs(sum_) >= std::abs(value) ? (sum_ - t) + value : (value - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_timeline(std::span<const SampleRecord> records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].t < 0.0) throw std::invalid_argument("records: negative time");
    if (i > 0 && !(records[i].t > records[i - 1].t)) {
      throw std::invalid_argument("records: times must be strictly increasing");
    }
  }
}

}  // namespace

double compensated_sum(std::span<const double> values) {
  NeumaierSum sum;
  for (double value : values) sum.add(value);
  return sum.value();
}

double excess_kurtosis(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 4) throw std::invalid_argument("excess_kurtosis: need >= 4 values");
  NeumaierSum sum;
  for (double value : values) sum.add(value);
  const double mean = sum.value() / n;
  NeumaierSum m2, m4;
  for (double value : values) {
    const double d = value - mean;
    m2.add(d * d);
    m4.add(d * d * d * d);
  }
  const double v = m2.value() / n;
  return m4.value() / n / (v * v) - 3.0;
}

WindowedVariance windowed_variance(std::span<const SampleRecord> records, int window,
                                   const TrajectorySpec* trajectory,
                                   const ReadoutModel* model) {
  if (window < 2) throw std::invalid_argument("windowed_variance: window must be >= 2");
  if (records.size() < static_cast<std::size_t>(window)) {
    throw std::invalid_argument("windowed_variance: need at least " + std::to_string(window) +
                                " records, got " + std::to_string(records.size()));
  }
  if (trajectory != nullptr && model == nullptr) {
    throw std::invalid_argument("windowed_variance: trajectory requires a readout model");
  }
  check_timeline(records);

  WindowedVariance out;
  out.window = window;
  out.known_mean = trajectory != nullptr;

  std::optional<TrajectorySampler> sampler;
  if (trajectory) sampler.emplace(*trajectory);

  const std::size_t n_windows = records.size() / static_cast<std::size_t>(window);
  out.n_used = n_windows * static_cast<std::size_t>(window);
  NeumaierSum total_uu, total_vv, total_uv;

  for (std::size_t w = 0; w < n_windows; ++w) {
    const auto* block = records.data() + w * static_cast<std::size_t>(window);
    NeumaierSum sum_uu, sum_vv, sum_uv;
    double denom;
    if (sampler) {
      for (int i = 0; i < window; ++i) {
        if (block[i].t > trajectory->duration + 1e-9) {
          throw std::invalid_argument("windowed_variance: record time outside trajectory");
        }
        const MeanPoint mean = sampler->at_clamped(block[i].t);
        const double mu = model->gain(0, 0) * mean.x + model->gain(0, 1) * mean.y;
        const double mv = model->gain(1, 0) * mean.x + model->gain(1, 1) * mean.y;
        const double du = block[i].u - mu;
        const double dv = block[i].v - mv;
        sum_uu.add(du * du);
        sum_vv.add(dv * dv);
        sum_uv.add(du * dv);
      }
      denom = static_cast<double>(window);
    } else {
      NeumaierSum mean_u, mean_v;
      for (int i = 0; i < window; ++i) {
        mean_u.add(block[i].u);
        mean_v.add(block[i].v);
      }
      const double mu = mean_u.value() / window;
      const double mv = mean_v.value() / window;
      for (int i = 0; i < window; ++i) {
        const double du = block[i].u - mu;
        const double dv = block[i].v - mv;
        sum_uu.add(du * du);
        sum_vv.add(dv * dv);
        sum_uv.add(du * dv);
      }
      denom = static_cast<double>(window - 1);
    }
    out.per_window_u.push_back(sum_uu.value() / denom);
    out.per_window_v.push_back(sum_vv.value() / denom);
    total_uu.add(sum_uu.value() / denom);
    total_vv.add(sum_vv.value() / denom);
    total_uv.add(sum_uv.value() / denom);
  }
  const auto n = static_cast<double>(n_windows);
  out.var_u = total_uu.value() / n;
  out.var_v = total_vv.value() / n;
  out.cov_uv = total_uv.value() / n;
  return out;
}

UncertaintyProduct uncertainty_product(const WindowedVariance& variance,
                                       const ReadoutModel& model) {
  if (!(variance.var_u > 0.0) || !(variance.var_v > 0.0)) {
    throw std::domain_error("uncertainty_product: zero variance");
  }
  const double det = model.gain.determinant();
  if (std::abs(det) < 1e-12) {
    throw std::domain_error("uncertainty_product: singular gain");
  }
  Eigen::Matrix2d record_cov;
  record_cov << variance.var_u, variance.cov_uv, variance.cov_uv, variance.var_v;
  const Eigen::Matrix2d inv = model.gain.inverse();
  const Eigen::Matrix2d inferred = inv * record_cov * inv.transpose();

  UncertaintyProduct out;
  out.var_x_inferred = inferred(0, 0);
  out.var_y_inferred = inferred(1, 1);
  out.product = std::sqrt(out.var_x_inferred * out.var_y_inferred);
  out.violation_factor_eq2 = 2.0 / out.product;
  return out;
}

TrajectoryError trajectory_error(std::span<const SampleRecord> records,
                                 const TrajectorySpec& trajectory, const ReadoutModel& model) {
  check_timeline(records);
  const TrajectorySampler sampler(trajectory);
  const Eigen::Matrix2d inv = model.gain.inverse();
  if (!inv.allFinite()) throw std::domain_error("trajectory_error: singular gain");

  TrajectoryError out;
  out.residual_x.reserve(records.size());
  out.residual_y.reserve(records.size());
  NeumaierSum ss_x, ss_y;
  for (const auto& record : records) {
    if (record.t > trajectory.duration + 1e-9) {
      throw std::invalid_argument("trajectory_error: record time outside trajectory timeline");
    }
    const MeanPoint truth = sampler.at_clamped(record.t);
    const double x = inv(0, 0) * record.u + inv(0, 1) * record.v;
    const double y = inv(1, 0) * record.u + inv(1, 1) * record.v;
    const double rx = x - truth.x;
    const double ry = y - truth.y;
    out.residual_x.push_back(rx);
    out.residual_y.push_back(ry);
    ss_x.add(rx * rx);
    ss_y.add(ry * ry);
  }
  const auto n = static_cast<double>(records.size());
  if (n > 0) {
    out.rms_x = std::sqrt(ss_x.value() / n);
    out.rms_y = std::sqrt(ss_y.value() / n);
  }
  return out;
}

std::string to_string(BoundClass value) {
  switch (value) {
    case BoundClass::ViolatesEq2: return "violates_eq2";
    case BoundClass::Semiclassical: return "semiclassical";
    case BoundClass::UnphysicalFlag: return "unphysical_flag";
  }
  return "unknown";
}

BoundClass bound_check(double product, double product_sigma, double predicted_product) {
  if (product < predicted_product - 5.0 * product_sigma) {
    return BoundClass::UnphysicalFlag;
  }
  if (product < 2.0 - 3.0 * product_sigma) {
    return BoundClass::ViolatesEq2;
  }
  return BoundClass::Semiclassical;
}

RunSummary analyze_run(std::span<const SampleRecord> records, const ReadoutModel& model,
                       const TrajectorySpec* trajectory, int window,
                       const CalibrationScale& calibration, double correlation_factor) {
  if (!(correlation_factor >= 1.0)) {
    throw std::invalid_argument("analyze_run: correlation factor must be >= 1");
  }
  RunSummary summary;
  summary.n_records = records.size();
  summary.window_size = window;
  summary.calibration = calibration;

  const WindowedVariance variance = windowed_variance(records, window, trajectory,
                                                      trajectory ? &model : nullptr);
  summary.known_mean = variance.known_mean;
  summary.var_u = variance.var_u;
  summary.var_v = variance.var_v;
  summary.cov_uv = variance.cov_uv;
  summary.per_window_u = variance.per_window_u;
  summary.per_window_v = variance.per_window_v;
  summary.squeezing_db_u = 10.0 * std::log10(variance.var_u);
  summary.squeezing_db_v = 10.0 * std::log10(variance.var_v);

  const UncertaintyProduct product = uncertainty_product(variance, model);
  summary.var_x_inferred = product.var_x_inferred;
  summary.var_y_inferred = product.var_y_inferred;
  summary.product_inferred = product.product;
  summary.violation_factor_eq2 = product.violation_factor_eq2;

  // Chi-square statistics of the variance estimator at the achieved count,
  // corrected for record-to-record correlation; the product of two
  // (near-independent) estimates has half the relative variance of each,
  // summed.
  const double n_eff = static_cast<double>(variance.n_used) / correlation_factor;
  summary.correlation_factor = correlation_factor;
  summary.var_rel_sigma = std::sqrt(2.0 / n_eff);
  summary.product_sigma = product.product / std::sqrt(n_eff);
  summary.predicted_product = predicted_uncertainty_product(model);
  summary.bound = bound_check(product.product, summary.product_sigma, summary.predicted_product);

  if (trajectory != nullptr) {
    const TrajectoryError error = trajectory_error(records, *trajectory, model);
    summary.rms_x = error.rms_x;
    summary.rms_y = error.rms_y;
    if (records.size() >= 4) {
      summary.kurtosis_u = excess_kurtosis(error.residual_x);
      summary.kurtosis_v = excess_kurtosis(error.residual_y);
    }
  } else if (records.size() >= 4) {
    std::vector<double> us, vs;
    us.reserve(records.size());
    vs.reserve(records.size());
    for (const auto& record : records) {
      us.push_back(record.u);
      vs.push_back(record.v);
    }
    summary.kurtosis_u = excess_kurtosis(us);
    summary.kurtosis_v = excess_kurtosis(vs);
  }
  return summary;
}

void write_windows_csv(const RunSummary& summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "window_index,var_u,var_v\n";
  char line[96];
  for (std::size_t i = 0; i < summary.per_window_u.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, summary.per_window_u[i],
                  summary.per_window_v[i]);
    out << line;
  }
}

void write_residuals_csv(std::span<const SampleRecord> records, const TrajectoryError& error,
                         const std::string& path) {
  if (records.size() != error.residual_x.size()) {
    throw std::invalid_argument("write_residuals_csv: size mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,res_x,res_y\n";
  char line[128];
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", records[i].t, error.residual_x[i],
                  error.residual_y[i]);
    out << line;
  }
}

}  // namespace phasetrack
