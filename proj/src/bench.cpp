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

#include "phasetrack/bench.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasetrack {

namespace {

void require_range(double value, double lo, double hi, const char* field, bool lo_open = false) {
  const bool ok = (lo_open ? value > lo : value >= lo) && value <= hi;
  if (!ok) {
    throw std::domain_error(std::string("BenchConfig.") + field + " out of range: " +
                            std::to_string(value));
  }
}

Eigen::VectorXd readout_direction(int mode, double lo_phase) {
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(4);
  direction(2 * mode) = std::cos(lo_phase);
  direction(2 * mode + 1) = std::sin(lo_phase);
  return direction;
}

// Propagate the bench chain for one injected displacement. Mode 0 is the
// signal arm, mode 1 the reference arm.
QuadratureState propagate(const BenchConfig& c, double dx, double dy) {
  const double half_pi = std::numbers::pi / 2.0;
  QuadratureState state = vacuum(2);

  if (c.entanglement_on) {
    const double r1 = squeeze_parameter_from_db(c.squeezer1_db);
    const double r2 = squeeze_parameter_from_db(c.squeezer2_db);
    // Input 1 squeezed in Y, input 2 in X, so the splitter output has
    // squeezed X-difference and Y-sum.
    if (r1 > 0.0) state = squeeze(state, 0, r1, half_pi);
    if (r2 > 0.0) state = squeeze(state, 1, r2, 0.0);
  }

  const double eta_bs1 = visibility_to_efficiency(c.bs1_visibility);
  state = loss(state, 0, LossChannel(eta_bs1));
  state = loss(state, 1, LossChannel(eta_bs1));
  state = beamsplitter(state, 0, 1, 0.5);

  state = loss(state, 0, LossChannel(c.arm_loss_a));
  state = loss(state, 1, LossChannel(c.arm_loss_b));

  // Displacement coupler: the signal arm sees the 1-R transmission as loss;
  // the transmitted modulated beam shifts the mean directly. Its own quantum
  // noise through the 0.01% port is below 1e-4 of vacuum and is not modeled.
  state = loss(state, 0, LossChannel(c.bs2_reflectivity));
  state = displace(state, 0, dx, dy);

  const double eta_bs3 = visibility_to_efficiency(c.bs3_visibility);
  state = loss(state, 0, LossChannel(eta_bs3));
  state = loss(state, 1, LossChannel(eta_bs3));
  state = beamsplitter(state, 0, 1, 0.5);

  state = loss(state, 0, LossChannel(c.detector_efficiency));
  state = loss(state, 1, LossChannel(c.detector_efficiency));
  return state;
}

}  // namespace

void validate(const BenchConfig& c) {
  if (c.squeezer1_db < 0.0) throw std::domain_error("BenchConfig.squeezer1_db must be >= 0");
  if (c.squeezer2_db < 0.0) throw std::domain_error("BenchConfig.squeezer2_db must be >= 0");
  require_range(c.bs1_visibility, 0.0, 1.0, "bs1_visibility", /*lo_open=*/true);
  require_range(c.bs3_visibility, 0.0, 1.0, "bs3_visibility", /*lo_open=*/true);
  require_range(c.arm_loss_a, 0.0, 1.0, "arm_loss_a");
  require_range(c.arm_loss_b, 0.0, 1.0, "arm_loss_b");
  require_range(c.detector_efficiency, 0.0, 1.0, "detector_efficiency");
  require_range(c.bs2_reflectivity, 0.0, 1.0, "bs2_reflectivity", /*lo_open=*/true);
  if (!std::isfinite(c.lo_phase_1) || !std::isfinite(c.lo_phase_2)) {
    throw std::domain_error("BenchConfig.lo_phase must be finite");
  }
}

double visibility_to_efficiency(double v) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw std::domain_error("visibility must be in (0, 1], got " + std::to_string(v));
  }
  return v * v;
}

ReadoutModel build_bench(const BenchConfig& c) {
  validate(c);

  const QuadratureState base = propagate(c, 0.0, 0.0);
  validate_state(base);

  const Eigen::VectorXd e_u = readout_direction(0, c.lo_phase_1);
  const Eigen::VectorXd e_v = readout_direction(1, c.lo_phase_2);

  ReadoutModel model;
  model.noise_cov(0, 0) = e_u.dot(base.cov * e_u);
  model.noise_cov(1, 1) = e_v.dot(base.cov * e_v);
  model.noise_cov(0, 1) = e_u.dot(base.cov * e_v);
  model.noise_cov(1, 0) = model.noise_cov(0, 1);

  // Means are exactly linear in the injected displacement, so two unit
  // injections give the gain columns.
  const QuadratureState unit_x = propagate(c, 1.0, 0.0);
  const QuadratureState unit_y = propagate(c, 0.0, 1.0);
  model.gain(0, 0) = e_u.dot(unit_x.mean);
  model.gain(1, 0) = e_v.dot(unit_x.mean);
  model.gain(0, 1) = e_u.dot(unit_y.mean);
  model.gain(1, 1) = e_v.dot(unit_y.mean);
  return model;
}

Eigen::Matrix2d inferred_noise_cov(const ReadoutModel& model) {
  const double det = model.gain.determinant();
  if (std::abs(det) < 1e-12) {
    throw std::domain_error("ReadoutModel: singular gain matrix");
  }
  const Eigen::Matrix2d inv = model.gain.inverse();
  return inv * model.noise_cov * inv.transpose();
}

double predicted_uncertainty_product(const ReadoutModel& model) {
  const Eigen::Matrix2d inferred = inferred_noise_cov(model);
  return std::sqrt(inferred(0, 0) * inferred(1, 1));
}

}  // namespace phasetrack
