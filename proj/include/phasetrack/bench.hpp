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

#ifndef PHASETRACK_BENCH_HPP
#define PHASETRACK_BENCH_HPP

#include <Eigen/Dense>

#include "phasetrack/gaussian.hpp"

namespace phasetrack {

/// Declarative description of the two-squeezer / dual-homodyne bench.
///
/// Two squeezed vacua interfere on a balanced splitter to form an EPR pair.
/// One beam is the measured system and picks up a displacement through a
/// high-reflectivity coupler; the other is the quantum reference. A second
/// balanced splitter recombines them and two homodyne detectors read the
/// difference and sum quadratures simultaneously.
struct BenchConfig {
  double squeezer1_db = 10.0;  // output squeezing of input 1, dB
  double squeezer2_db = 10.0;  // output squeezing of input 2, dB
  double bs1_visibility = 1.0;
  double bs3_visibility = 1.0;
  double arm_loss_a = 1.0;  // power efficiency of the signal arm
  double arm_loss_b = 1.0;  // power efficiency of the reference arm
  double detector_efficiency = 0.99;
  double bs2_reflectivity = 0.9999;  // displacement-injection coupler
  double lo_phase_1 = 0.0;
  double lo_phase_2 = 1.5707963267948966;  // pi/2
  bool entanglement_on = true;
};

/// Throws std::domain_error naming the offending field.
void validate(const BenchConfig& config);

/// The bench compiled down to a linear readout: mean displacement (x, y)
/// maps to detector means through `gain`, and the detector pair carries
/// Gaussian noise with covariance `noise_cov` (vacuum-normalized; identity
/// when the entanglement source is off).
struct ReadoutModel {
  Eigen::Matrix2d gain;
  Eigen::Matrix2d noise_cov;
};

/// Compile a BenchConfig into a ReadoutModel by propagating a two-mode
/// Gaussian state through the full symplectic chain.
/// Ideal lossless settings give gain = I/sqrt(2) and noise_cov = e^{-2r} I.
ReadoutModel build_bench(const BenchConfig& config);

/// Mode-overlap efficiency for an interference visibility v: eta = v^2,
/// applied as a loss channel on each interfering beam at that splitter.
double visibility_to_efficiency(double v);

/// Product of the standard deviations of the inferred observables
/// (detector readings mapped back through the gain). 2.0 for the
/// no-entanglement bench, 0.2 for the ideal 10 dB bench.
double predicted_uncertainty_product(const ReadoutModel& model);

/// Covariance of gain^{-1} (u, v): the noise seen by the inferred observables.
Eigen::Matrix2d inferred_noise_cov(const ReadoutModel& model);

}  // namespace phasetrack

#endif
