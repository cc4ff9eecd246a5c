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

#ifndef PHASETRACK_TESTS_HELPERS_HPP
#define PHASETRACK_TESTS_HELPERS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "phasetrack/gaussian.hpp"
#include "phasetrack/rng.hpp"

namespace phasetrack::testing {

/// Monte-Carlo oracle: draw from the state's Gaussian (via Eigen's LLT, an
/// implementation path independent of joint_quadrature_variance) and return
/// the empirical variance of (q_i +/- q_j)/sqrt(2).
struct McVariance {
  double value;
  double standard_error;
};

inline McVariance mc_joint_variance(const QuadratureState& state, int mode_i, int mode_j,
                                    Quadrature quadrature, CombineSign sign, std::size_t draws,
                                    uint64_t seed) {
  const Eigen::MatrixXd chol = state.cov.llt().matrixL();
  const Eigen::Index dim = state.mean.size();
  GaussianStream stream(seed);

  const int offset = quadrature == Quadrature::X ? 0 : 1;
  const double s = sign == CombineSign::Plus ? 1.0 : -1.0;
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(dim);
  direction(2 * mode_i + offset) = 1.0 / std::sqrt(2.0);
  direction(2 * mode_j + offset) = s / std::sqrt(2.0);
  const Eigen::VectorXd weights = chol.transpose() * direction;
  const double mean_shift = direction.dot(state.mean);

  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd z(dim);
  for (std::size_t n = 0; n < draws; ++n) {
    for (Eigen::Index k = 0; k < dim; ++k) z(k) = stream.next();
    const double value = weights.dot(z) + mean_shift;
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / static_cast<double>(draws);
  const double variance = sum_sq / static_cast<double>(draws) - mean * mean;
  return McVariance{variance, variance * std::sqrt(2.0 / static_cast<double>(draws))};
}

/// Uniform helper for property-test generators.
class TestRng {
 public:
  explicit TestRng(uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return lo + gen_.uniform01() * (hi - lo); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen_.uniform01() * (hi - lo + 1));
  }

 private:
  Xoshiro256pp gen_;
};

/// Apply a random lossless-or-lossy op; returns the op's determinant effect
/// on the covariance (1 for symplectic ops, unknown for loss).
inline QuadratureState random_op(const QuadratureState& state, TestRng& rng, bool allow_loss,
                                 bool* was_loss = nullptr) {
  const int n = state.n_modes();
  const int choice = rng.uniform_int(0, allow_loss ? 4 : 3);
  if (was_loss != nullptr) *was_loss = false;
  switch (choice) {
    case 0:
      return squeeze(state, rng.uniform_int(0, n - 1), rng.uniform(0.0, 1.2),
                     rng.uniform(0.0, 6.28));
    case 1: {
      if (n < 2) return phase_rotate(state, 0, rng.uniform(0.0, 6.28));
      const int i = rng.uniform_int(0, n - 1);
      int j = rng.uniform_int(0, n - 2);
      if (j >= i) ++j;
      return beamsplitter(state, i, j, rng.uniform(0.0, 1.0), rng.uniform(0.0, 6.28));
    }
    case 2:
      return phase_rotate(state, rng.uniform_int(0, n - 1), rng.uniform(0.0, 6.28));
    case 3:
      return displace(state, rng.uniform_int(0, n - 1), rng.uniform(-5.0, 5.0),
                      rng.uniform(-5.0, 5.0));
    default:
      if (was_loss != nullptr) *was_loss = true;
      return loss(state, rng.uniform_int(0, n - 1), LossChannel(rng.uniform(0.0, 1.0)));
  }
}

}  // namespace phasetrack::testing

#endif
