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

#ifndef PHASETRACK_GAUSSIAN_HPP
#define PHASETRACK_GAUSSIAN_HPP

#include <Eigen/Dense>

namespace phasetrack {

/// Gaussian states of N optical modes in the quadrature representation.
///
/// Conventions (used everywhere in this project):
///   - Quadrature ordering is per mode, (x1, y1, x2, y2, ...), so each mode
///     owns a contiguous 2x2 block of the covariance matrix.
///   - The vacuum state has unit variance in every quadrature (cov = I),
///     matching the commutator normalization [X, Y] = 2i. Squeezing in dB is
///     therefore 10*log10(V) relative to 1.
///   - Phase rotations are right-handed: phi = pi/2 maps a mean (a, b) to
///     (-b, a).
struct QuadratureState {
  Eigen::VectorXd mean;  // length 2N
  Eigen::MatrixXd cov;   // 2N x 2N, symmetric

  int n_modes() const { return static_cast<int>(mean.size()) / 2; }
};

enum class Quadrature { X, Y };
enum class CombineSign { Plus, Minus };

/// Power transmission efficiency of a vacuum-admixing loss channel.
struct LossChannel {
  double eta;

  explicit LossChannel(double eta_);
};

struct HomodyneMoments {
  double mean;
  double variance;
};

/// Ground state of n_modes modes: zero mean, identity covariance.
QuadratureState vacuum(int n_modes);

/// Single-mode squeezing of strength r >= 0 along direction theta.
/// For theta = 0 on vacuum the mode covariance becomes diag(e^{-2r}, e^{+2r});
/// theta = pi/2 swaps the squeezed and anti-squeezed quadratures.
QuadratureState squeeze(const QuadratureState& state, int mode, double r, double theta);

/// Two-mode mixing with power transmissivity T in [0, 1].
/// At phase = 0: out_i = sqrt(T) q_i - sqrt(1-T) q_j and
///               out_j = sqrt(1-T) q_i + sqrt(T) q_j.
/// The inverting splitter is the same T with phase offset by pi.
QuadratureState beamsplitter(const QuadratureState& state, int mode_i, int mode_j,
                             double transmissivity, double phase = 0.0);

/// Shift one mode's mean by (dx, dy); covariance unchanged.
QuadratureState displace(const QuadratureState& state, int mode, double dx, double dy);

/// Vacuum-admixing loss: V -> eta*V + (1-eta)*I on the mode block,
/// cross-covariances and mean scaled by sqrt(eta).
QuadratureState loss(const QuadratureState& state, int mode, LossChannel channel);

/// Right-handed phase-space rotation of one mode by phi.
QuadratureState phase_rotate(const QuadratureState& state, int mode, double phi);

/// First and second moments of X_theta = X cos(theta) + Y sin(theta).
HomodyneMoments homodyne_moments(const QuadratureState& state, int mode, double theta);

/// Var((q_i +/- q_j) / sqrt(2)) for q in {X, Y}.
double joint_quadrature_variance(const QuadratureState& state, int mode_i, int mode_j,
                                 Quadrature quadrature, CombineSign sign);

/// Block-diagonal standard symplectic form, per-mode block [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int n_modes);

/// True iff s * Omega * s^T = Omega within tol (largest absolute deviation).
bool is_symplectic(const Eigen::MatrixXd& s, double tol = 1e-10);

/// Symplectic eigenvalues of a covariance matrix (the |spectrum| of i*Omega*V,
/// one value per mode, ascending). Physical states have all values >= 1.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// Full physicality check: symmetric within 1e-10 (relative to the largest
/// element), all entries finite, all symplectic eigenvalues >= 1 - tol.
/// The tolerance covers double-precision accumulation over a bench-sized
/// chain of operations.
bool is_physical(const QuadratureState& state, double tol = 1e-9);

/// Throwing variant of is_physical with a diagnostic message.
void validate_state(const QuadratureState& state, double tol = 1e-9);

/// Apply a symplectic matrix to mean and covariance.
QuadratureState apply_symplectic(const QuadratureState& state, const Eigen::MatrixXd& s);

/// Squeeze parameter for a given output squeezing level in dB:
/// e^{-2r} = 10^{-db/10}, i.e. r = db * ln(10) / 20.
double squeeze_parameter_from_db(double db);

/// 2x2 right-handed rotation matrix.
Eigen::Matrix2d rotation2(double phi);

}  // namespace phasetrack

#endif
