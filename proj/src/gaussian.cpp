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

#include "phasetrack/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasetrack {

namespace {

void check_mode(const QuadratureState& state, int mode, const char* op) {
  if (mode < 0 || mode >= state.n_modes()) {
    throw std::out_of_range(std::string(op) + ": mode index " + std::to_string(mode) +
                            " out of range for " + std::to_string(state.n_modes()) + " modes");
  }
}

// Embed a 2x2 block acting on `mode` into the full-size identity.
Eigen::MatrixXd embed_single(const QuadratureState& state, int mode, const Eigen::Matrix2d& block) {
  const Eigen::Index dim = state.mean.size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  s.block<2, 2>(2 * mode, 2 * mode) = block;
  return s;
}

}  // namespace

LossChannel::LossChannel(double eta_) : eta(eta_) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("LossChannel: efficiency must be in [0, 1], got " +
                            std::to_string(eta_));
  }
}

QuadratureState vacuum(int n_modes) {
  if (n_modes < 1) {
    throw std::domain_error("vacuum: n_modes must be >= 1");
  }
  QuadratureState state;
  state.mean = Eigen::VectorXd::Zero(2 * n_modes);
  state.cov = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  return state;
}

Eigen::Matrix2d rotation2(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

QuadratureState squeeze(const QuadratureState& state, int mode, double r, double theta) {
  check_mode(state, mode, "squeeze");
  if (r < 0.0) {
    throw std::domain_error("squeeze: r must be >= 0 (rotate theta to change direction)");
  }
  Eigen::Matrix2d core;
  core << std::exp(-r), 0.0, 0.0, std::exp(r);
  const Eigen::Matrix2d block = rotation2(theta) * core * rotation2(-theta);
  return apply_symplectic(state, embed_single(state, mode, block));
}

QuadratureState beamsplitter(const QuadratureState& state, int mode_i, int mode_j,
                             double transmissivity, double phase) {
  check_mode(state, mode_i, "beamsplitter");
  check_mode(state, mode_j, "beamsplitter");
  if (mode_i == mode_j) {
    throw std::domain_error("beamsplitter: modes must be distinct");
  }
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::domain_error("beamsplitter: transmissivity must be in [0, 1]");
  }
  const double t = std::sqrt(transmissivity);
  const double s = std::sqrt(1.0 - transmissivity);
  const Eigen::Index dim = state.mean.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
  m.block<2, 2>(2 * mode_i, 2 * mode_i) = t * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2 * mode_j, 2 * mode_j) = t * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2 * mode_i, 2 * mode_j) = -s * rotation2(-phase);
  m.block<2, 2>(2 * mode_j, 2 * mode_i) = s * rotation2(phase);
  return apply_symplectic(state, m);
}

QuadratureState displace(const QuadratureState& state, int mode, double dx, double dy) {
  check_mode(state, mode, "displace");
  QuadratureState out = state;
  out.mean(2 * mode) += dx;
  out.mean(2 * mode + 1) += dy;
  return out;
}

QuadratureState loss(const QuadratureState& state, int mode, LossChannel channel) {
  check_mode(state, mode, "loss");
  const double root_eta = std::sqrt(channel.eta);
  const Eigen::Index dim = state.mean.size();

  QuadratureState out = state;
  // Scale the mode's rows/columns by sqrt(eta), then refill the diagonal
  // block with the vacuum admixture. Cross-covariances with other modes decay
  // by sqrt(eta), the same map as interfering with vacuum on a splitter of
  // transmissivity eta and discarding the other port.
  out.mean.segment<2>(2 * mode) *= root_eta;
  out.cov.block(2 * mode, 0, 2, dim) *= root_eta;
  out.cov.block(0, 2 * mode, dim, 2) *= root_eta;
  out.cov.block<2, 2>(2 * mode, 2 * mode) +=
      (1.0 - channel.eta) * Eigen::Matrix2d::Identity();
  return out;
}

QuadratureState phase_rotate(const QuadratureState& state, int mode, double phi) {
  check_mode(state, mode, "phase_rotate");
  return apply_symplectic(state, embed_single(state, mode, rotation2(phi)));
}

HomodyneMoments homodyne_moments(const QuadratureState& state, int mode, double theta) {
  check_mode(state, mode, "homodyne_moments");
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(state.mean.size());
  direction(2 * mode) = std::cos(theta);
  direction(2 * mode + 1) = std::sin(theta);
  return HomodyneMoments{direction.dot(state.mean),
                         direction.dot(state.cov * direction)};
}

double joint_quadrature_variance(const QuadratureState& state, int mode_i, int mode_j,
                                 Quadrature quadrature, CombineSign sign) {
  check_mode(state, mode_i, "joint_quadrature_variance");
  check_mode(state, mode_j, "joint_quadrature_variance");
  if (mode_i == mode_j) {
    throw std::domain_error("joint_quadrature_variance: modes must be distinct");
  }
  const int offset = quadrature == Quadrature::X ? 0 : 1;
  const double s = sign == CombineSign::Plus ? 1.0 : -1.0;
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(state.mean.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  direction(2 * mode_i + offset) = inv_sqrt2;
  direction(2 * mode_j + offset) = s * inv_sqrt2;
  return direction.dot(state.cov * direction);
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

bool is_symplectic(const Eigen::MatrixXd& s, double tol) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return false;
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(s.rows()) / 2);
  return ((s * omega * s.transpose() - omega).cwiseAbs().maxCoeff()) <= tol;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance must be 2N x 2N");
  }
  const int n = static_cast<int>(cov.rows()) / 2;
  // The |spectrum| of i*Omega*V: with V = L L^T, Omega*V is similar to the
  // antisymmetric K = L^T Omega L, whose singular values are the symplectic
  // eigenvalues, each twice. The SVD route is robust where a nonsymmetric
  // eigensolver struggles (near-degenerate spectra on the imaginary axis).
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error(
        "symplectic_eigenvalues: covariance not positive definite (unphysical)");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd k = l.transpose() * symplectic_form(n) * l;
  const Eigen::VectorXd singular = Eigen::JacobiSVD<Eigen::MatrixXd>(k).singularValues();
  Eigen::VectorXd result(n);
  for (int j = 0; j < n; ++j) {
    // Singular values are descending; pair them and report ascending.
    result(j) = 0.5 * (singular(2 * (n - 1 - j)) + singular(2 * (n - 1 - j) + 1));
  }
  return result;
}

bool is_physical(const QuadratureState& state, double tol) {
  if (state.mean.size() != state.cov.rows() || state.cov.rows() != state.cov.cols()) {
    return false;
  }
  if (!state.mean.allFinite() || !state.cov.allFinite()) return false;
  const double scale = std::max(state.cov.cwiseAbs().maxCoeff(), 1.0);
  if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    return false;
  }
  try {
    return symplectic_eigenvalues(state.cov).minCoeff() >= 1.0 - tol;
  } catch (const std::domain_error&) {
    return false;  // not positive definite
  }
}

void validate_state(const QuadratureState& state, double tol) {
  if (state.mean.size() != state.cov.rows() || state.cov.rows() != state.cov.cols() ||
      state.mean.size() % 2 != 0) {
    throw std::invalid_argument("QuadratureState: inconsistent dimensions");
  }
  if (!state.mean.allFinite() || !state.cov.allFinite()) {
    throw std::domain_error("QuadratureState: non-finite entries");
  }
  const double scale = std::max(state.cov.cwiseAbs().maxCoeff(), 1.0);
  if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::domain_error("QuadratureState: covariance not symmetric");
  }
  double min_nu = 0.0;
  try {
    min_nu = symplectic_eigenvalues(state.cov).minCoeff();
  } catch (const std::domain_error&) {
    throw std::domain_error("QuadratureState: covariance not positive definite");
  }
  if (min_nu < 1.0 - tol) {
    throw std::domain_error("QuadratureState: unphysical covariance, min symplectic eigenvalue " +
                            std::to_string(min_nu));
  }
}

QuadratureState apply_symplectic(const QuadratureState& state, const Eigen::MatrixXd& s) {
  if (s.rows() != state.mean.size() || s.cols() != state.mean.size()) {
    throw std::invalid_argument("apply_symplectic: dimension mismatch");
  }
  QuadratureState out;
  out.mean = s * state.mean;
  out.cov = s * state.cov * s.transpose();
  // Enforce exact symmetry lost to rounding.
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

double squeeze_parameter_from_db(double db) {
  if (db < 0.0) {
    throw std::domain_error("squeeze_parameter_from_db: dB must be >= 0");
  }
  return db * std::numbers::ln10 / 20.0;
}

}  // namespace phasetrack
