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

#include "phasetrack/signal.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "phasetrack/dsp.hpp"
#include "phasetrack/rng.hpp"

namespace phasetrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kInterpHalf = 8;  // noise samples of kernel support per side

struct Chol2 {
  double l00, l10, l11;
};

Chol2 cholesky2(const Eigen::Matrix2d& cov) {
  const double a = cov(0, 0), b = cov(1, 1), c = cov(0, 1);
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("noise covariance must be positive definite");
  }
  const double l00 = std::sqrt(a);
  const double l10 = c / l00;
  const double rest = b - l10 * l10;
  if (!(rest > 0.0)) {
    throw std::domain_error("noise covariance must be positive definite");
  }
  return Chol2{l00, l10, std::sqrt(rest)};
}

/// Gaussian noise stream chunk-seeded from (seed, tag): sample j belongs to
/// chunk j / chunk_size and consumes `lanes` draws at a fixed in-chunk
/// offset, so any subrange can be regenerated independently.
class ChunkedNoise {
 public:
  ChunkedNoise(uint64_t seed, std::string_view tag, std::size_t chunk_size, int lanes)
      : seed_(seed), tag_(tag), chunk_size_(chunk_size), lanes_(lanes) {}

  void fill(std::size_t j, double* out) {
    const std::size_t chunk = j / chunk_size_;
    if (chunk != current_chunk_ || !stream_) {
      stream_.emplace(derive_seed(seed_, tag_, chunk));
      current_chunk_ = chunk;
      cursor_ = 0;
    }
    const std::size_t target = (j % chunk_size_) * static_cast<std::size_t>(lanes_);
    if (cursor_ > target) {
      stream_.emplace(derive_seed(seed_, tag_, chunk));
      cursor_ = 0;
    }
    for (; cursor_ < target; ++cursor_) (void)stream_->next();
    for (int lane = 0; lane < lanes_; ++lane, ++cursor_) out[lane] = stream_->next();
  }

 private:
  uint64_t seed_;
  std::string tag_;
  std::size_t chunk_size_;
  int lanes_;
  std::optional<GaussianStream> stream_;
  std::size_t current_chunk_ = static_cast<std::size_t>(-1);
  std::size_t cursor_ = 0;
};

/// Polyphase windowed-sinc interpolation table, upsampling by `factor`.
/// Each phase is normalized to unit DC sum (partition of unity), which makes
/// the analysis band spectrally exact: slow components pass with gain 1, so
/// the lowpassed variance of interpolated white noise is exactly
/// per-sample-variance * filter-ENBW / noise-rate. Phase 0 reduces to a
/// pass-through.
class InterpTable {
 public:
  explicit InterpTable(int factor) : factor_(factor), taps_(factor) {
    for (int p = 0; p < factor; ++p) {
      const double frac = static_cast<double>(p) / factor;
      double sum = 0.0;
      for (int k = 0; k < 2 * kInterpHalf; ++k) {
        const double s = static_cast<double>(k - (kInterpHalf - 1)) - frac;
        const double window = 0.54 + 0.46 * std::cos(std::numbers::pi * s / kInterpHalf);
        const double value = window * sinc(s);
        taps_[p][static_cast<std::size_t>(k)] = value;
        sum += value;
      }
      const double inv_sum = 1.0 / sum;
      for (auto& value : taps_[p]) value *= inv_sum;
    }
  }

  /// Interpolated value at output index n given the padded noise array
  /// (pad = kInterpHalf leading samples).
  double at(const std::vector<double>& padded, std::size_t n) const {
    const std::size_t j0 = n / static_cast<std::size_t>(factor_);
    const int p = static_cast<int>(n % static_cast<std::size_t>(factor_));
    const double* x = padded.data() + j0 + 1;  // aligns k=kInterpHalf-1 with x[j0]
    const auto& h = taps_[p];
    double acc = 0.0;
    for (int k = 0; k < 2 * kInterpHalf; ++k) acc += h[static_cast<std::size_t>(k)] * x[k];
    return acc;
  }

 private:
  static double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
  }

  int factor_;
  std::vector<std::array<double, 2 * kInterpHalf>> taps_;
};

}  // namespace

std::vector<SampleRecord> simulate_baseband(const ReadoutModel& model,
                                            const TrajectorySpec& spec, double dt,
                                            uint64_t seed) {
  if (!(dt > 0.0)) throw std::domain_error("simulate_baseband: dt must be > 0");
  const TrajectorySampler sampler(spec);
  const Chol2 chol = cholesky2(model.noise_cov);

  const auto n_records = static_cast<std::size_t>(std::floor(spec.duration / dt + 1e-9)) + 1;
  std::vector<SampleRecord> records(n_records);

  constexpr std::size_t kChunk = 65536;
  ChunkedNoise noise(seed, "baseband", kChunk, 2);
  double z[2];
  for (std::size_t i = 0; i < n_records; ++i) {
    const double t = static_cast<double>(i) * dt;
    const MeanPoint mean = sampler.at_clamped(t);
    const double mu = model.gain(0, 0) * mean.x + model.gain(0, 1) * mean.y;
    const double mv = model.gain(1, 0) * mean.x + model.gain(1, 1) * mean.y;
    noise.fill(i, z);
    records[i].t = t;
    records[i].u = mu + chol.l00 * z[0];
    records[i].v = mv + chol.l10 * z[0] + chol.l11 * z[1];
  }
  return records;
}

RfTrace synthesize_rf(const ReadoutModel& model, const TrajectorySpec& spec, double duration,
                      uint64_t seed, const RfSynthOptions& options) {
  if (!(duration > 0.0)) throw std::domain_error("synthesize_rf: duration must be > 0");
  if (duration > spec.duration + 1e-12) {
    throw std::domain_error("synthesize_rf: duration exceeds trajectory duration");
  }
  if (!(options.sample_rate > 2.0 * options.carrier_f)) {
    throw std::domain_error("synthesize_rf: sample_rate must exceed 2 * carrier_f");
  }
  const double rate_ratio = options.sample_rate / options.noise_oversample_rate;
  const int factor = static_cast<int>(std::lround(rate_ratio));
  if (factor < 2 || std::abs(rate_ratio - factor) > 1e-9) {
    throw std::domain_error("synthesize_rf: noise_oversample_rate must divide sample_rate");
  }
  // The baseband noise spectrum must fit between DC and the carrier image.
  if (!(options.noise_oversample_rate / 2.0 < options.carrier_f)) {
    throw std::domain_error("synthesize_rf: noise_oversample_rate/2 must stay below the carrier");
  }
  if (!(options.carrier_f + options.noise_oversample_rate / 2.0 < options.sample_rate / 2.0)) {
    throw std::domain_error("synthesize_rf: carrier + noise band must stay below Nyquist");
  }
  if (options.guard < 0.0) throw std::domain_error("synthesize_rf: guard must be >= 0");
  if (options.chunk_size == 0) throw std::domain_error("synthesize_rf: chunk_size must be > 0");

  const TrajectorySampler sampler(spec);

  RfTrace trace;
  trace.sample_rate = options.sample_rate;
  trace.carrier_f = options.carrier_f;
  trace.t0 = -options.guard;
  trace.duration = duration;

  const auto n_total =
      static_cast<std::size_t>(std::llround((duration + 2.0 * options.guard) * options.sample_rate)) + 1;
  trace.bhd1.resize(n_total);
  trace.bhd2.resize(n_total);

  // Baseband noise in vacuum-normalized units: per-sample variance chosen so
  // the default demodulation FIR integrates it back to noise_cov.
  std::vector<double> ni1, ni2, nq1, nq2;
  if (options.inject_noise) {
    const auto default_taps = design_lowpass_taps(FirSpec{}, options.sample_rate);
    const double enbw_hz = fir_noise_bandwidth_hz(default_taps, options.sample_rate);
    const Eigen::Matrix2d base_cov =
        model.noise_cov * (options.noise_oversample_rate / enbw_hz);
    const Chol2 chol = cholesky2(base_cov);

    const std::size_t n_noise = (n_total - 1) / static_cast<std::size_t>(factor) + 1;
    const std::size_t padded = n_noise + 2 * kInterpHalf;
    ni1.resize(padded);
    ni2.resize(padded);
    nq1.resize(padded);
    nq2.resize(padded);
    ChunkedNoise noise(seed, "rf.noise", options.chunk_size, 4);
    double z[4];
    for (std::size_t j = 0; j < padded; ++j) {
      noise.fill(j, z);
      ni1[j] = chol.l00 * z[0];
      ni2[j] = chol.l10 * z[0] + chol.l11 * z[1];
      nq1[j] = chol.l00 * z[2];
      nq2[j] = chol.l10 * z[2] + chol.l11 * z[3];
    }
  }
  const InterpTable interp(factor);

  const bool constant_mean = sampler.is_constant();
  MeanPoint mean = constant_mean ? sampler.at_clamped(0.0) : MeanPoint{0.0, 0.0};
  double mu = model.gain(0, 0) * mean.x + model.gain(0, 1) * mean.y;
  double mv = model.gain(1, 0) * mean.x + model.gain(1, 1) * mean.y;

  for (std::size_t n = 0; n < n_total; ++n) {
    const double t = trace.t0 + static_cast<double>(n) / options.sample_rate;
    if (!constant_mean) {
      mean = sampler.at_clamped(t);
      mu = model.gain(0, 0) * mean.x + model.gain(0, 1) * mean.y;
      mv = model.gain(1, 0) * mean.x + model.gain(1, 1) * mean.y;
    }
    const double angle = kTwoPi * options.carrier_f * t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    if (options.inject_noise) {
      trace.bhd1[n] = (mu + interp.at(ni1, n)) * c + interp.at(nq1, n) * s;
      trace.bhd2[n] = (mv + interp.at(ni2, n)) * c + interp.at(nq2, n) * s;
    } else {
      trace.bhd1[n] = mu * c;
      trace.bhd2[n] = mv * c;
    }
  }

  if (options.broadband_floor && options.broadband_sigma > 0.0) {
    ChunkedNoise floor_noise(seed, "rf.floor", options.chunk_size, 2);
    double z[2];
    for (std::size_t n = 0; n < n_total; ++n) {
      floor_noise.fill(n, z);
      trace.bhd1[n] += options.broadband_sigma * z[0];
      trace.bhd2[n] += options.broadband_sigma * z[1];
    }
  }
  return trace;
}

}  // namespace phasetrack
