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

#ifndef PHASETRACK_SIGNAL_HPP
#define PHASETRACK_SIGNAL_HPP

#include <cstdint>
#include <vector>

#include "phasetrack/bench.hpp"
#include "phasetrack/records.hpp"
#include "phasetrack/trajectory.hpp"

namespace phasetrack {

/// Fast tier: draw measurement pairs directly from the readout model's
/// bivariate Gaussian, mean = gain * (x(t), y(t)), covariance = noise_cov.
/// Records land on t = i*dt for i = 0 .. floor(duration/dt). This is the
/// statistical oracle the RF tier is validated against.
std::vector<SampleRecord> simulate_baseband(const ReadoutModel& model,
                                            const TrajectorySpec& spec, double dt,
                                            uint64_t seed);

struct RfSynthOptions {
  double sample_rate = 2e8;            // Hz
  double carrier_f = 5e6;              // Hz
  double noise_oversample_rate = 1e6;  // Hz; must divide sample_rate
  bool broadband_floor = false;        // add white full-rate noise
  double broadband_sigma = 1.0;        // per-sample std of the floor
  double guard = 4e-4;                 // seconds of trace padding per side
  bool inject_noise = true;            // test hook: false = noiseless signal
  std::size_t chunk_size = 65536;      // noise samples per seeding chunk
};

/// Faithful tier: two-channel photocurrent synthesis around the carrier,
///   i(t) = [gain*(x,y) + n_I(t)] * cos(2 pi f t) + n_Q(t) * sin(2 pi f t),
/// so that lock-in demodulation (multiply by 2 cos, lowpass) recovers
/// gain*(x, y) plus baseband noise whose filtered variance equals the
/// model's noise_cov when analyzed with the default FIR.
///
/// The in-phase/quadrature noise pairs are white Gaussian processes sampled
/// at noise_oversample_rate, jointly drawn across channels with the
/// noise_cov correlation (the quadrature component carries the same in-band
/// variance as the in-phase one; the readout model does not resolve the
/// conjugate quadrature, and the demodulator rejects it). They are
/// interpolated to the trace rate with an l2-normalized polyphase
/// windowed-sinc kernel, which keeps per-sample variance exact and the
/// analysis band flat.
///
/// The trace is padded by `guard` seconds on both sides (trajectory clamped
/// to its endpoints) so demodulation can emit records over all of
/// [0, duration] despite the FIR group delay. Noise is seeded per chunk, so
/// the output is reproducible independent of evaluation order.
RfTrace synthesize_rf(const ReadoutModel& model, const TrajectorySpec& spec, double duration,
                      uint64_t seed, const RfSynthOptions& options = {});

}  // namespace phasetrack

#endif
