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

#ifndef PHASETRACK_DSP_HPP
#define PHASETRACK_DSP_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "phasetrack/records.hpp"

namespace phasetrack {

/// Windowed-sinc (Hamming) lowpass design. The tap count is derived from the
/// transition width at the rate of the stream it is applied to, kept odd so
/// the group delay is an integer sample count.
struct FirSpec {
  double cutoff_hz = 1e4;      // -6 dB point
  double transition_hz = 5e3;  // passband edge to stopband edge
};

int fir_tap_count(const FirSpec& spec, double sample_rate);

/// Taps normalized to unit DC gain.
std::vector<double> design_lowpass_taps(const FirSpec& spec, double sample_rate);

/// Magnitude response in dB at one frequency (0 dB = unity).
double fir_response_db(const FirSpec& spec, double freq_hz, double sample_rate = 2e8);
double fir_response_db(const std::vector<double>& taps, double freq_hz, double sample_rate);

/// Equivalent noise bandwidth in Hz of a DC-normalized kernel:
/// integral of |H(f)|^2 over the full band, equal to sample_rate * sum(h^2).
double fir_noise_bandwidth_hz(const std::vector<double>& taps, double sample_rate);

/// Worst passband ripple (dB, up to cutoff - transition) and stopband floor
/// (dB, from cutoff + transition), probed on a frequency grid.
struct FirReport {
  double passband_ripple_db;
  double stopband_db;
};
FirReport fir_design_report(const FirSpec& spec, double sample_rate);

/// Variance-estimator inflation from record-to-record noise correlation:
/// sum over output lags k of rho(k)^2, where rho is the normalized
/// autocorrelation of the FIR kernel sampled at the decimation stride.
/// 1 for independent records; about 5 for the default 10 kHz filter read
/// out every 10 us. The 1-sigma relative error of a variance estimate over
/// n records is sqrt(2 * factor / n).
double record_correlation_factor(const FirSpec& spec, double sample_rate, double out_dt);

void write_fir_taps_csv(const std::vector<double>& taps, const std::string& path);

/// Anti-alias lowpass emulating the analogue front-end filter, applied
/// per channel as a centered linear-phase FIR (zero-padded edges, no net
/// delay). Default corner 50 MHz.
RfTrace antialias(const RfTrace& trace, double corner_hz = 5e7, int taps = 63);

/// Same filter applied channel-at-a-time into the existing buffers; the
/// scenario pipeline uses this to keep long traces to one extra channel of
/// scratch memory.
void antialias_in_place(RfTrace& trace, double corner_hz = 5e7, int taps = 63);

/// Digital lock-in demodulation: multiply each channel by
/// 2*cos(2*pi*f*t + phase), lowpass with the FIR, and pick output samples on
/// the out_dt grid (t = k*out_dt). The symmetric kernel evaluation at each
/// picked instant compensates the filter group delay, so records align with
/// trajectory time. Records whose kernel window would overrun the trace are
/// dropped, which is what the synthesis guard interval exists to prevent.
/// A pure tone a*cos(2*pi*f*t) demodulates to the constant a.
std::vector<SampleRecord> demodulate(const RfTrace& trace, double f_hz, double phase,
                                     const FirSpec& fir, double out_dt = 1e-5);

/// Multiplicative variance scales mapping raw demodulated variance to
/// vacuum-normalized units (records scale by sqrt of these).
struct CalibrationScale {
  double scale_u = 1.0;
  double scale_v = 1.0;
};

/// Shot-noise calibration from an entanglement-off, zero-displacement run:
/// the returned scales make the calibration data's variance exactly 1
/// (known-zero-mean estimator). Throws if fewer than min_records records or
/// zero variance.
CalibrationScale calibrate(const std::vector<SampleRecord>& vacuum_records,
                           std::size_t min_records = 2600);

std::vector<SampleRecord> apply_calibration(std::vector<SampleRecord> records,
                                            const CalibrationScale& scale);

}  // namespace phasetrack

#endif
