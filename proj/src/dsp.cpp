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

#include "phasetrack/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasetrack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Hamming main-lobe factor: taps ~ 3.3 / normalized transition width.
constexpr double kHammingTransitionFactor = 3.3;
constexpr int kMaxTaps = 4'000'001;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

std::vector<double> windowed_sinc(double cutoff_hz, int taps, double sample_rate) {
  const double fc = cutoff_hz / sample_rate;  // cycles per sample
  const int half = (taps - 1) / 2;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (int k = 0; k < taps; ++k) {
    const double window = 0.54 - 0.46 * std::cos(kTwoPi * k / (taps - 1));
    h[k] = window * 2.0 * fc * sinc(2.0 * fc * (k - half));
    sum += h[k];
  }
  for (double& tap : h) tap /= sum;
  return h;
}

void check_fir(const FirSpec& spec, double sample_rate) {
  if (!(spec.cutoff_hz > 0.0)) throw std::domain_error("FirSpec.cutoff must be > 0");
  if (!(spec.transition_hz > 0.0)) throw std::domain_error("FirSpec.transition must be > 0");
  if (!(sample_rate > 0.0)) throw std::domain_error("FIR design: sample rate must be > 0");
  if (spec.cutoff_hz + spec.transition_hz >= sample_rate / 2.0) {
    throw std::domain_error("FirSpec: cutoff + transition must stay below Nyquist");
  }
}

double known_mean_variance(const std::vector<SampleRecord>& records, bool second) {
  // Neumaier-compensated sum of squares about the known zero mean.
  double sum = 0.0, comp = 0.0;
  for (const auto& record : records) {
    const double value = second ? record.v : record.u;
    const double sq = value * value;
    const double t = sum + sq;
    comp += std::abs(sum) >= std::abs(sq) ? (sum - t) + sq : (sq - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(records.size());
}

}  // namespace

int fir_tap_count(const FirSpec& spec, double sample_rate) {
  check_fir(spec, sample_rate);
  const double normalized = spec.transition_hz / sample_rate;
  int taps = static_cast<int>(std::ceil(kHammingTransitionFactor / normalized));
  if (taps % 2 == 0) ++taps;
  taps = std::max(taps, 5);
  if (taps > kMaxTaps) {
    throw std::domain_error("FirSpec: transition width implies more than " +
                            std::to_string(kMaxTaps) + " taps at this rate");
  }
  return taps;
}

std::vector<double> design_lowpass_taps(const FirSpec& spec, double sample_rate) {
  return windowed_sinc(spec.cutoff_hz, fir_tap_count(spec, sample_rate), sample_rate);
}

double fir_response_db(const std::vector<double>& taps, double freq_hz, double sample_rate) {
  if (freq_hz < 0.0) throw std::domain_error("fir_response: frequency must be >= 0");
  const double omega = kTwoPi * freq_hz / sample_rate;
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    re += taps[k] * std::cos(omega * static_cast<double>(k));
    im -= taps[k] * std::sin(omega * static_cast<double>(k));
  }
  return 20.0 * std::log10(std::max(std::hypot(re, im), 1e-300));
}

double fir_response_db(const FirSpec& spec, double freq_hz, double sample_rate) {
  return fir_response_db(design_lowpass_taps(spec, sample_rate), freq_hz, sample_rate);
}

double fir_noise_bandwidth_hz(const std::vector<double>& taps, double sample_rate) {
  double sum_sq = 0.0;
  for (double tap : taps) sum_sq += tap * tap;
  return sample_rate * sum_sq;
}

FirReport fir_design_report(const FirSpec& spec, double sample_rate) {
  const auto taps = design_lowpass_taps(spec, sample_rate);
  const double passband_edge = spec.cutoff_hz - spec.transition_hz;
  const double stopband_edge = spec.cutoff_hz + spec.transition_hz;
  FirReport report{0.0, -400.0};
  for (int i = 0; i <= 200; ++i) {
    const double f = passband_edge * i / 200.0;
    report.passband_ripple_db =
        std::max(report.passband_ripple_db, std::abs(fir_response_db(taps, f, sample_rate)));
  }
  for (int i = 0; i <= 200; ++i) {
    const double f = stopband_edge + (sample_rate / 2.0 - stopband_edge) * i / 200.0;
    report.stopband_db = std::max(report.stopband_db, fir_response_db(taps, f, sample_rate));
  }
  return report;
}

double record_correlation_factor(const FirSpec& spec, double sample_rate, double out_dt) {
  const auto taps = design_lowpass_taps(spec, sample_rate);
  const auto stride = static_cast<std::size_t>(std::llround(out_dt * sample_rate));
  if (stride == 0) throw std::domain_error("record_correlation_factor: out_dt below one sample");
  double norm = 0.0;
  for (double tap : taps) norm += tap * tap;
  double factor = 1.0;
  for (std::size_t lag = stride; lag < taps.size(); lag += stride) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < taps.size(); ++i) acc += taps[i] * taps[i + lag];
    const double rho = acc / norm;
    factor += 2.0 * rho * rho;
  }
  return factor;
}

void write_fir_taps_csv(const std::vector<double>& taps, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "index,coefficient\n";
  char line[64];
  for (std::size_t k = 0; k < taps.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.17g\n", k, taps[k]);
    out << line;
  }
}

void antialias_in_place(RfTrace& trace, double corner_hz, int taps) {
  validate(trace);
  if (!(corner_hz > 0.0) || corner_hz >= trace.sample_rate / 2.0) {
    throw std::domain_error("antialias: corner must be in (0, sample_rate/2)");
  }
  if (taps < 3 || taps % 2 == 0) {
    throw std::domain_error("antialias: taps must be odd and >= 3");
  }
  const auto h = windowed_sinc(corner_hz, taps, trace.sample_rate);
  const int half = (taps - 1) / 2;

  const auto filter = [&](std::vector<double>& channel) {
    const std::vector<double> in(channel);  // one channel of scratch
    const long n = static_cast<long>(in.size());
    for (long i = 0; i < n; ++i) {
      double acc = 0.0;
      const long lo = std::max(-static_cast<long>(half), -i);
      const long hi = std::min(static_cast<long>(half), n - 1 - i);
      for (long m = lo; m <= hi; ++m) {
        acc += h[static_cast<std::size_t>(m + half)] * in[static_cast<std::size_t>(i + m)];
      }
      channel[static_cast<std::size_t>(i)] = acc;
    }
  };
  filter(trace.bhd1);
  filter(trace.bhd2);
}

RfTrace antialias(const RfTrace& trace, double corner_hz, int taps) {
  RfTrace out = trace;
  antialias_in_place(out, corner_hz, taps);
  return out;
}

std::vector<SampleRecord> demodulate(const RfTrace& trace, double f_hz, double phase,
                                     const FirSpec& fir, double out_dt) {
  validate(trace);
  if (!(f_hz > 0.0) || f_hz >= trace.sample_rate / 2.0) {
    throw std::domain_error("demodulate: carrier must be in (0, sample_rate/2)");
  }
  if (!(out_dt > 0.0) || out_dt < 1.0 / trace.sample_rate) {
    throw std::domain_error("demodulate: out_dt must be >= one input sample");
  }
  // Output grid must satisfy Nyquist for the filtered baseband.
  if (out_dt > 1.0 / (2.0 * fir.cutoff_hz)) {
    throw std::domain_error("demodulate: out_dt too coarse for the FIR cutoff (needs 1/out_dt >= 2*cutoff)");
  }
  const auto taps = design_lowpass_taps(fir, trace.sample_rate);
  const long half = (static_cast<long>(taps.size()) - 1) / 2;
  const long n = static_cast<long>(trace.bhd1.size());

  std::vector<SampleRecord> records;
  if (n < static_cast<long>(taps.size())) return records;

  // Mix down once per channel, reusing one buffer at a time.
  std::vector<double> mixed(static_cast<std::size_t>(n));
  const auto mix = [&](const std::vector<double>& in) {
    for (long i = 0; i < n; ++i) {
      const double t = trace.t0 + static_cast<double>(i) / trace.sample_rate;
      mixed[static_cast<std::size_t>(i)] =
          in[static_cast<std::size_t>(i)] * 2.0 * std::cos(kTwoPi * f_hz * t + phase);
    }
  };

  const auto kernel_at = [&](long center) {
    double acc = 0.0;
    const double* x = mixed.data() + (center - half);
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * x[k];
    return acc;
  };

  // Output instants t = k*out_dt whose symmetric kernel window fits.
  long k_first = static_cast<long>(std::ceil((trace.t0 + static_cast<double>(half) / trace.sample_rate) / out_dt - 1e-9));
  k_first = std::max<long>(k_first, 0);
  std::vector<long> centers;
  std::vector<double> times;
  for (long k = k_first;; ++k) {
    const double t = static_cast<double>(k) * out_dt;
    if (t > trace.duration + 1e-12) break;
    const long center = std::lround((t - trace.t0) * trace.sample_rate);
    if (center + half > n - 1) break;
    if (center - half < 0) continue;
    centers.push_back(center);
    times.push_back(t);
  }

  records.resize(centers.size());
  mix(trace.bhd1);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    records[i].t = times[i];
    records[i].u = kernel_at(centers[i]);
  }
  mix(trace.bhd2);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    records[i].v = kernel_at(centers[i]);
  }
  return records;
}

CalibrationScale calibrate(const std::vector<SampleRecord>& vacuum_records,
                           std::size_t min_records) {
  if (vacuum_records.size() < min_records) {
    throw std::invalid_argument("calibrate: need at least " + std::to_string(min_records) +
                                " records, got " + std::to_string(vacuum_records.size()));
  }
  const double var_u = known_mean_variance(vacuum_records, false);
  const double var_v = known_mean_variance(vacuum_records, true);
  if (!(var_u > 0.0) || !(var_v > 0.0)) {
    throw std::domain_error("calibrate: zero variance input");
  }
  return CalibrationScale{1.0 / var_u, 1.0 / var_v};
}

std::vector<SampleRecord> apply_calibration(std::vector<SampleRecord> records,
                                            const CalibrationScale& scale) {
  if (!(scale.scale_u > 0.0) || !(scale.scale_v > 0.0)) {
    throw std::domain_error("CalibrationScale: scales must be > 0");
  }
  const double su = std::sqrt(scale.scale_u);
  const double sv = std::sqrt(scale.scale_v);
  for (auto& record : records) {
    record.u *= su;
    record.v *= sv;
  }
  return records;
}

}  // namespace phasetrack
