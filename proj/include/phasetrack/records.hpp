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

#ifndef PHASETRACK_RECORDS_HPP
#define PHASETRACK_RECORDS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace phasetrack {

/// One simultaneous measurement pair: u from BHD1 (the X-difference reading)
/// and v from BHD2 (the Y-sum reading), vacuum-normalized.
struct SampleRecord {
  double t;
  double u;
  double v;
};

/// Two-channel photodetector time series around the modulation carrier.
/// t0 is the time of the first sample; synthesized traces start at a
/// negative t0 so that filter guard intervals precede t = 0. `duration`
/// marks the logical measurement span [0, duration] that demodulation may
/// emit records for; infinity means "use the whole trace".
struct RfTrace {
  double sample_rate = 2e8;  // Hz
  double carrier_f = 5e6;    // Hz
  double t0 = 0.0;           // seconds
  double duration = std::numeric_limits<double>::infinity();
  std::vector<double> bhd1;
  std::vector<double> bhd2;
};

/// Throws std::domain_error on invariant violations (unequal channel
/// lengths, sample_rate <= 2 * carrier_f).
void validate(const RfTrace& trace);

/// CSV export, columns t,i1,i2 at 17 significant digits.
void write_rf_csv(const RfTrace& trace, const std::string& path);

/// Raw export: little-endian float64 pairs (i1, i2), no header.
void write_rf_raw(const RfTrace& trace, const std::string& path);

}  // namespace phasetrack

#endif
