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

#include "phasetrack/records.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace phasetrack {

void validate(const RfTrace& trace) {
  if (trace.bhd1.size() != trace.bhd2.size()) {
    throw std::domain_error("RfTrace: channel lengths differ");
  }
  if (!(trace.sample_rate > 2.0 * trace.carrier_f)) {
    throw std::domain_error("RfTrace: sample_rate must exceed 2 * carrier_f");
  }
}

void write_rf_csv(const RfTrace& trace, const std::string& path) {
  validate(trace);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,i1,i2\n";
  char line[128];
  for (std::size_t i = 0; i < trace.bhd1.size(); ++i) {
    const double t = trace.t0 + static_cast<double>(i) / trace.sample_rate;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", t, trace.bhd1[i], trace.bhd2[i]);
    out << line;
  }
}

void write_rf_raw(const RfTrace& trace, const std::string& path) {
  validate(trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  auto put = [&](double value) {
    uint64_t bits;
    std::memcpy(&bits, &value, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) {
      bits = __builtin_bswap64(bits);
    }
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  };
  for (std::size_t i = 0; i < trace.bhd1.size(); ++i) {
    put(trace.bhd1[i]);
    put(trace.bhd2[i]);
  }
}

}  // namespace phasetrack
