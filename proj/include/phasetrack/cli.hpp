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

#ifndef PHASETRACK_CLI_HPP
#define PHASETRACK_CLI_HPP

namespace phasetrack {

/// Entry point behind the `phasetrack` binary; exposed so tests can drive
/// the exact command surface in-process.
///
/// Subcommands: run <scenario>, sweep <param> <grid> <scenario>,
/// calibrate <scenario>; options --seed, --out-dir, --tier. The default
/// output directory comes from $PHASETRACK_OUT_DIR, falling back to ".".
///
/// Exit codes: 0 success, 2 scenario schema error, 3 physics-invariant
/// violation, 4 I/O failure (1 for usage errors).
int cli_main(int argc, const char* const* argv);

}  // namespace phasetrack

#endif
