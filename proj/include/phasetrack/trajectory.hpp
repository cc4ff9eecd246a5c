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

#ifndef PHASETRACK_TRAJECTORY_HPP
#define PHASETRACK_TRAJECTORY_HPP

#include <array>
#include <utility>
#include <vector>

namespace phasetrack {

/// Piecewise-linear profile over time, clamped to the end knots outside the
/// knot range. Knot times must be strictly increasing.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;

  double operator()(double t) const;
};

struct MeanPoint {
  double x;
  double y;
};

/// Time-dependent displacement waveform driving the bench,
/// alpha(t) = <X>(t) + i <Y>(t) in vacuum-normalized quadrature units.
///
/// Variants:
///   Zero / Constant   stationary displacements
///   Arc               fixed radius, piecewise-linear phase sweep (rad)
///   Spiral            piecewise-linear radius and phase profiles
///   Waypoints         (t, x, y) points with linear or cubic interpolation
struct TrajectorySpec {
  enum class Kind { Zero, Constant, Arc, Spiral, Waypoints };
  enum class Interp { Linear, Cubic };

  Kind kind = Kind::Zero;
  double duration = 1.0;  // seconds

  // Constant
  double x = 0.0;
  double y = 0.0;

  // Arc
  double radius = 0.0;
  PiecewiseLinear phase;  // rad; also used by Spiral

  // Spiral
  PiecewiseLinear radius_profile;

  // Waypoints
  std::vector<std::array<double, 3>> waypoints;  // (t, x, y)
  Interp interp = Interp::Linear;
};

/// Throws std::domain_error on invariant violations (duration <= 0,
/// non-increasing knot/waypoint times, negative radius).
void validate(const TrajectorySpec& spec);

/// Deterministic evaluation at t in [0, duration]; throws std::out_of_range
/// otherwise.
MeanPoint sample_trajectory(const TrajectorySpec& spec, double t);

TrajectorySpec zero_trajectory(double duration);
TrajectorySpec constant_trajectory(double x, double y, double duration);

/// Constant-modulation-depth sweep: starts at (-3.7, 5.8)*sqrt(2), runs
/// forward by sweep_cycles of a full turn, reverses, and stops on the ray
/// through (-5.3, -4.3)*sqrt(2). The turnaround time balances the angular
/// speed of the two legs. The intermediate speed profile is not constrained
/// by the reproduced endpoints; both knobs are exposed.
TrajectorySpec fig4_top_preset(double duration = 5e-3, double sweep_cycles = 0.92);

/// Decreasing-modulation-depth example: radius ramps linearly from
/// radius_start to radius_end while the phase advances by phase_cycles turns.
TrajectorySpec fig4_bottom_preset(double duration = 5e-3, double radius_start = 9.0,
                                  double radius_end = 1.5, double phase_cycles = 1.25);

/// Copy of `spec` restricted to [0, new_duration] (new_duration must not
/// exceed spec.duration).
TrajectorySpec truncate_to(const TrajectorySpec& spec, double new_duration);

/// Repeated-evaluation form of sample_trajectory: validates and precomputes
/// once (cubic waypoint splines in particular), then evaluates per sample.
/// at_clamped() holds the endpoint values outside [0, duration]; the RF
/// synthesizer uses it for filter guard intervals.
class TrajectorySampler {
 public:
  explicit TrajectorySampler(TrajectorySpec spec);

  MeanPoint at(double t) const;          // range-checked
  MeanPoint at_clamped(double t) const;  // clamps t into [0, duration]

  bool is_constant() const { return constant_; }
  const TrajectorySpec& spec() const { return spec_; }

 private:
  MeanPoint eval(double t) const;

  TrajectorySpec spec_;
  bool constant_ = false;
  // Waypoint samples resampled onto a dense grid when cubic interpolation is
  // requested; empty otherwise.
  std::vector<double> spline_m_x_, spline_m_y_;  // spline second derivatives
  std::vector<double> wp_t_, wp_x_, wp_y_;
};

}  // namespace phasetrack

#endif
