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

#include "phasetrack/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasetrack {

namespace {

// Second derivatives of the natural cubic spline through (t_k, v_k),
// from the standard tridiagonal system (Thomas sweep).
std::vector<double> spline_second_derivatives(const std::vector<double>& t,
                                              const std::vector<double>& v) {
  const std::size_t n = t.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> diag(n, 1.0), rhs(n, 0.0), upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h_prev = t[i] - t[i - 1];
    const double h_next = t[i + 1] - t[i];
    diag[i] = 2.0 * (h_prev + h_next);
    upper[i] = h_next;
    rhs[i] = 6.0 * ((v[i + 1] - v[i]) / h_next - (v[i] - v[i - 1]) / h_prev);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = (t[i] - t[i - 1]) / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    if (i == 1) break;
  }
  return m;
}

double spline_eval(const std::vector<double>& t, const std::vector<double>& v,
                   const std::vector<double>& m, double at) {
  const std::size_t n = t.size();
  if (n == 1) return v[0];
  std::size_t hi = std::upper_bound(t.begin(), t.end(), at) - t.begin();
  hi = std::clamp<std::size_t>(hi, 1, n - 1);
  const std::size_t lo = hi - 1;
  const double h = t[hi] - t[lo];
  const double a = (t[hi] - at) / h;
  const double b = (at - t[lo]) / h;
  return a * v[lo] + b * v[hi] +
         ((a * a * a - a) * m[lo] + (b * b * b - b) * m[hi]) * h * h / 6.0;
}

double lerp_at(const std::vector<std::array<double, 3>>& pts, double t, int component) {
  auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                             [](double value, const auto& p) { return value < p[0]; });
  if (hi == pts.begin()) return pts.front()[component];
  if (hi == pts.end()) return pts.back()[component];
  const auto& p1 = *hi;
  const auto& p0 = *(hi - 1);
  const double w = (t - p0[0]) / (p1[0] - p0[0]);
  return p0[component] + w * (p1[component] - p0[component]);
}

}  // namespace

double PiecewiseLinear::operator()(double t) const {
  if (knots.empty()) {
    throw std::domain_error("PiecewiseLinear: no knots");
  }
  if (t <= knots.front().first) return knots.front().second;
  if (t >= knots.back().first) return knots.back().second;
  auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                             [](double value, const auto& k) { return value < k.first; });
  auto lo = hi - 1;
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

void validate(const TrajectorySpec& spec) {
  if (!(spec.duration > 0.0)) {
    throw std::domain_error("TrajectorySpec.duration must be > 0");
  }
  auto check_knots = [](const PiecewiseLinear& p, const char* name) {
    for (std::size_t i = 1; i < p.knots.size(); ++i) {
      if (!(p.knots[i].first > p.knots[i - 1].first)) {
        throw std::domain_error(std::string("TrajectorySpec.") + name +
                                " knot times must be strictly increasing");
      }
    }
  };
  switch (spec.kind) {
    case TrajectorySpec::Kind::Zero:
    case TrajectorySpec::Kind::Constant:
      break;
    case TrajectorySpec::Kind::Arc:
      if (spec.radius < 0.0) throw std::domain_error("TrajectorySpec.radius must be >= 0");
      if (spec.phase.knots.empty()) throw std::domain_error("TrajectorySpec.phase needs knots");
      check_knots(spec.phase, "phase");
      break;
    case TrajectorySpec::Kind::Spiral:
      if (spec.radius_profile.knots.empty() || spec.phase.knots.empty()) {
        throw std::domain_error("TrajectorySpec spiral needs radius and phase knots");
      }
      check_knots(spec.radius_profile, "radius");
      check_knots(spec.phase, "phase");
      for (const auto& [t, radius] : spec.radius_profile.knots) {
        if (radius < 0.0) throw std::domain_error("TrajectorySpec.radius must be >= 0");
      }
      break;
    case TrajectorySpec::Kind::Waypoints:
      if (spec.waypoints.empty()) throw std::domain_error("TrajectorySpec.waypoints empty");
      for (std::size_t i = 1; i < spec.waypoints.size(); ++i) {
        if (!(spec.waypoints[i][0] > spec.waypoints[i - 1][0])) {
          throw std::domain_error("TrajectorySpec.waypoints times must be strictly increasing");
        }
      }
      break;
  }
}

TrajectorySampler::TrajectorySampler(TrajectorySpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  constant_ = spec_.kind == TrajectorySpec::Kind::Zero ||
              spec_.kind == TrajectorySpec::Kind::Constant;
  if (spec_.kind == TrajectorySpec::Kind::Waypoints &&
      spec_.interp == TrajectorySpec::Interp::Cubic && spec_.waypoints.size() >= 3) {
    wp_t_.reserve(spec_.waypoints.size());
    for (const auto& p : spec_.waypoints) {
      wp_t_.push_back(p[0]);
      wp_x_.push_back(p[1]);
      wp_y_.push_back(p[2]);
    }
    spline_m_x_ = spline_second_derivatives(wp_t_, wp_x_);
    spline_m_y_ = spline_second_derivatives(wp_t_, wp_y_);
  }
}

MeanPoint TrajectorySampler::eval(double t) const {
  switch (spec_.kind) {
    case TrajectorySpec::Kind::Zero:
      return {0.0, 0.0};
    case TrajectorySpec::Kind::Constant:
      return {spec_.x, spec_.y};
    case TrajectorySpec::Kind::Arc: {
      const double phi = spec_.phase(t);
      return {spec_.radius * std::cos(phi), spec_.radius * std::sin(phi)};
    }
    case TrajectorySpec::Kind::Spiral: {
      const double radius = spec_.radius_profile(t);
      const double phi = spec_.phase(t);
      return {radius * std::cos(phi), radius * std::sin(phi)};
    }
    case TrajectorySpec::Kind::Waypoints: {
      if (!wp_t_.empty()) {
        const double tc = std::clamp(t, wp_t_.front(), wp_t_.back());
        return {spline_eval(wp_t_, wp_x_, spline_m_x_, tc),
                spline_eval(wp_t_, wp_y_, spline_m_y_, tc)};
      }
      return {lerp_at(spec_.waypoints, t, 1), lerp_at(spec_.waypoints, t, 2)};
    }
  }
  throw std::logic_error("TrajectorySampler: unhandled variant");
}

MeanPoint TrajectorySampler::at(double t) const {
  if (t < 0.0 || t > spec_.duration) {
    throw std::out_of_range("sample_trajectory: t outside [0, duration]");
  }
  return eval(t);
}

MeanPoint TrajectorySampler::at_clamped(double t) const {
  return eval(std::clamp(t, 0.0, spec_.duration));
}

MeanPoint sample_trajectory(const TrajectorySpec& spec, double t) {
  return TrajectorySampler(spec).at(t);
}

TrajectorySpec zero_trajectory(double duration) {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::Zero;
  spec.duration = duration;
  return spec;
}

TrajectorySpec constant_trajectory(double x, double y, double duration) {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::Constant;
  spec.duration = duration;
  spec.x = x;
  spec.y = y;
  return spec;
}

TrajectorySpec fig4_top_preset(double duration, double sweep_cycles) {
  if (!(duration > 0.0) || !(sweep_cycles > 0.0)) {
    throw std::domain_error("fig4_top_preset: duration and sweep_cycles must be > 0");
  }
  const double sqrt2 = std::numbers::sqrt2;
  const double two_pi = 2.0 * std::numbers::pi;

  const double start_x = -3.7 * sqrt2, start_y = 5.8 * sqrt2;
  const double stop_x = -5.3 * sqrt2, stop_y = -4.3 * sqrt2;

  const double radius = std::hypot(start_x, start_y);
  const double phi_start = std::atan2(start_y, start_x);
  const double phi_turn = phi_start + sweep_cycles * two_pi;
  // Stop on the quoted end direction, reached by backtracking from the turn
  // point (wrapped so the return leg is shorter than a full cycle).
  double phi_stop = std::atan2(stop_y, stop_x);
  while (phi_stop < phi_turn - two_pi) phi_stop += two_pi;
  while (phi_stop > phi_turn) phi_stop -= two_pi;

  const double forward = std::abs(phi_turn - phi_start);
  const double back = std::abs(phi_turn - phi_stop);
  const double t_turn = duration * forward / (forward + back);

  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::Arc;
  spec.duration = duration;
  spec.radius = radius;
  spec.phase.knots = {{0.0, phi_start}, {t_turn, phi_turn}, {duration, phi_stop}};
  return spec;
}

TrajectorySpec fig4_bottom_preset(double duration, double radius_start, double radius_end,
                                  double phase_cycles) {
  if (!(duration > 0.0) || radius_start < 0.0 || radius_end < 0.0 ||
      !(radius_end < radius_start)) {
    throw std::domain_error("fig4_bottom_preset: need duration > 0 and radius_end < radius_start");
  }
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::Spiral;
  spec.duration = duration;
  spec.radius_profile.knots = {{0.0, radius_start}, {duration, radius_end}};
  spec.phase.knots = {{0.0, std::numbers::pi / 2.0},
                      {duration, std::numbers::pi / 2.0 + phase_cycles * 2.0 * std::numbers::pi}};
  return spec;
}

TrajectorySpec truncate_to(const TrajectorySpec& spec, double new_duration) {
  if (new_duration > spec.duration) {
    throw std::domain_error("truncate_to: new duration exceeds trajectory duration");
  }
  TrajectorySpec out = spec;
  out.duration = new_duration;
  return out;
}

}  // namespace phasetrack
