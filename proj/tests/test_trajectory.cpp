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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "phasetrack/trajectory.hpp"

using namespace phasetrack;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

TEST_SUITE("trajectory") {

TEST_CASE("zero and constant variants") {
  const TrajectorySpec zero = zero_trajectory(1e-3);
  for (double t : {0.0, 5e-4, 1e-3}) {
    const MeanPoint p = sample_trajectory(zero, t);
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
  }
  const MeanPoint c = sample_trajectory(constant_trajectory(2.5, -1.0, 1.0), 0.7);
  CHECK(c.x == 2.5);
  CHECK(c.y == -1.0);
}

TEST_CASE("sampling is deterministic bit for bit") {
  const TrajectorySpec spec = fig4_top_preset();
  for (double t : {0.0, 1.234e-3, 4.999e-3}) {
    const MeanPoint a = sample_trajectory(spec, t);
    const MeanPoint b = sample_trajectory(spec, t);
    CHECK(std::memcmp(&a.x, &b.x, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.y, &b.y, sizeof(double)) == 0);
  }
}

TEST_CASE("arc keeps |alpha| constant") {
  TrajectorySpec arc;
  arc.kind = TrajectorySpec::Kind::Arc;
  arc.duration = 2e-3;
  arc.radius = 4.2;
  arc.phase.knots = {{0.0, 0.3}, {2e-3, 0.3 + 2000.0 * 2e-3}};  // constant rate
  for (int i = 0; i <= 50; ++i) {
    const MeanPoint p = sample_trajectory(arc, 2e-3 * i / 50.0);
    CHECK(std::hypot(p.x, p.y) == doctest::Approx(4.2).epsilon(1e-12));
  }
}

TEST_CASE("fig4 top preset hits the quoted endpoints") {
  const TrajectorySpec spec = fig4_top_preset();
  CHECK(spec.duration == doctest::Approx(5e-3));

  const MeanPoint start = sample_trajectory(spec, 0.0);
  CHECK(start.x == doctest::Approx(-3.7 * kSqrt2).epsilon(1e-9));
  CHECK(start.y == doctest::Approx(5.8 * kSqrt2).epsilon(1e-9));

  // The quoted stop radius differs from the start radius by ~0.8%; the arc
  // holds the start radius and stops on the quoted direction.
  const MeanPoint stop = sample_trajectory(spec, spec.duration);
  CHECK(std::hypot(stop.x - (-5.3 * kSqrt2), stop.y - (-4.3 * kSqrt2)) < 0.1);

  for (int i = 0; i <= 100; ++i) {
    const MeanPoint p = sample_trajectory(spec, spec.duration * i / 100.0);
    CHECK(std::hypot(p.x, p.y) == doctest::Approx(spec.radius).epsilon(1e-12));
  }

  // Swept forward then reversed: the phase profile has an interior turn.
  REQUIRE(spec.phase.knots.size() == 3);
  CHECK(spec.phase.knots[1].first > 0.0);
  CHECK(spec.phase.knots[1].first < spec.duration);
  CHECK(spec.phase.knots[1].second > spec.phase.knots[0].second);
  CHECK(spec.phase.knots[2].second < spec.phase.knots[1].second);
}

TEST_CASE("fig4 bottom preset has strictly decreasing modulation depth") {
  const TrajectorySpec spec = fig4_bottom_preset();
  double previous = 1e300;
  for (int i = 0; i <= 200; ++i) {
    const MeanPoint p = sample_trajectory(spec, spec.duration * i / 200.0);
    const double radius = std::hypot(p.x, p.y);
    CHECK(radius < previous);
    previous = radius;
  }
}

TEST_CASE("waypoints pass through every point exactly") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::Waypoints;
  spec.duration = 1.0;
  spec.waypoints = {{0.0, 0.0, 1.0}, {0.25, 2.0, -1.0}, {0.6, -3.0, 0.5}, {1.0, 1.0, 1.0}};

  for (auto interp : {TrajectorySpec::Interp::Linear, TrajectorySpec::Interp::Cubic}) {
    spec.interp = interp;
    for (const auto& w : spec.waypoints) {
      const MeanPoint p = sample_trajectory(spec, w[0]);
      CHECK(p.x == doctest::Approx(w[1]).epsilon(1e-12));
      CHECK(p.y == doctest::Approx(w[2]).epsilon(1e-12));
    }
  }

  // Linear interpolation between two waypoints is the midpoint.
  spec.interp = TrajectorySpec::Interp::Linear;
  const MeanPoint mid = sample_trajectory(spec, 0.125);
  CHECK(mid.x == doctest::Approx(1.0));
  CHECK(mid.y == doctest::Approx(0.0));
}

TEST_CASE("validation failures") {
  CHECK_THROWS_AS(sample_trajectory(zero_trajectory(1.0), -0.1), std::out_of_range);
  CHECK_THROWS_AS(sample_trajectory(zero_trajectory(1.0), 1.1), std::out_of_range);

  TrajectorySpec bad = zero_trajectory(1.0);
  bad.duration = 0.0;
  CHECK_THROWS_AS(validate(bad), std::domain_error);

  TrajectorySpec wp;
  wp.kind = TrajectorySpec::Kind::Waypoints;
  wp.duration = 1.0;
  wp.waypoints = {{0.0, 0.0, 0.0}, {0.0, 1.0, 1.0}};
  CHECK_THROWS_AS(validate(wp), std::domain_error);

  TrajectorySpec arc;
  arc.kind = TrajectorySpec::Kind::Arc;
  arc.duration = 1.0;
  arc.radius = -1.0;
  arc.phase.knots = {{0.0, 0.0}};
  CHECK_THROWS_AS(validate(arc), std::domain_error);

  CHECK_THROWS_AS(fig4_bottom_preset(5e-3, 1.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("truncate_to restricts the duration") {
  const TrajectorySpec spec = truncate_to(fig4_top_preset(), 2e-3);
  CHECK(spec.duration == doctest::Approx(2e-3));
  CHECK_THROWS_AS(truncate_to(spec, 3e-3), std::domain_error);
}

}  // TEST_SUITE
