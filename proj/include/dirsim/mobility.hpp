// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <variant>

#include "dirsim/units.hpp"

namespace dirsim {

struct Playground {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 1000.0;
  double max_y = 1000.0;

  bool contains(Position p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
};

struct StationaryMobility {
  Position pos;
};

struct LinearMobility {
  Position start;
  double vx = 0.0;
  double vy = 0.0;
};

/// Counterclockwise orbit: angle(t) = phase + angular_speed * t (radians).
struct CircularOrbitMobility {
  Position center;
  double radius = 0.0;
  double angular_speed = 0.0;  // rad/s
  double phase = 0.0;          // rad
};

struct RandomWaypointParams {
  Playground bounds;
  double speed_min = 0.0;  // m/s
  double speed_max = 1.0;  // m/s
  double pause = 0.0;      // s
  Position start;
};

/// Random waypoint: pick a uniform destination in the bounds and a uniform
/// speed in [speed_min, speed_max], travel in a straight leg, pause, repeat.
/// Legs are drawn lazily, so queries must use non-decreasing times.
class RandomWaypointMobility {
 public:
  RandomWaypointMobility(RandomWaypointParams params, std::uint64_t stream_seed);

  Position position(double t);
  const RandomWaypointParams& params() const { return params_; }

 private:
  void next_leg();

  RandomWaypointParams params_;
  std::mt19937_64 rng_;
  Position from_;
  Position to_;
  double depart_ = 0.0;
  double arrive_ = 0.0;
  double leave_ = 0.0;  // end of the pause after arriving
};

using MobilityModel = std::variant<StationaryMobility, LinearMobility, CircularOrbitMobility, RandomWaypointMobility>;

/// Position at time t >= 0.
Position mobility_position(MobilityModel& model, double t);

/// Upper bound on speed in m/s.
double max_speed(const MobilityModel& model);

bool is_stationary(const MobilityModel& model);

}  // namespace dirsim
