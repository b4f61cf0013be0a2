// SPDX-License-Identifier: Apache-2.0
#include "dirsim/mobility.hpp"

#include <algorithm>
#include <cmath>

#include "dirsim/errors.hpp"

namespace dirsim {

RandomWaypointMobility::RandomWaypointMobility(RandomWaypointParams params, std::uint64_t stream_seed)
    : params_(params), rng_(stream_seed), from_(params.start), to_(params.start) {
  if (!(params_.speed_max > 0.0) || params_.speed_min < 0.0 || params_.speed_min > params_.speed_max) {
    throw ConfigError("random waypoint: need 0 <= speedMin <= speedMax and speedMax > 0");
  }
  if (!params_.bounds.contains(params_.start)) throw ConfigError("random waypoint: start outside playground");
  next_leg();
}

void RandomWaypointMobility::next_leg() {
  std::uniform_real_distribution<double> ux(params_.bounds.min_x, params_.bounds.max_x);
  std::uniform_real_distribution<double> uy(params_.bounds.min_y, params_.bounds.max_y);
  // Keep the speed away from zero so legs always end.
  const double lo = std::max(params_.speed_min, 1e-3 * params_.speed_max);
  std::uniform_real_distribution<double> us(lo, params_.speed_max);
  from_ = to_;
  depart_ = leave_;
  to_ = Position{ux(rng_), uy(rng_)};
  const double speed = us(rng_);
  arrive_ = depart_ + distance(from_, to_) / speed;
  leave_ = arrive_ + params_.pause;
}

Position RandomWaypointMobility::position(double t) {
  while (t >= leave_) next_leg();
  if (t >= arrive_) return to_;
  if (t <= depart_) return from_;
  const double f = (t - depart_) / (arrive_ - depart_);
  return Position{from_.x + f * (to_.x - from_.x), from_.y + f * (to_.y - from_.y)};
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Position mobility_position(MobilityModel& model, double t) {
  if (t < 0.0) throw DomainError("mobility_position: negative time");
  return std::visit(Overloaded{[](StationaryMobility& m) { return m.pos; },
                               [t](LinearMobility& m) { return Position{m.start.x + m.vx * t, m.start.y + m.vy * t}; },
                               [t](CircularOrbitMobility& m) {
                                 const double a = m.phase + m.angular_speed * t;
                                 return Position{m.center.x + m.radius * std::cos(a), m.center.y + m.radius * std::sin(a)};
                               },
                               [t](RandomWaypointMobility& m) { return m.position(t); }},
                    model);
}

double max_speed(const MobilityModel& model) {
  return std::visit(Overloaded{[](const StationaryMobility&) { return 0.0; },
                               [](const LinearMobility& m) { return std::hypot(m.vx, m.vy); },
                               [](const CircularOrbitMobility& m) { return std::abs(m.angular_speed) * m.radius; },
                               [](const RandomWaypointMobility& m) { return m.params().speed_max; }},
                    model);
}

bool is_stationary(const MobilityModel& model) { return max_speed(model) == 0.0; }

}  // namespace dirsim
