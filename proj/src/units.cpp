// SPDX-License-Identifier: Apache-2.0
#include "dirsim/units.hpp"

#include <string>

#include "dirsim/errors.hpp"

namespace dirsim {

PowerDbm mw_to_dbm(PowerMw p) {
  if (!(p.value > 0.0)) {
    throw DomainError("mw_to_dbm: power must be positive, got " + std::to_string(p.value));
  }
  return PowerDbm{10.0 * std::log10(p.value)};
}

PowerMw dbm_to_mw(PowerDbm p) { return PowerMw{std::pow(10.0, p.value / 10.0)}; }

double AngleDeg::normalize(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value can round up to exactly 360
  if (r >= 360.0) r = 0.0;
  return r;
}

double distance(Position a, Position b) { return std::hypot(b.x - a.x, b.y - a.y); }

AngleDeg bearing(Position from, Position to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  if (dx == 0.0 && dy == 0.0) {
    throw DomainError("bearing: coincident positions");
  }
  return AngleDeg(std::atan2(dy, dx) * 180.0 / kPi);
}

double angular_difference(AngleDeg a, AngleDeg b) {
  double d = a.value() - b.value();  // (-360, 360)
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

}  // namespace dirsim
