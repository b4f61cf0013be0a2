// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>

namespace dirsim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

struct PowerMw {
  double value = 0.0;
};

struct PowerDbm {
  double value = 0.0;
};

/// Gain in dB relative to isotropic. Negative infinity means zero linear gain.
struct GainDb {
  double value = 0.0;

  static constexpr GainDb zero_linear() { return GainDb{-std::numeric_limits<double>::infinity()}; }
  bool is_zero_linear() const { return std::isinf(value) && value < 0; }

  friend constexpr bool operator==(GainDb a, GainDb b) = default;
};

PowerDbm mw_to_dbm(PowerMw p);
PowerMw dbm_to_mw(PowerDbm p);

/// Degrees normalized to [0, 360).
class AngleDeg {
 public:
  constexpr AngleDeg() = default;
  explicit AngleDeg(double degrees) : value_(normalize(degrees)) {}

  double value() const { return value_; }
  double radians() const { return value_ * kPi / 180.0; }

  static double normalize(double degrees);

  friend bool operator==(AngleDeg a, AngleDeg b) = default;

 private:
  double value_ = 0.0;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);

/// Counterclockwise angle of (to - from) measured from +x.
/// Throws DomainError when the positions coincide.
AngleDeg bearing(Position from, Position to);

/// Smallest signed rotation taking `b` onto `a`, in (-180, 180].
double angular_difference(AngleDeg a, AngleDeg b);

}  // namespace dirsim
