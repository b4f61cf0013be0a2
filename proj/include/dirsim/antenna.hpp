// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>

#include "dirsim/units.hpp"

namespace dirsim {

// Main-lobe curve families. Raw polar forms (before peak normalization and
// clipping of negative radii):
//   circle    cos t                     on |t| < 90
//   cardioid  (1 + cos t) / 2           on |t| <= 180
//   folium    cos t * (b - 4a sin^2 t)  on |t| <= 90
//   rose      cos(k t)                  on |t| <= 90 / k

struct CircleCurve {
  double radius = 1.0;  // amplitude only; normalized away
  friend bool operator==(const CircleCurve&, const CircleCurve&) = default;
};

struct CardioidCurve {
  friend bool operator==(const CardioidCurve&, const CardioidCurve&) = default;
};

struct FoliumCurve {
  double a = 1.0;
  double b = 3.0;
  friend bool operator==(const FoliumCurve&, const FoliumCurve&) = default;
};

struct RoseCurve {
  int k = 1;
  friend bool operator==(const RoseCurve&, const RoseCurve&) = default;
};

using CurveFamily = std::variant<CircleCurve, CardioidCurve, FoliumCurve, RoseCurve>;

/// Throws ConfigError if the family parameters are invalid.
void validate_curve(const CurveFamily& family);

/// Name used in configuration files ("CircularPattern", "FoliumPattern", ...).
std::string pattern_type_name(const CurveFamily& family);

/// Relative linear power gain in [0, 1], exactly 1 at theta_hat = 0.
/// Angles outside the curve's domain (including |theta_hat| > 180) give 0.
double curve_value(const CurveFamily& family, double theta_hat_deg);

/// Width in degrees of the contiguous region around 0 where the curve stays
/// at or above 10^(-threshold_db / 10). Each edge is bisected to full double precision.
double natural_width(const CurveFamily& family, double threshold_db);

struct AntennaPatternConfig {
  double beam_width_deg = 40.0;
  double main_lobe_gain_db = 15.0;
  double side_lobe_gain_db = -5.0;
  double main_lobe_orientation_deg = 0.0;
  double threshold_db = 3.0;
  CurveFamily family = FoliumCurve{};

  friend bool operator==(const AntennaPatternConfig&, const AntennaPatternConfig&) = default;
};

/// Immutable gain pattern. A default-constructed pattern is omni-directional
/// (0 dBi everywhere). Transmit and receive use the same pattern.
class AntennaPattern {
 public:
  AntennaPattern() = default;
  explicit AntennaPattern(const AntennaPatternConfig& config);

  static AntennaPattern omni() { return AntennaPattern(); }

  GainDb gain(AngleDeg direction) const;
  GainDb max_gain() const;

  bool is_omni() const { return !config_.has_value(); }
  const std::optional<AntennaPatternConfig>& config() const { return config_; }

  /// Cached natural width of the curve at the configured threshold.
  double natural_width_deg() const { return natural_width_; }

  /// Factor applied to off-boresight angles before evaluating the curve.
  double angular_scale() const { return scale_; }

 private:
  std::optional<AntennaPatternConfig> config_;
  double natural_width_ = 360.0;
  double scale_ = 1.0;
};

}  // namespace dirsim
