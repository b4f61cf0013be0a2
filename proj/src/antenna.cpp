// SPDX-License-Identifier: Apache-2.0
#include "dirsim/antenna.hpp"

#include <algorithm>
#include <cmath>

#include "dirsim/errors.hpp"

namespace dirsim {

namespace {

constexpr double kDeg = kPi / 180.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Half-width of the angular domain in degrees.
double domain_half_width(const CurveFamily& family) {
  return std::visit(Overloaded{[](const CircleCurve&) { return 90.0; },
                               [](const CardioidCurve&) { return 180.0; },
                               [](const FoliumCurve&) { return 90.0; },
                               [](const RoseCurve& r) { return 90.0 / r.k; }},
                    family);
}

double raw_value(const CurveFamily& family, double t_deg) {
  const double t = t_deg * kDeg;
  return std::visit(Overloaded{[&](const CircleCurve&) { return std::abs(t_deg) < 90.0 ? std::cos(t) : 0.0; },
                               [&](const CardioidCurve&) { return (1.0 + std::cos(t)) / 2.0; },
                               [&](const FoliumCurve& f) {
                                 const double s = std::sin(t);
                                 return std::cos(t) * (f.b - 4.0 * f.a * s * s);
                               },
                               [&](const RoseCurve& r) { return std::cos(r.k * t); }},
                    family);
}

double peak_raw_value(const CurveFamily& family) { return raw_value(family, 0.0); }

// Bisects the edge of the above-threshold region on one side of boresight.
double edge_offset(const CurveFamily& family, double floor_value, double sign) {
  const double limit = domain_half_width(family);
  constexpr double kStep = 0.01;
  double inside = 0.0;
  double outside = limit;
  for (double t = kStep; t <= limit + kStep; t += kStep) {
    const double probe = std::min(t, limit);
    if (curve_value(family, sign * probe) < floor_value) {
      outside = probe;
      break;
    }
    inside = probe;
    if (probe == limit) break;
  }
  if (inside == limit) return limit;
  // Bisect until the bracket stops shrinking (well below 1e-9 degrees).
  for (;;) {
    const double mid = 0.5 * (inside + outside);
    if (mid <= inside || mid >= outside) break;
    if (curve_value(family, sign * mid) >= floor_value) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return 0.5 * (inside + outside);
}

}  // namespace

void validate_curve(const CurveFamily& family) {
  std::visit(Overloaded{[](const CircleCurve& c) {
                          if (!(c.radius > 0.0)) throw ConfigError("CircularPattern.r must be positive");
                        },
                        [](const CardioidCurve&) {},
                        [](const FoliumCurve& f) {
                          if (!(f.a > 0.0) || !(f.b > 0.0)) {
                            throw ConfigError("FoliumPattern.a and FoliumPattern.b must be positive");
                          }
                        },
                        [](const RoseCurve& r) {
                          if (r.k < 1) throw ConfigError("RosePattern.k must be >= 1");
                        }},
             family);

  // The normalized curve must peak at boresight.
  const double peak = peak_raw_value(family);
  if (!(peak > 0.0)) throw ConfigError(pattern_type_name(family) + ": curve is not positive at boresight");
  const double limit = domain_half_width(family);
  for (double t = -limit; t <= limit; t += 0.01) {
    if (raw_value(family, t) > peak * (1.0 + 1e-12)) {
      throw ConfigError(pattern_type_name(family) + ": curve maximum is not at boresight");
    }
  }
}

std::string pattern_type_name(const CurveFamily& family) {
  return std::visit(Overloaded{[](const CircleCurve&) { return std::string("CircularPattern"); },
                               [](const CardioidCurve&) { return std::string("CardioidPattern"); },
                               [](const FoliumCurve&) { return std::string("FoliumPattern"); },
                               [](const RoseCurve&) { return std::string("RosePattern"); }},
                    family);
}

double curve_value(const CurveFamily& family, double theta_hat_deg) {
  if (theta_hat_deg == 0.0) return 1.0;
  if (std::abs(theta_hat_deg) > domain_half_width(family)) return 0.0;
  const double v = raw_value(family, theta_hat_deg) / peak_raw_value(family);
  return std::clamp(v, 0.0, 1.0);
}

double natural_width(const CurveFamily& family, double threshold_db) {
  if (!(threshold_db > 0.0)) throw DomainError("natural_width: threshold must be positive");
  const double floor_value = std::pow(10.0, -threshold_db / 10.0);
  return edge_offset(family, floor_value, +1.0) + edge_offset(family, floor_value, -1.0);
}

AntennaPattern::AntennaPattern(const AntennaPatternConfig& config) : config_(config) {
  if (!(config.beam_width_deg > 0.0 && config.beam_width_deg < 360.0)) {
    throw ConfigError("beamWidth must lie in (0, 360) degrees");
  }
  if (!(config.threshold_db > 0.0)) throw ConfigError("dBThreshold must be positive");
  if (!(config.main_lobe_gain_db > config.side_lobe_gain_db)) {
    throw ConfigError("mainLobeGain must exceed sideLobeGain");
  }
  if (!std::isfinite(config.main_lobe_gain_db) || !std::isfinite(config.side_lobe_gain_db) ||
      !std::isfinite(config.main_lobe_orientation_deg)) {
    throw ConfigError("antenna gains and orientation must be finite");
  }
  validate_curve(config.family);
  natural_width_ = natural_width(config.family, config.threshold_db);
  scale_ = natural_width_ / config.beam_width_deg;
}

GainDb AntennaPattern::gain(AngleDeg direction) const {
  if (!config_) return GainDb{0.0};
  const double off = angular_difference(direction, AngleDeg(config_->main_lobe_orientation_deg));
  const double v = curve_value(config_->family, off * scale_);
  const double main = v > 0.0 ? config_->main_lobe_gain_db + 10.0 * std::log10(v)
                              : GainDb::zero_linear().value;
  return GainDb{std::max(main, config_->side_lobe_gain_db)};
}

GainDb AntennaPattern::max_gain() const {
  if (!config_) return GainDb{0.0};
  return GainDb{config_->main_lobe_gain_db};
}

}  // namespace dirsim
