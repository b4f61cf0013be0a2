// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dirsim/antenna.hpp"
#include "dirsim/units.hpp"

namespace dirsim {

enum class PathLossModel { FreeSpace, TwoRay };

/// Colocated radios are evaluated at this distance so path loss stays finite.
inline constexpr double kMinLinkDistance = 0.1;  // m

struct RadioConfig {
  double transmitter_power_mw = 1.0;
  double carrier_frequency_hz = 2.4e9;
  double path_loss_alpha = 2.0;
  double sensitivity_dbm = -85.0;
  double detection_threshold_dbm = -110.0;
  double snir_threshold_db = 4.0;
  double antenna_height_tx_m = 1.5;
  double antenna_height_rx_m = 1.5;
  PathLossModel path_loss_model = PathLossModel::FreeSpace;
  std::optional<AntennaPatternConfig> antenna;  // empty: omni-directional
  double bitrate_bps = 1e6;

  /// Throws ConfigError on violated invariants.
  void validate() const;

  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

/// A validated RadioConfig with its antenna pattern built once.
class RadioProfile {
 public:
  explicit RadioProfile(RadioConfig config);

  const RadioConfig& config() const { return config_; }
  const AntennaPattern& antenna() const { return antenna_; }
  PowerDbm transmit_power() const { return ptx_; }

  /// Path loss at distance d under this radio's model (d clamped to kMinLinkDistance).
  double path_loss_db(double d) const;

 private:
  RadioConfig config_;
  AntennaPattern antenna_;
  PowerDbm ptx_;
};

/// 10 * alpha * log10(4 pi d f / c).
double free_space_path_loss(double d, double f, double alpha);

/// Crossover distance 4 pi ht hr f / c of the two-ray model.
double two_ray_crossover(double ht, double hr, double f);

/// Free space below the crossover distance, 40 log10 d - 20 log10(ht hr) from it on.
double two_ray_path_loss(double d, double ht, double hr, double f, double alpha);

/// P_rx = P_tx + G_tx - PL + G_rx, all in the dB domain.
PowerDbm link_budget(PowerDbm ptx, GainDb gtx, double pl_db, GainDb grx);

/// Distance at which the best-case received power (strongest transmit
/// direction, receiver gain `grx_max_system`) falls to the detection threshold.
double max_interference_distance(const RadioProfile& radio, GainDb grx_max_system);

/// Received power at `target_pos` for a frame sent by `tx` from `tx_pos`.
/// Coincident positions use bearing 0 and distance kMinLinkDistance.
PowerDbm received_power(const RadioProfile& tx, Position tx_pos, Position target_pos, GainDb grx_at_target);

/// True iff the received power reaches the transmitter's detection threshold.
bool is_in_coverage_area(const RadioProfile& tx, Position tx_pos, Position target_pos, GainDb grx_at_target);

/// Bearing that tolerates coincident points (returns 0 there).
AngleDeg link_bearing(Position from, Position to);

}  // namespace dirsim
