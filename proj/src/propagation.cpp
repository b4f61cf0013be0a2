// SPDX-License-Identifier: Apache-2.0
#include "dirsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dirsim/errors.hpp"

namespace dirsim {

void RadioConfig::validate() const {
  if (!(transmitter_power_mw > 0.0)) throw ConfigError("transmitterPower must be positive");
  if (!(carrier_frequency_hz > 0.0)) throw ConfigError("carrierFrequency must be positive");
  if (!(path_loss_alpha >= 2.0)) throw ConfigError("pathLossAlpha must be >= 2");
  if (!(sensitivity_dbm >= detection_threshold_dbm)) {
    throw ConfigError("sensitivity must not be below detectionThreshold");
  }
  if (path_loss_model == PathLossModel::TwoRay && !(antenna_height_tx_m > 0.0 && antenna_height_rx_m > 0.0)) {
    throw ConfigError("two-ray model requires positive antenna heights");
  }
  if (!(bitrate_bps > 0.0)) throw ConfigError("bitrate must be positive");
}

RadioProfile::RadioProfile(RadioConfig config)
    : config_(std::move(config)),
      antenna_(config_.antenna ? AntennaPattern(*config_.antenna) : AntennaPattern::omni()),
      ptx_{0.0} {
  config_.validate();
  ptx_ = mw_to_dbm(PowerMw{config_.transmitter_power_mw});
}

double RadioProfile::path_loss_db(double d) const {
  d = std::max(d, kMinLinkDistance);
  if (config_.path_loss_model == PathLossModel::TwoRay) {
    return two_ray_path_loss(d, config_.antenna_height_tx_m, config_.antenna_height_rx_m,
                             config_.carrier_frequency_hz, config_.path_loss_alpha);
  }
  return free_space_path_loss(d, config_.carrier_frequency_hz, config_.path_loss_alpha);
}

double free_space_path_loss(double d, double f, double alpha) {
  if (!(d > 0.0)) throw DomainError("free_space_path_loss: distance must be positive");
  if (!(f > 0.0)) throw DomainError("free_space_path_loss: frequency must be positive");
  return 10.0 * alpha * std::log10(4.0 * kPi * d * f / kSpeedOfLight);
}

double two_ray_crossover(double ht, double hr, double f) { return 4.0 * kPi * ht * hr * f / kSpeedOfLight; }

double two_ray_path_loss(double d, double ht, double hr, double f, double alpha) {
  if (!(ht > 0.0 && hr > 0.0)) throw DomainError("two_ray_path_loss: antenna heights must be positive");
  if (d < two_ray_crossover(ht, hr, f)) return free_space_path_loss(d, f, alpha);
  if (!(d > 0.0)) throw DomainError("two_ray_path_loss: distance must be positive");
  return 40.0 * std::log10(d) - 20.0 * std::log10(ht * hr);
}

PowerDbm link_budget(PowerDbm ptx, GainDb gtx, double pl_db, GainDb grx) {
  return PowerDbm{ptx.value + gtx.value - pl_db + grx.value};
}

namespace {

// Upper end of the bracket around the last d with loss(d) <= budget, for loss
// increasing on [lo, hi] and loss(lo) <= budget < loss(hi). Returning the upper
// end keeps the coverage box a superset of the real coverage.
template <class Loss>
double bisect_reach(Loss loss, double budget, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (loss(mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

double max_interference_distance(const RadioProfile& radio, GainDb grx_max_system) {
  const RadioConfig& cfg = radio.config();
  const double budget = radio.transmit_power().value + radio.antenna().max_gain().value + grx_max_system.value -
                        cfg.detection_threshold_dbm;
  const double f = cfg.carrier_frequency_hz;
  const double free_space_reach = kSpeedOfLight / (4.0 * kPi * f) * std::pow(10.0, budget / (10.0 * cfg.path_loss_alpha));
  if (cfg.path_loss_model == PathLossModel::FreeSpace) return free_space_reach;

  const double ht = cfg.antenna_height_tx_m;
  const double hr = cfg.antenna_height_rx_m;
  const double crossover = two_ray_crossover(ht, hr, f);
  auto loss = [&](double d) { return two_ray_path_loss(d, ht, hr, f, cfg.path_loss_alpha); };
  if (loss(crossover) <= budget) {
    double hi = 2.0 * crossover;
    while (loss(hi) <= budget) hi *= 2.0;
    return bisect_reach(loss, budget, crossover, hi);
  }
  // Coverage ends inside the free-space regime.
  return std::min(free_space_reach, crossover);
}

AngleDeg link_bearing(Position from, Position to) {
  if (from == to) return AngleDeg(0.0);
  return bearing(from, to);
}

PowerDbm received_power(const RadioProfile& tx, Position tx_pos, Position target_pos, GainDb grx_at_target) {
  const GainDb gtx = tx.antenna().is_omni() ? GainDb{0.0} : tx.antenna().gain(link_bearing(tx_pos, target_pos));
  return link_budget(tx.transmit_power(), gtx, tx.path_loss_db(distance(tx_pos, target_pos)), grx_at_target);
}

bool is_in_coverage_area(const RadioProfile& tx, Position tx_pos, Position target_pos, GainDb grx_at_target) {
  return received_power(tx, tx_pos, target_pos, grx_at_target).value >= tx.config().detection_threshold_dbm;
}

}  // namespace dirsim
