// SPDX-License-Identifier: Apache-2.0
// Randomized radio populations shared by the procedure tests and the
// acceptance run. Each radio is mirrored into an oracle::Radio so expected
// neighbor sets are computed without the library's propagation code.
#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <variant>
#include <vector>

#include "dirsim/neighbor_procedures.hpp"
#include "oracles.hpp"

namespace fleet {

inline oracle::Antenna to_oracle(const std::optional<dirsim::AntennaPatternConfig>& cfg) {
  oracle::Antenna a;
  if (!cfg) return a;
  a.omni = false;
  const dirsim::CurveFamily& f = cfg->family;
  if (std::holds_alternative<dirsim::CircleCurve>(f)) a.curve_shape.shape = oracle::Shape::Circle;
  if (std::holds_alternative<dirsim::CardioidCurve>(f)) a.curve_shape.shape = oracle::Shape::Cardioid;
  if (const auto* p = std::get_if<dirsim::FoliumCurve>(&f)) {
    a.curve_shape.shape = oracle::Shape::Folium;
    a.curve_shape.a = p->a;
    a.curve_shape.b = p->b;
  }
  if (const auto* p = std::get_if<dirsim::RoseCurve>(&f)) {
    a.curve_shape.shape = oracle::Shape::Rose;
    a.curve_shape.k = p->k;
  }
  a.beam_width = cfg->beam_width_deg;
  a.gm = cfg->main_lobe_gain_db;
  a.gs = cfg->side_lobe_gain_db;
  a.orientation = cfg->main_lobe_orientation_deg;
  a.threshold = cfg->threshold_db;
  // The grid walk is slow; populations reuse a handful of curves.
  static std::map<std::tuple<int, double, double, int, double>, double> widths;
  const auto key = std::make_tuple(static_cast<int>(a.curve_shape.shape), a.curve_shape.a, a.curve_shape.b,
                                   a.curve_shape.k, a.threshold);
  auto it = widths.find(key);
  if (it == widths.end()) it = widths.emplace(key, oracle::precise_width(a.curve_shape, a.threshold)).first;
  a.natural = it->second;
  return a;
}

struct Fleet {
  std::deque<dirsim::RadioProfile> profiles;
  std::vector<dirsim::RadioView> views;
  std::vector<oracle::Radio> refs;

  dirsim::RadioId add(const dirsim::RadioConfig& cfg, dirsim::Position pos) {
    profiles.emplace_back(cfg);
    views.push_back({pos, &profiles.back()});
    oracle::Radio r;
    r.x = pos.x;
    r.y = pos.y;
    r.ptx_dbm = 10.0 * std::log10(cfg.transmitter_power_mw);
    r.f = cfg.carrier_frequency_hz;
    r.alpha = cfg.path_loss_alpha;
    r.detection_dbm = cfg.detection_threshold_dbm;
    r.antenna = to_oracle(cfg.antenna);
    refs.push_back(r);
    return static_cast<dirsim::RadioId>(views.size() - 1);
  }

  void move(dirsim::RadioId id, dirsim::Position pos) {
    views[id].pos = pos;
    refs[id].x = pos.x;
    refs[id].y = pos.y;
  }

  dirsim::RadioTable table() const { return views; }

  std::vector<dirsim::RadioId> expected(dirsim::RadioId tx) const {
    const std::vector<unsigned> n = oracle::neighbors(refs, tx);
    return {n.begin(), n.end()};
  }
};

inline dirsim::RadioConfig omni_config(double ptx_mw = 1.0, double detection_dbm = -80.0) {
  dirsim::RadioConfig c;
  c.transmitter_power_mw = ptx_mw;
  c.detection_threshold_dbm = detection_dbm;
  c.sensitivity_dbm = detection_dbm + 2.0;
  return c;
}

/// Mixed omni/directional radio with heterogeneous power and threshold.
template <class Rng>
dirsim::RadioConfig random_config(Rng& rng, double directional_share = 0.5) {
  std::uniform_real_distribution<double> power_db(-10.0, 7.0);
  std::uniform_real_distribution<double> detection(-85.0, -70.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  dirsim::RadioConfig c = omni_config(std::pow(10.0, power_db(rng) / 10.0), detection(rng));
  if (unit(rng) < directional_share) {
    dirsim::AntennaPatternConfig a;
    switch (static_cast<int>(unit(rng) * 4.0)) {
      case 0: a.family = dirsim::CircleCurve{}; break;
      case 1: a.family = dirsim::CardioidCurve{}; break;
      case 2: a.family = dirsim::FoliumCurve{1.0, 3.0}; break;
      default: a.family = dirsim::RoseCurve{1 + static_cast<int>(unit(rng) * 3.0)}; break;
    }
    a.beam_width_deg = 20.0 + 100.0 * unit(rng);
    a.main_lobe_gain_db = 3.0 + 9.0 * unit(rng);
    a.side_lobe_gain_db = -10.0 + 7.0 * unit(rng);
    a.main_lobe_orientation_deg = 360.0 * unit(rng);
    a.threshold_db = 3.0;
    c.antenna = a;
  }
  return c;
}

}  // namespace fleet
