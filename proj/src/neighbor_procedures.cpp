// SPDX-License-Identifier: Apache-2.0
#include "dirsim/neighbor_procedures.hpp"

#include <algorithm>
#include <chrono>
#include <iterator>
#include <string>

#include "dirsim/errors.hpp"

namespace dirsim {

namespace {

class WallTimer {
 public:
  explicit WallTimer(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~WallTimer() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }
  WallTimer(const WallTimer&) = delete;
  WallTimer& operator=(const WallTimer&) = delete;

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

void check_id(RadioTable radios, RadioId id) {
  if (id >= radios.size() || radios[id].profile == nullptr) {
    throw ScenarioError("unknown radio " + std::to_string(id));
  }
}

}  // namespace

bool hears(RadioTable radios, RadioId tx, RadioId rx) {
  const RadioView& t = radios[tx];
  const RadioView& r = radios[rx];
  const AntennaPattern& rx_antenna = r.profile->antenna();
  const GainDb grx = rx_antenna.is_omni() ? GainDb{0.0} : rx_antenna.gain(link_bearing(r.pos, t.pos));
  return is_in_coverage_area(*t.profile, t.pos, r.pos, grx);
}

std::vector<RadioId> refine_candidates(std::span<const RadioId> candidates, RadioId tx, RadioTable radios) {
  std::vector<RadioId> out;
  out.reserve(candidates.size());
  for (RadioId c : candidates) {
    if (c != tx && hears(radios, tx, c)) out.push_back(c);
  }
  return out;
}

std::vector<RadioId> brute_force_neighbors(RadioTable radios, RadioId tx) {
  std::vector<RadioId> out;
  for (RadioId id = 0; id < radios.size(); ++id) {
    if (id == tx || radios[id].profile == nullptr) continue;
    if (hears(radios, tx, id)) out.push_back(id);
  }
  return out;
}

GainDb system_max_gain(RadioTable radios) {
  double best = 0.0;
  bool any = false;
  for (const RadioView& r : radios) {
    if (r.profile == nullptr) continue;
    const double g = r.profile->antenna().max_gain().value;
    best = any ? std::max(best, g) : g;
    any = true;
  }
  return GainDb{best};
}

// ---------------------------------------------------------------------------

void NeighborProcedure::reset(RadioTable radios) {
  WallTimer t(stats_.wall_seconds);
  do_reset(radios);
}

void NeighborProcedure::on_register(RadioTable radios, RadioId radio) {
  check_id(radios, radio);
  WallTimer t(stats_.wall_seconds);
  do_register(radios, radio);
}

void NeighborProcedure::on_move(RadioTable radios, RadioId mover) {
  check_id(radios, mover);
  ++stats_.moves;
  WallTimer t(stats_.wall_seconds);
  do_move(radios, mover);
}

const std::vector<RadioId>& NeighborProcedure::delivery_set(RadioTable radios, RadioId tx) {
  check_id(radios, tx);
  ++stats_.transmits;
  WallTimer t(stats_.wall_seconds);
  return do_delivery_set(radios, tx);
}

std::unique_ptr<NeighborProcedure> make_procedure(ProcedureKind kind) {
  switch (kind) {
    case ProcedureKind::Symmetric:
      return std::make_unique<SymmetricProcedure>();
    case ProcedureKind::BruteForce:
      return std::make_unique<BruteForceProcedure>();
    case ProcedureKind::NeighborsGraph:
      return std::make_unique<GraphProcedure>();
  }
  throw ScenarioError("invalid procedure id " + std::to_string(static_cast<int>(kind)));
}

// --- Procedure 1 -------------------------------------------------------------

std::vector<RadioId> SymmetricProcedure::within_range(RadioTable radios, RadioId radio) const {
  std::vector<RadioId> out;
  const Position p = radios[radio].pos;
  for (RadioId id = 0; id < radios.size(); ++id) {
    if (id == radio || radios[id].profile == nullptr) continue;
    if (distance(p, radios[id].pos) <= d_max_) out.push_back(id);
  }
  return out;
}

void SymmetricProcedure::do_reset(RadioTable radios) {
  const RadioProfile* shared = nullptr;
  for (const RadioView& r : radios) {
    if (r.profile == nullptr) continue;
    if (shared == nullptr) {
      shared = r.profile;
    } else if (!(shared->config() == r.profile->config())) {
      throw ScenarioError("symmetric procedure requires identical radio configurations");
    }
  }
  lists_.assign(radios.size(), {});
  if (shared == nullptr) return;
  d_max_ = max_interference_distance(*shared, shared->antenna().max_gain());
  for (RadioId id = 0; id < radios.size(); ++id) {
    if (radios[id].profile != nullptr) lists_[id] = within_range(radios, id);
  }
  ++stats_.full_recomputes;
}

void SymmetricProcedure::do_register(RadioTable radios, RadioId) { do_reset(radios); }

void SymmetricProcedure::do_move(RadioTable radios, RadioId mover) {
  std::vector<RadioId> fresh = within_range(radios, mover);
  std::vector<RadioId>& old = lists_[mover];
  ++stats_.list_recomputes;

  std::vector<RadioId> gone;
  std::vector<RadioId> added;
  std::set_difference(old.begin(), old.end(), fresh.begin(), fresh.end(), std::back_inserter(gone));
  std::set_difference(fresh.begin(), fresh.end(), old.begin(), old.end(), std::back_inserter(added));
  for (RadioId r : gone) {
    auto& l = lists_[r];
    l.erase(std::lower_bound(l.begin(), l.end(), mover));
  }
  for (RadioId r : added) {
    auto& l = lists_[r];
    l.insert(std::lower_bound(l.begin(), l.end(), mover), mover);
  }
  old = std::move(fresh);
}

const std::vector<RadioId>& SymmetricProcedure::do_delivery_set(RadioTable, RadioId tx) { return lists_[tx]; }

// --- Procedure 2 -------------------------------------------------------------

void BruteForceProcedure::recompute_all(RadioTable radios) {
  if (reach_.size() != radios.size()) {
    // Coverage never extends past d_max; the slack absorbs rounding at the edge.
    const GainDb grx = system_max_gain(radios);
    reach_.assign(radios.size(), 0.0);
    for (RadioId id = 0; id < radios.size(); ++id) {
      if (radios[id].profile != nullptr) {
        const double d = max_interference_distance(*radios[id].profile, grx) * (1.0 + 1e-9);
        reach_[id] = d * d;
      }
    }
  }
  lists_.resize(radios.size());
  for (RadioId tx = 0; tx < radios.size(); ++tx) {
    std::vector<RadioId>& list = lists_[tx];
    list.clear();
    if (radios[tx].profile == nullptr) continue;
    const Position p = radios[tx].pos;
    for (RadioId rx = 0; rx < radios.size(); ++rx) {
      if (rx == tx || radios[rx].profile == nullptr) continue;
      const double dx = radios[rx].pos.x - p.x;
      const double dy = radios[rx].pos.y - p.y;
      if (dx * dx + dy * dy > reach_[tx]) continue;
      if (hears(radios, tx, rx)) list.push_back(rx);
    }
  }
  ++stats_.full_recomputes;
}

void BruteForceProcedure::do_reset(RadioTable radios) {
  reach_.clear();
  recompute_all(radios);
}
void BruteForceProcedure::do_register(RadioTable radios, RadioId) {
  reach_.clear();
  recompute_all(radios);
}
void BruteForceProcedure::do_move(RadioTable radios, RadioId) { recompute_all(radios); }

const std::vector<RadioId>& BruteForceProcedure::do_delivery_set(RadioTable radios, RadioId tx) {
  recompute_all(radios);
  return lists_[tx];
}

// --- Procedure 3 -------------------------------------------------------------

void GraphProcedure::do_reset(RadioTable radios) {
  graph_ = NeighborsGraph{};
  grx_max_ = system_max_gain(radios);
  cache_.assign(radios.size(), {});
  for (RadioId id = 0; id < radios.size(); ++id) {
    if (radios[id].profile == nullptr) continue;
    graph_.insert_radio(id, radios[id].pos, max_interference_distance(*radios[id].profile, grx_max_));
  }
}

void GraphProcedure::do_register(RadioTable radios, RadioId radio) {
  const GainDb g = radios[radio].profile->antenna().max_gain();
  if (graph_.size() == 0 || g.value > grx_max_.value) {
    // Every box must cover the strongest receiver; rebuild with the new bound.
    do_reset(radios);
    return;
  }
  if (cache_.size() < radios.size()) cache_.resize(radios.size());
  graph_.insert_radio(radio, radios[radio].pos, max_interference_distance(*radios[radio].profile, grx_max_));
  cache_[radio].valid = false;
  for (RadioId id = 0; id < radios.size(); ++id) {
    if (id != radio && graph_.contains(id) && graph_.in_range(id, radios[radio].pos)) {
      cache_[id].valid = false;
      ++stats_.invalidations;
    }
  }
}

void GraphProcedure::do_move(RadioTable radios, RadioId mover) {
  graph_.move_radio(mover, radios[mover].pos);
  NeighborQuery q = graph_.neighbors_and_updates(mover);
  ++stats_.list_recomputes;
  cache_[mover].candidates = std::move(q.candidates);
  cache_[mover].valid = true;
  for (RadioId r : q.to_update) {
    cache_[r].valid = false;
    ++stats_.invalidations;
  }
  last_to_update_ = std::move(q.to_update);
}

const std::vector<RadioId>& GraphProcedure::do_delivery_set(RadioTable radios, RadioId tx) {
  CachedCandidates& c = cache_[tx];
  if (!c.valid) {
    c.candidates = graph_.neighbors_and_updates(tx).candidates;
    c.valid = true;
    ++stats_.list_recomputes;
  }
  refined_ = refine_candidates(c.candidates, tx, radios);
  return refined_;
}

}  // namespace dirsim
