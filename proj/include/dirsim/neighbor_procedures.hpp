// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dirsim/neighbors_graph.hpp"
#include "dirsim/propagation.hpp"

namespace dirsim {

/// Current pose of a registered radio. Tables are indexed by RadioId.
struct RadioView {
  Position pos;
  const RadioProfile* profile = nullptr;
};

using RadioTable = std::span<const RadioView>;

/// Whether `rx` detects frames sent by `tx`, using the receiver's actual gain toward the transmitter.
bool hears(RadioTable radios, RadioId tx, RadioId rx);

/// Keeps the candidates that detect `tx`; preserves input order.
std::vector<RadioId> refine_candidates(std::span<const RadioId> candidates, RadioId tx, RadioTable radios);

/// Linear scan over every other radio. Sorted output.
std::vector<RadioId> brute_force_neighbors(RadioTable radios, RadioId tx);

/// Largest antenna gain over all registered radios (omni antennas count as 0 dBi).
GainDb system_max_gain(RadioTable radios);

enum class ProcedureKind : int { Symmetric = 1, BruteForce = 2, NeighborsGraph = 3 };

struct MaintenanceStats {
  std::uint64_t moves = 0;
  std::uint64_t transmits = 0;
  std::uint64_t full_recomputes = 0;  // every list rebuilt
  std::uint64_t list_recomputes = 0;  // a single list rebuilt
  std::uint64_t invalidations = 0;
  double wall_seconds = 0.0;
};

/// Neighbor-list maintenance strategy. A radio's list holds the radios that
/// detect its transmissions. Callers update the table before notifying moves.
class NeighborProcedure {
 public:
  virtual ~NeighborProcedure() = default;

  void reset(RadioTable radios);
  void on_register(RadioTable radios, RadioId radio);
  void on_move(RadioTable radios, RadioId mover);
  /// The list consulted when `tx` transmits. Valid until the next call.
  const std::vector<RadioId>& delivery_set(RadioTable radios, RadioId tx);

  virtual ProcedureKind kind() const = 0;
  const MaintenanceStats& stats() const { return stats_; }

 protected:
  virtual void do_reset(RadioTable radios) = 0;
  virtual void do_register(RadioTable radios, RadioId radio) = 0;
  virtual void do_move(RadioTable radios, RadioId mover) = 0;
  virtual const std::vector<RadioId>& do_delivery_set(RadioTable radios, RadioId tx) = 0;

  MaintenanceStats stats_;
};

std::unique_ptr<NeighborProcedure> make_procedure(ProcedureKind kind);

/// Procedure 1: one shared d_max, lists kept by a distance test on moves and
/// mirrored into the other radios' lists. Requires identical configs.
class SymmetricProcedure final : public NeighborProcedure {
 public:
  ProcedureKind kind() const override { return ProcedureKind::Symmetric; }
  double shared_d_max() const { return d_max_; }
  const std::vector<RadioId>& list(RadioId radio) const { return lists_.at(radio); }

 protected:
  void do_reset(RadioTable radios) override;
  void do_register(RadioTable radios, RadioId radio) override;
  void do_move(RadioTable radios, RadioId mover) override;
  const std::vector<RadioId>& do_delivery_set(RadioTable radios, RadioId tx) override;

 private:
  std::vector<RadioId> within_range(RadioTable radios, RadioId radio) const;

  double d_max_ = 0.0;
  std::vector<std::vector<RadioId>> lists_;
};

/// Procedure 2: every list recomputed by brute force on every move and transmit.
class BruteForceProcedure final : public NeighborProcedure {
 public:
  ProcedureKind kind() const override { return ProcedureKind::BruteForce; }

 protected:
  void do_reset(RadioTable radios) override;
  void do_register(RadioTable radios, RadioId radio) override;
  void do_move(RadioTable radios, RadioId mover) override;
  const std::vector<RadioId>& do_delivery_set(RadioTable radios, RadioId tx) override;

 private:
  void recompute_all(RadioTable radios);

  std::vector<std::vector<RadioId>> lists_;
  std::vector<double> reach_;  // squared d_max per radio
};

/// Procedure 3: box candidates from the NeighborsGraph, invalidated
/// selectively on moves, recomputed lazily and refined by the coverage test
/// at transmit time.
class GraphProcedure final : public NeighborProcedure {
 public:
  ProcedureKind kind() const override { return ProcedureKind::NeighborsGraph; }
  const NeighborsGraph& graph() const { return graph_; }
  bool is_valid(RadioId radio) const { return cache_.at(radio).valid; }
  /// Update set produced by the most recent move.
  const std::vector<RadioId>& last_to_update() const { return last_to_update_; }
  GainDb receiver_gain_bound() const { return grx_max_; }

 protected:
  void do_reset(RadioTable radios) override;
  void do_register(RadioTable radios, RadioId radio) override;
  void do_move(RadioTable radios, RadioId mover) override;
  const std::vector<RadioId>& do_delivery_set(RadioTable radios, RadioId tx) override;

 private:
  struct CachedCandidates {
    std::vector<RadioId> candidates;
    bool valid = false;
  };

  NeighborsGraph graph_;
  GainDb grx_max_{0.0};
  std::vector<CachedCandidates> cache_;
  std::vector<RadioId> last_to_update_;
  std::vector<RadioId> refined_;
};

}  // namespace dirsim
