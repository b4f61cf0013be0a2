// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "dirsim/units.hpp"

namespace dirsim {

using RadioId = std::uint32_t;

enum class Axis : std::uint8_t { X = 0, Y = 1 };

/// Header entries mark a radio's position on an axis; boundary entries mark
/// the low and high limits of its coverage box on that axis.
enum class EntryKind : std::uint8_t { Header = 0, BoundaryLow = 1, BoundaryHigh = 2 };

struct AxisEntry {
  double coordinate = 0.0;
  EntryKind kind = EntryKind::Header;
  RadioId owner = 0;

  // Ties on coordinate are broken by (kind, owner) so iteration is deterministic.
  friend auto operator<=>(const AxisEntry&, const AxisEntry&) = default;
};

struct NeighborQuery {
  std::vector<RadioId> candidates;  // radios whose header lies inside the querying radio's box
  std::vector<RadioId> to_update;   // radios whose box membership of the querier changed
};

/// Sparse-matrix style index of moving radios: two ordered axes (red-black
/// trees) holding one header and two boundary entries per radio each.
///
/// A radio's box is the closed square [x - d_max, x + d_max] x [y - d_max, y + d_max].
/// The update set of a query is exact only when the last move changed each
/// coordinate by at most the mover's own d_max.
class NeighborsGraph {
 public:
  void insert_radio(RadioId radio, Position pos, double d_max);
  void move_radio(RadioId radio, Position new_pos);
  void remove_radio(RadioId radio);

  /// Axis sweep x-left, y-right, x-right, y-left from the radio's headers to
  /// its box limits.
  NeighborQuery neighbors_and_updates(RadioId radio) const;

  bool contains(RadioId radio) const;
  std::size_t size() const { return radio_count_; }
  Position position(RadioId radio) const;
  Position previous_position(RadioId radio) const;
  double d_max(RadioId radio) const;

  /// Whether `pos` lies in the box of `radio` (inclusive).
  bool in_range(RadioId radio, Position pos) const;

  const std::set<AxisEntry>& axis(Axis a) const { return a == Axis::X ? x_axis_ : y_axis_; }

  /// Number of header/boundary entries visited by the last query (benchmark instrumentation).
  std::size_t last_visit_count() const { return last_visits_; }

 private:
  using Iter = std::set<AxisEntry>::iterator;

  struct Record {
    bool present = false;
    Position pos;
    Position prev;
    double d_max = 0.0;
    Iter x[3];
    Iter y[3];
  };

  const Record& record(RadioId radio) const;
  Record& record(RadioId radio);
  static bool box_contains(const Record& r, Position p);
  void reposition(std::set<AxisEntry>& axis, Iter (&entries)[3], double center, double d_max);

  std::set<AxisEntry> x_axis_;
  std::set<AxisEntry> y_axis_;
  std::vector<Record> records_;
  std::size_t radio_count_ = 0;
  mutable std::size_t last_visits_ = 0;
};

}  // namespace dirsim
