// SPDX-License-Identifier: Apache-2.0
#include "dirsim/neighbors_graph.hpp"

#include <algorithm>
#include <iterator>
#include <string>
#include <utility>

#include "dirsim/errors.hpp"

namespace dirsim {

namespace {

void sort_unique(std::vector<RadioId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

double along(Position p, Axis a) { return a == Axis::X ? p.x : p.y; }
double across(Position p, Axis a) { return a == Axis::X ? p.y : p.x; }

// Same arithmetic as the boundary entry coordinates, so membership agrees
// bit-for-bit with the sweep limits.
bool within(double v, double center, double d_max) { return v >= center - d_max && v <= center + d_max; }

}  // namespace

const NeighborsGraph::Record& NeighborsGraph::record(RadioId radio) const {
  if (radio >= records_.size() || !records_[radio].present) {
    throw ScenarioError("NeighborsGraph: unknown radio " + std::to_string(radio));
  }
  return records_[radio];
}

NeighborsGraph::Record& NeighborsGraph::record(RadioId radio) {
  return const_cast<Record&>(std::as_const(*this).record(radio));
}

bool NeighborsGraph::box_contains(const Record& r, Position p) {
  return within(p.x, r.pos.x, r.d_max) && within(p.y, r.pos.y, r.d_max);
}

bool NeighborsGraph::contains(RadioId radio) const { return radio < records_.size() && records_[radio].present; }

Position NeighborsGraph::position(RadioId radio) const { return record(radio).pos; }
Position NeighborsGraph::previous_position(RadioId radio) const { return record(radio).prev; }
double NeighborsGraph::d_max(RadioId radio) const { return record(radio).d_max; }
bool NeighborsGraph::in_range(RadioId radio, Position pos) const { return box_contains(record(radio), pos); }

void NeighborsGraph::insert_radio(RadioId radio, Position pos, double d_max) {
  if (contains(radio)) throw ScenarioError("NeighborsGraph: radio " + std::to_string(radio) + " already registered");
  if (!(d_max >= 0.0)) throw DomainError("NeighborsGraph: d_max must be non-negative");
  if (radio >= records_.size()) records_.resize(static_cast<std::size_t>(radio) + 1);
  Record& r = records_[radio];
  r.pos = pos;
  r.prev = pos;
  r.d_max = d_max;
  auto place = [&](std::set<AxisEntry>& axis, Iter(&entries)[3], double c) {
    entries[0] = axis.insert({c, EntryKind::Header, radio}).first;
    entries[1] = axis.insert({c - d_max, EntryKind::BoundaryLow, radio}).first;
    entries[2] = axis.insert({c + d_max, EntryKind::BoundaryHigh, radio}).first;
  };
  place(x_axis_, r.x, pos.x);
  place(y_axis_, r.y, pos.y);
  r.present = true;
  ++radio_count_;
}

void NeighborsGraph::remove_radio(RadioId radio) {
  Record& r = record(radio);
  for (int i = 0; i < 3; ++i) {
    x_axis_.erase(r.x[i]);
    y_axis_.erase(r.y[i]);
  }
  r = Record{};
  --radio_count_;
}

void NeighborsGraph::reposition(std::set<AxisEntry>& axis, Iter (&entries)[3], double center, double d_max) {
  const double coords[3] = {center, center - d_max, center + d_max};
  for (int i = 0; i < 3; ++i) {
    if (entries[i]->coordinate == coords[i]) continue;
    auto node = axis.extract(entries[i]);
    node.value().coordinate = coords[i];
    entries[i] = axis.insert(std::move(node)).position;
  }
}

void NeighborsGraph::move_radio(RadioId radio, Position new_pos) {
  Record& r = record(radio);
  r.prev = r.pos;
  r.pos = new_pos;
  reposition(x_axis_, r.x, new_pos.x, r.d_max);
  reposition(y_axis_, r.y, new_pos.y, r.d_max);
}

NeighborQuery NeighborsGraph::neighbors_and_updates(RadioId radio) const {
  const Record& self = record(radio);
  NeighborQuery out;
  std::size_t visits = 0;

  auto visit = [&](const AxisEntry& e, Axis axis) {
    ++visits;
    if (e.owner == radio) return;
    const Record& other = records_[e.owner];
    if (e.kind == EntryKind::Header) {
      if (within(across(other.pos, axis), across(self.pos, axis), self.d_max)) {
        out.candidates.push_back(e.owner);
      }
    } else if (box_contains(other, self.pos) != box_contains(other, self.prev)) {
      out.to_update.push_back(e.owner);
    }
  };

  auto walk_low = [&](Axis axis) {
    const std::set<AxisEntry>& entries = axis == Axis::X ? x_axis_ : y_axis_;
    const double limit = along(self.pos, axis) - self.d_max;
    auto it = axis == Axis::X ? self.x[0] : self.y[0];
    while (it != entries.begin()) {
      --it;
      if (it->coordinate < limit) break;
      visit(*it, axis);
    }
  };
  auto walk_high = [&](Axis axis) {
    const std::set<AxisEntry>& entries = axis == Axis::X ? x_axis_ : y_axis_;
    const double limit = along(self.pos, axis) + self.d_max;
    auto it = std::next(axis == Axis::X ? self.x[0] : self.y[0]);
    for (; it != entries.end() && it->coordinate <= limit; ++it) visit(*it, axis);
  };

  walk_low(Axis::X);
  walk_high(Axis::Y);
  walk_high(Axis::X);
  walk_low(Axis::Y);

  sort_unique(out.candidates);
  sort_unique(out.to_update);
  last_visits_ = visits;
  return out;
}

}  // namespace dirsim
