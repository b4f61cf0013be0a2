// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "dirsim/config.hpp"
#include "dirsim/simulation.hpp"

namespace dirsim {

// Pattern sweep: one directional AP at the playground center beaconing to
// omni hosts that orbit it on concentric rings, all starting at 0 degrees.

struct PatternSample {
  double time = 0.0;
  double angle_deg = 0.0;  // bearing from the AP to the host
  double radius_m = 0.0;
  double prx_dbm = 0.0;
  bool received = false;
};

struct PatternSweepResult {
  ConfigDocument resolved;
  RadioConfig ap;
  std::vector<PatternSample> samples;
};

PatternSweepResult run_pattern_sweep(const ConfigDocument& doc);
void write_pattern_csv(std::ostream& out, const PatternSweepResult& result);

// Mesh: client1 -> N dual-radio relays in a straight line -> client2, one
// shared channel, hop-by-hop CSMA with ACKs.

enum class AntennaMode { Omni, Directional };

const char* antenna_mode_name(AntennaMode mode);

struct MeshRadioRow {
  RadioId id = 0;
  std::string label;  // client1, relay3.left, ...
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  std::uint64_t collisions = 0;
  std::uint64_t losses = 0;  // packets given up: retry limit or full queue
};

struct MeshResult {
  ConfigDocument resolved;
  std::vector<MeshRadioRow> radios;
  std::vector<std::uint64_t> relay_collisions;  // both radios of relay i summed
  std::uint64_t total_losses = 0;
  std::uint64_t packets_offered = 0;
  std::uint64_t packets_delivered = 0;
  double throughput_bps = 0.0;
};

struct MeshOptions {
  std::ostream* trace = nullptr;
};

MeshResult run_mesh(const ConfigDocument& doc, AntennaMode mode, std::uint64_t seed, const MeshOptions& options = {});

/// The same offered load from client1 to client2 placed one relay spacing apart.
MeshResult run_single_hop(const ConfigDocument& doc, std::uint64_t seed);

void write_mesh_csv(std::ostream& out, const MeshResult& result);

// Bench: random-waypoint hosts probing their nearest of four APs, timed per
// neighbor-maintenance procedure.

struct BenchRow {
  int procedure = 0;
  int repetition = 0;
  double neighbor_wall_ms = 0.0;
  double total_wall_ms = 0.0;
  MaintenanceStats maintenance;
  std::uint64_t events = 0;
};

struct BenchResult {
  ConfigDocument resolved;
  std::vector<BenchRow> rows;
};

/// Throws ScenarioError for an unknown procedure id or for procedure 1 with
/// non-identical radio configs.
BenchResult run_bench(const ConfigDocument& doc, int procedure, int hosts, int repeats);
void write_bench_csv(std::ostream& out, const BenchResult& result);

}  // namespace dirsim
