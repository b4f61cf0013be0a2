// SPDX-License-Identifier: Apache-2.0
#include "dirsim/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <set>

#include "dirsim/errors.hpp"

namespace dirsim {

namespace {

constexpr const char* kScn = kScenarioProfile;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// First profile whose leading component starts with `name` (ap matches ap1.wlan.radio).
std::optional<std::string> find_profile(const ConfigDocument& doc, std::string_view name) {
  for (const std::string& p : doc.radio_profiles()) {
    const std::string_view head = std::string_view(p).substr(0, p.find('.'));
    if (head.starts_with(name)) return p;
  }
  return std::nullopt;
}

// Reads a scenario parameter and records the value used in `resolved`.
double scenario_param(const ConfigDocument& doc, ConfigDocument& resolved, const char* name, double fallback) {
  const double v = doc.number(kScn, name, fallback);
  resolved.set_number(kScn, name, v);
  return v;
}

int count_param(const ConfigDocument& doc, ConfigDocument& resolved, const char* name, double fallback, int lo) {
  const double v = scenario_param(doc, resolved, name, fallback);
  if (v != std::floor(v) || v < lo || v > 1e7) {
    throw ConfigError(std::string(name) + " must be an integer >= " + std::to_string(lo));
  }
  return static_cast<int>(v);
}

MacParams mac_params(const ConfigDocument& doc, ConfigDocument& resolved) {
  MacParams m;
  m.slot = scenario_param(doc, resolved, "slotTime", m.slot);
  m.sifs = scenario_param(doc, resolved, "sifs", m.sifs);
  m.difs = scenario_param(doc, resolved, "difs", m.difs);
  m.cw_min = count_param(doc, resolved, "cwMin", m.cw_min, 1);
  m.cw_max = count_param(doc, resolved, "cwMax", m.cw_max, m.cw_min);
  m.max_retries = count_param(doc, resolved, "maxRetries", m.max_retries, 0);
  m.queue_capacity = static_cast<std::size_t>(count_param(doc, resolved, "queueCapacity", 50, 1));
  m.ack_bits = count_param(doc, resolved, "ackBits", static_cast<double>(m.ack_bits), 1);
  return m;
}

void write_header(std::ostream& out, const ConfigDocument& resolved) { out << serialize_config(resolved, "# "); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// pattern sweep

PatternSweepResult run_pattern_sweep(const ConfigDocument& doc) {
  PatternSweepResult result;
  ConfigDocument& resolved = result.resolved;

  std::optional<std::string> ap_profile = find_profile(doc, "ap");
  if (!ap_profile) {
    const auto profiles = doc.radio_profiles();
    if (profiles.size() != 1) throw ScenarioError("pattern-sweep: no AP radio profile in config");
    ap_profile = profiles.front();
  }
  if (doc.find(*ap_profile, "patternType") == nullptr || doc.text(*ap_profile, "patternType", "") == "Omni") {
    throw ScenarioError("pattern-sweep: profile " + *ap_profile + " has no directional antenna block");
  }
  result.ap = radio_config_from(doc, *ap_profile);
  const std::optional<std::string> host_profile = find_profile(doc, "host");
  const RadioConfig host = host_profile ? radio_config_from(doc, *host_profile) : RadioConfig{};

  const double size_x = scenario_param(doc, resolved, "playgroundSizeX", 250.0);
  const double size_y = scenario_param(doc, resolved, "playgroundSizeY", 250.0);
  const int rings = count_param(doc, resolved, "numRings", 10, 1);
  const double spacing = scenario_param(doc, resolved, "ringSpacing", 10.0);
  const double period = scenario_param(doc, resolved, "orbitPeriod", 36.0);
  const double interval = scenario_param(doc, resolved, "beaconInterval", 0.1);
  const auto bits = static_cast<std::int64_t>(count_param(doc, resolved, "beaconBits", 1000, 1));
  const double tick = scenario_param(doc, resolved, "mobilityTick", interval);
  append_radio_config(resolved, *ap_profile, result.ap);
  append_radio_config(resolved, host_profile.value_or("host"), host);

  if (!(spacing > 0.0 && period > 0.0 && interval > 0.0 && tick > 0.0)) {
    throw ConfigError("pattern-sweep: ringSpacing, orbitPeriod, beaconInterval and mobilityTick must be positive");
  }
  const Position center{size_x / 2.0, size_y / 2.0};
  const Playground ground{0.0, 0.0, size_x, size_y};
  if (!ground.contains(Position{center.x + rings * spacing, center.y}) ||
      !ground.contains(Position{center.x - rings * spacing, center.y - rings * spacing})) {
    throw ScenarioError("pattern-sweep: outer ring does not fit in the playground");
  }

  SimOptions opts;
  opts.mobility_tick = tick;
  Simulation sim(opts);
  const HostId ap_host = sim.add_host(StationaryMobility{center});
  const RadioId ap = sim.add_radio(ap_host, result.ap);
  if (interval <= sim.frame_duration(ap, bits)) throw ConfigError("beaconInterval shorter than one beacon frame");
  for (int k = 1; k <= rings; ++k) {
    const HostId h = sim.add_host(CircularOrbitMobility{center, k * spacing, 2.0 * kPi / period, 0.0});
    sim.add_radio(h, host);
  }

  sim.set_reception_observer([&](RadioId, const AirFrame& f, const Reception& r, ReceptionOutcome outcome) {
    if (f.transmitter != ap) return;
    PatternSample s;
    s.time = f.t_start;
    s.angle_deg = link_bearing(f.tx_pos, r.rx_pos).value();
    s.radius_m = distance(f.tx_pos, r.rx_pos);
    s.prx_dbm = r.prx_dbm;
    s.received = outcome == ReceptionOutcome::Received;
    result.samples.push_back(s);
  });

  const auto beacons = static_cast<std::int64_t>(std::llround(period / interval));
  std::uint32_t seq = 0;
  for (std::int64_t k = 0; k < beacons; ++k) {
    sim.schedule(static_cast<double>(k) * interval, "beacon", ap, [&sim, ap, bits, &seq] {
      MacHeader h;
      h.type = FrameType::Beacon;
      h.source = ap;
      h.sequence = ++seq;
      Packet p;
      p.id = seq;
      p.origin = ap;
      p.bits = bits;
      p.created = sim.now();
      sim.transmit_frame(ap, h, p, bits);
    });
  }
  sim.run(period);
  return result;
}

void write_pattern_csv(std::ostream& out, const PatternSweepResult& result) {
  write_header(out, result.resolved);
  out << "angle_deg,radius_m,prx_dbm,received\n";
  for (const PatternSample& s : result.samples) {
    out << fmt(s.angle_deg) << ',' << fmt(s.radius_m) << ',' << fmt(s.prx_dbm) << ',' << (s.received ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// mesh

const char* antenna_mode_name(AntennaMode mode) { return mode == AntennaMode::Omni ? "omni" : "directional"; }

namespace {

RadioConfig default_mesh_omni() {
  RadioConfig c;
  c.transmitter_power_mw = 1.0;
  c.sensitivity_dbm = -85.0;
  c.detection_threshold_dbm = -89.0;  // noise floor 4 dB under sensitivity
  return c;
}

RadioConfig default_mesh_directional() {
  RadioConfig c = default_mesh_omni();
  c.transmitter_power_mw = dbm_to_mw(PowerDbm{-16.5}).value;
  c.antenna = AntennaPatternConfig{};
  return c;
}

struct MeshSetup {
  RadioConfig omni;
  RadioConfig directional;
  MacParams mac;
  int relays = 10;
  double spacing = 145.0;
  double interval = 5e-3;
  std::int64_t bits = 1000;
  double duration = 5.0;
};

MeshSetup mesh_setup(const ConfigDocument& doc, ConfigDocument& resolved, AntennaMode mode) {
  MeshSetup s;
  s.relays = count_param(doc, resolved, "numRelays", 10, 1);
  s.spacing = scenario_param(doc, resolved, "relaySpacing", 145.0);
  s.interval = scenario_param(doc, resolved, "packetInterval", 5e-3);
  s.bits = count_param(doc, resolved, "packetBits", 1000, 0);
  s.duration = scenario_param(doc, resolved, "duration", 5.0);
  if (!(s.spacing > 0.0 && s.interval > 0.0 && s.duration > 0.0)) {
    throw ConfigError("mesh: relaySpacing, packetInterval and duration must be positive");
  }
  s.mac = mac_params(doc, resolved);
  const auto omni_profile = find_profile(doc, "omni");
  const auto dir_profile = find_profile(doc, "directional");
  s.omni = omni_profile ? radio_config_from(doc, *omni_profile, default_mesh_omni()) : default_mesh_omni();
  s.directional =
      dir_profile ? radio_config_from(doc, *dir_profile, default_mesh_directional()) : default_mesh_directional();
  if (s.omni.antenna) throw ConfigError("mesh: the omni profile must not set a directional patternType");
  if (!s.directional.antenna) throw ConfigError("mesh: the directional profile needs a patternType");
  append_radio_config(resolved, omni_profile.value_or("omni"), s.omni);
  if (mode == AntennaMode::Directional) append_radio_config(resolved, dir_profile.value_or("directional"), s.directional);
  return s;
}

// One hop of the forwarding path: frames from `tx` are addressed to `rx`.
struct Hop {
  RadioId tx;
  RadioId rx;
};

void start_traffic(Simulation& sim, RadioId source, RadioId first_hop, const MeshSetup& s, std::uint64_t& offered) {
  if (s.bits == 0) return;
  const auto count = static_cast<std::int64_t>(std::floor(s.duration / s.interval));
  for (std::int64_t k = 0; k < count; ++k) {
    sim.schedule(static_cast<double>(k) * s.interval, "generate", source, [&sim, source, first_hop, &s, &offered, k] {
      Packet p;
      p.id = static_cast<std::uint64_t>(k) + 1;
      p.origin = source;
      p.bits = s.bits;
      p.created = sim.now();
      ++offered;
      sim.mac(source).send(p, first_hop);
    });
  }
}

MeshRadioRow radio_row(Simulation& sim, RadioId id, std::string label) {
  const RadioStats& st = sim.radio_stats(id);
  return MeshRadioRow{id, std::move(label), st.frames_sent, st.frames_received, st.frames_lost_collision,
                      st.mac_drops + st.queue_drops};
}

}  // namespace

MeshResult run_mesh(const ConfigDocument& doc, AntennaMode mode, std::uint64_t seed, const MeshOptions& options) {
  MeshResult result;
  ConfigDocument& resolved = result.resolved;
  resolved.set_text(kScn, "antennaMode", antenna_mode_name(mode));
  resolved.set_number(kScn, "seed", static_cast<double>(seed));
  const MeshSetup s = mesh_setup(doc, resolved, mode);

  SimOptions opts;
  opts.seed = seed;
  opts.mac = s.mac;
  opts.trace = options.trace;
  Simulation sim(opts);

  const double y = 100.0;
  auto at = [&](int slot) { return Position{s.spacing * slot, y}; };
  RadioConfig left = s.omni;
  RadioConfig right = s.omni;
  if (mode == AntennaMode::Directional) {
    left = s.directional;
    right = s.directional;
    left.antenna->main_lobe_orientation_deg = 180.0;
    right.antenna->main_lobe_orientation_deg = 0.0;
  }

  const RadioId client1 = sim.add_radio(sim.add_host(StationaryMobility{at(0)}), s.omni);
  std::vector<RadioId> lefts;
  std::vector<RadioId> rights;
  for (int i = 1; i <= s.relays; ++i) {
    const HostId h = sim.add_host(StationaryMobility{at(i)});
    lefts.push_back(sim.add_radio(h, left));
    rights.push_back(sim.add_radio(h, right));
  }
  const RadioId client2 = sim.add_radio(sim.add_host(StationaryMobility{at(s.relays + 1)}), s.omni);

  // Bridge: whatever a left radio receives goes out on its sibling.
  for (int i = 0; i < s.relays; ++i) {
    const RadioId out = rights[i];
    const RadioId next = i + 1 < s.relays ? lefts[i + 1] : client2;
    sim.set_packet_handler(lefts[i], [&sim, out, next](const Packet& p) { sim.mac(out).send(p, next); });
  }
  sim.set_packet_handler(client2, [&sim, &result](const Packet& p) {
    ++result.packets_delivered;
    sim.record_delivered_bits(p.bits);
  });
  start_traffic(sim, client1, lefts.front(), s, result.packets_offered);

  const SimStats stats = sim.run(s.duration);
  result.throughput_bps = stats.throughput_bps();

  result.radios.push_back(radio_row(sim, client1, "client1"));
  for (int i = 0; i < s.relays; ++i) {
    const std::string name = "relay" + std::to_string(i + 1);
    result.radios.push_back(radio_row(sim, lefts[i], name + ".left"));
    result.radios.push_back(radio_row(sim, rights[i], name + ".right"));
    result.relay_collisions.push_back(sim.radio_stats(lefts[i]).frames_lost_collision +
                                      sim.radio_stats(rights[i]).frames_lost_collision);
  }
  result.radios.push_back(radio_row(sim, client2, "client2"));
  for (const MeshRadioRow& r : result.radios) result.total_losses += r.losses;
  return result;
}

MeshResult run_single_hop(const ConfigDocument& doc, std::uint64_t seed) {
  MeshResult result;
  result.resolved.set_text(kScn, "antennaMode", "singleHop");
  result.resolved.set_number(kScn, "seed", static_cast<double>(seed));
  const MeshSetup s = mesh_setup(doc, result.resolved, AntennaMode::Omni);

  SimOptions opts;
  opts.seed = seed;
  opts.mac = s.mac;
  Simulation sim(opts);
  const RadioId client1 = sim.add_radio(sim.add_host(StationaryMobility{Position{0.0, 100.0}}), s.omni);
  const RadioId client2 = sim.add_radio(sim.add_host(StationaryMobility{Position{s.spacing, 100.0}}), s.omni);
  sim.set_packet_handler(client2, [&sim, &result](const Packet& p) {
    ++result.packets_delivered;
    sim.record_delivered_bits(p.bits);
  });
  start_traffic(sim, client1, client2, s, result.packets_offered);
  const SimStats stats = sim.run(s.duration);
  result.throughput_bps = stats.throughput_bps();
  result.radios.push_back(radio_row(sim, client1, "client1"));
  result.radios.push_back(radio_row(sim, client2, "client2"));
  for (const MeshRadioRow& r : result.radios) result.total_losses += r.losses;
  return result;
}

void write_mesh_csv(std::ostream& out, const MeshResult& result) {
  write_header(out, result.resolved);
  out << "radio_id,sent,received,collisions,losses\n";
  for (const MeshRadioRow& r : result.radios) {
    out << r.id << ',' << r.sent << ',' << r.received << ',' << r.collisions << ',' << r.losses << '\n';
  }
  out << "throughput_bps," << fmt(result.throughput_bps) << '\n';
}

// ---------------------------------------------------------------------------
// bench

namespace {

RadioConfig default_bench_radio() {
  RadioConfig c;
  c.transmitter_power_mw = 1.0;
  c.sensitivity_dbm = -85.0;
  c.detection_threshold_dbm = -85.0;
  return c;
}

struct BenchSetup {
  RadioConfig host;
  RadioConfig ap;
  MacParams mac;
  double size_x = 1000.0;
  double size_y = 1000.0;
  double duration = 500.0;
  double tick = 1.0;
  double speed_min = 0.0;
  double speed_max = 40.0 / 3.6;
  double pause = 0.0;
  double probe_interval = 1.0;
  std::int64_t probe_bits = 512;
  std::uint64_t seed = 1;
};

double run_bench_once(const BenchSetup& b, ProcedureKind kind, int hosts, std::uint64_t seed, BenchRow& row) {
  const auto t0 = std::chrono::steady_clock::now();
  SimOptions opts;
  opts.procedure = kind;
  opts.mobility_tick = b.tick;
  opts.seed = seed;
  opts.mac = b.mac;
  Simulation sim(opts);

  std::vector<RadioId> aps;
  for (int i = 0; i < 4; ++i) {
    const Position p{b.size_x * (i % 2 == 0 ? 0.25 : 0.75), b.size_y * (i < 2 ? 0.25 : 0.75)};
    aps.push_back(sim.add_radio(sim.add_host(StationaryMobility{p}), b.ap));
  }
  std::mt19937_64 traffic(sim.stream_seed(Simulation::kTrafficStream, 0));
  std::uniform_real_distribution<double> ux(0.0, b.size_x);
  std::uniform_real_distribution<double> uy(0.0, b.size_y);
  std::uniform_real_distribution<double> offset(0.0, b.probe_interval);
  std::vector<RadioId> radios;
  for (int i = 0; i < hosts; ++i) {
    RandomWaypointParams rw;
    rw.bounds = Playground{0.0, 0.0, b.size_x, b.size_y};
    rw.speed_min = b.speed_min;
    rw.speed_max = b.speed_max;
    rw.pause = b.pause;
    rw.start = Position{ux(traffic), uy(traffic)};
    const auto h = sim.add_host(
        RandomWaypointMobility(rw, sim.stream_seed(Simulation::kMobilityStream, static_cast<std::uint64_t>(i))));
    radios.push_back(sim.add_radio(h, b.host));
  }

  for (RadioId r : radios) {
    const double first = offset(traffic);
    const auto probes = static_cast<std::int64_t>(std::floor((b.duration - first) / b.probe_interval)) + 1;
    for (std::int64_t k = 0; k < probes; ++k) {
      const double t = first + static_cast<double>(k) * b.probe_interval;
      if (t > b.duration) break;
      sim.schedule(t, "probe", r, [&sim, &aps, r, k, bits = b.probe_bits] {
        RadioId best = aps.front();
        double best_d = distance(sim.position(r), sim.position(best));
        for (RadioId a : aps) {
          const double d = distance(sim.position(r), sim.position(a));
          if (d < best_d) {
            best = a;
            best_d = d;
          }
        }
        Packet p;
        p.id = static_cast<std::uint64_t>(k) + 1;
        p.origin = r;
        p.final_destination = best;
        p.bits = bits;
        p.created = sim.now();
        sim.mac(r).send(p, best);
      });
    }
  }
  const SimStats stats = sim.run(b.duration);
  row.maintenance = stats.maintenance;
  row.events = stats.events;
  row.neighbor_wall_ms = stats.maintenance.wall_seconds * 1e3;
  return seconds_since(t0) * 1e3;
}

}  // namespace

BenchResult run_bench(const ConfigDocument& doc, int procedure, int hosts, int repeats) {
  if (procedure < 1 || procedure > 3) throw ScenarioError("unknown procedure " + std::to_string(procedure));
  if (hosts < 0) throw ScenarioError("host count must not be negative");
  if (repeats < 0) throw ScenarioError("repeat count must not be negative");
  BenchResult result;
  ConfigDocument& resolved = result.resolved;
  resolved.set_number(kScn, "numHosts", hosts);
  resolved.set_number(kScn, "repetitions", repeats);

  BenchSetup b;
  b.size_x = scenario_param(doc, resolved, "playgroundSizeX", b.size_x);
  b.size_y = scenario_param(doc, resolved, "playgroundSizeY", b.size_y);
  b.duration = scenario_param(doc, resolved, "duration", b.duration);
  b.tick = scenario_param(doc, resolved, "mobilityTick", b.tick);
  b.speed_min = scenario_param(doc, resolved, "speedMin", b.speed_min);
  b.speed_max = scenario_param(doc, resolved, "speedMax", b.speed_max);
  b.pause = scenario_param(doc, resolved, "pauseTime", b.pause);
  b.probe_interval = scenario_param(doc, resolved, "probeInterval", b.probe_interval);
  b.probe_bits = count_param(doc, resolved, "probeBits", 512, 1);
  b.seed = static_cast<std::uint64_t>(count_param(doc, resolved, "seed", 1, 0));
  b.mac = mac_params(doc, resolved);
  if (!(b.size_x > 0.0 && b.size_y > 0.0 && b.duration > 0.0 && b.tick > 0.0 && b.probe_interval > 0.0)) {
    throw ConfigError("bench: playground, duration, mobilityTick and probeInterval must be positive");
  }

  const auto host_profile = find_profile(doc, "host");
  const auto ap_profile = find_profile(doc, "ap");
  b.host = host_profile ? radio_config_from(doc, *host_profile, default_bench_radio()) : default_bench_radio();
  b.ap = ap_profile ? radio_config_from(doc, *ap_profile, b.host) : b.host;
  append_radio_config(resolved, host_profile.value_or("host"), b.host);
  append_radio_config(resolved, ap_profile.value_or("ap"), b.ap);
  const auto kind = static_cast<ProcedureKind>(procedure);
  if (kind == ProcedureKind::Symmetric && (!(b.host == b.ap) || b.host.antenna)) {
    throw ScenarioError("procedure 1 requires identical omni-directional radio configs");
  }

  for (int rep = 0; rep < repeats; ++rep) {
    BenchRow row;
    row.procedure = procedure;
    row.repetition = rep;
    row.total_wall_ms = run_bench_once(b, kind, hosts, b.seed + static_cast<std::uint64_t>(rep), row);
    result.rows.push_back(row);
  }
  return result;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  write_header(out, result.resolved);
  out << "procedure,repetition,neighbor_wall_ms,total_wall_ms\n";
  for (const BenchRow& r : result.rows) {
    out << r.procedure << ',' << r.repetition << ',' << fmt(r.neighbor_wall_ms) << ',' << fmt(r.total_wall_ms) << '\n';
  }
}

}  // namespace dirsim
