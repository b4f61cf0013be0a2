// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dirsim/errors.hpp"
#include "dirsim/simulation.hpp"
#include "oracles.hpp"

using namespace dirsim;

namespace {

RadioConfig omni(double detection = -85.0, double sensitivity = -85.0) {
  RadioConfig c;
  c.transmitter_power_mw = 1.0;
  c.detection_threshold_dbm = detection;
  c.sensitivity_dbm = sensitivity;
  return c;
}

RadioConfig ap_radio() {
  RadioConfig r = omni();
  r.transmitter_power_mw = 40.0;
  AntennaPatternConfig a;
  a.family = FoliumCurve{1.0, 3.0};
  a.main_lobe_orientation_deg = 90.0;
  r.antenna = a;
  return r;
}

HostId fixed(Simulation& sim, double x, double y) { return sim.add_host(StationaryMobility{{x, y}}); }

void beacon_at(Simulation& sim, double t, RadioId tx, std::int64_t bits = 1000) {
  sim.schedule(t, "beacon", tx, [&sim, tx, bits] {
    MacHeader h;
    h.type = FrameType::Beacon;
    h.source = tx;
    sim.transmit_frame(tx, h, Packet{}, bits);
  });
}

// Periodic unicast traffic to random peers, drawn from the traffic stream.
void add_traffic(Simulation& sim, RadioId src, std::size_t n, double interval, double stop) {
  auto rng = std::make_shared<std::mt19937_64>(sim.stream_seed(Simulation::kTrafficStream, src));
  auto tick = std::make_shared<std::function<void()>>();
  *tick = [&sim, src, n, interval, stop, rng, weak = std::weak_ptr(tick)] {
    std::uniform_int_distribution<RadioId> peer(0, static_cast<RadioId>(n - 2));
    RadioId dst = peer(*rng);
    if (dst >= src) ++dst;
    Packet p;
    p.origin = src;
    p.final_destination = dst;
    p.bits = 800;
    p.created = sim.now();
    sim.mac(src).send(p, dst);
    std::exponential_distribution<double> gap(1.0 / interval);
    const double next = sim.now() + gap(*rng);
    if (next < stop) {
      auto self = weak.lock();
      sim.schedule(next, "traffic", src, [self] { (*self)(); });
    }
  };
  sim.schedule(interval * (1.0 + src % 7) / 8.0, "traffic", src, [tick] { (*tick)(); });
}

struct World {
  SimStats stats;
  std::string trace;
};

World random_world(std::uint64_t seed, ProcedureKind proc = ProcedureKind::NeighborsGraph, bool with_trace = true) {
  std::ostringstream out;
  SimOptions o;
  o.seed = seed;
  o.procedure = proc;
  o.mobility_tick = 0.1;
  if (with_trace) o.trace = &out;
  Simulation sim(o);
  const std::size_t n = 12;
  for (std::size_t h = 0; h < n; ++h) {
    RandomWaypointParams p;
    p.bounds = Playground{0.0, 0.0, 300.0, 300.0};
    p.speed_min = 5.0;
    p.speed_max = 15.0;
    p.pause = 0.5;
    p.start = {25.0 * h, 300.0 - 20.0 * h};
    const HostId host = sim.add_host(RandomWaypointMobility(p, sim.stream_seed(Simulation::kMobilityStream, h)));
    sim.add_radio(host, omni(-85.0, -82.0));
  }
  for (RadioId r = 0; r < n; ++r) add_traffic(sim, r, n, 0.05, 12.0);
  World w;
  w.stats = sim.run(20.0);
  w.trace = out.str();
  return w;
}

std::map<std::string, std::string> fields_of(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string tok;
  int col = 0;
  while (std::getline(in, tok, '\t')) {
    if (col == 0) out["time"] = tok;
    else if (col == 1) out["kind"] = tok;
    else if (col == 2) out["radio"] = tok;
    else {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    ++col;
  }
  return out;
}

}  // namespace

TEST_CASE("mobility positions") {
  const double period = 36.0;
  MobilityModel orbit = CircularOrbitMobility{{0.0, 0.0}, 10.0, 2.0 * oracle::pi / period, 0.0};
  const Position p0 = mobility_position(orbit, 0.0);
  CHECK(p0.x == doctest::Approx(10.0));
  CHECK(p0.y == doctest::Approx(0.0));
  const Position q = mobility_position(orbit, period / 4);
  CHECK(q.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.y == doctest::Approx(10.0));
  MobilityModel line = LinearMobility{{0.0, 0.0}, 1.0, 0.0};
  CHECK(mobility_position(line, 5.0) == Position{5.0, 0.0});
  CHECK_THROWS_AS(mobility_position(line, -1.0), DomainError);
  CHECK(is_stationary(StationaryMobility{{1.0, 2.0}}));
}

TEST_CASE("random waypoint stays inside its playground") {
  RandomWaypointParams p;
  p.bounds = Playground{0.0, 0.0, 100.0, 50.0};
  p.speed_min = 1.0;
  p.speed_max = 11.0;
  p.pause = 1.0;
  p.start = {10.0, 10.0};
  RandomWaypointMobility m(p, 99);
  Position prev = m.position(0.0);
  for (double t = 0.1; t < 2000.0; t += 0.1) {
    const Position now = m.position(t);
    REQUIRE(p.bounds.contains(now));
    REQUIRE(distance(prev, now) <= 11.0 * 0.1 + 1e-9);
    prev = now;
  }
  RandomWaypointParams bad = p;
  bad.start = {500.0, 0.0};
  CHECK_THROWS_AS(RandomWaypointMobility(bad, 1), ConfigError);
}

TEST_CASE("no traffic leaves every counter at zero") {
  Simulation sim(SimOptions{});
  for (int i = 0; i < 4; ++i) sim.add_radio(fixed(sim, 10.0 * i, 0.0), omni());
  const SimStats s = sim.run(10.0);
  CHECK(s.events == 0);
  CHECK(s.delivered_bits == 0);
  CHECK(s.throughput_bps() == 0.0);
  for (const RadioStats& r : s.radios) {
    CHECK(r.frames_sent == 0);
    CHECK(r.frames_delivered == 0);
    CHECK(r.frames_received == 0);
    CHECK(r.frames_lost_collision == 0);
  }
}

TEST_CASE("identical seeds give byte-identical traces") {
  const World a = random_world(5);
  const World b = random_world(5);
  CHECK(a.trace.size() > 10000);
  CHECK(a.trace == b.trace);
  const World c = random_world(6);
  CHECK(c.trace != a.trace);
}

TEST_CASE("brute force and neighbors graph drive identical runs") {
  const World graph = random_world(8, ProcedureKind::NeighborsGraph);
  const World brute = random_world(8, ProcedureKind::BruteForce);
  const World sym = random_world(8, ProcedureKind::Symmetric);
  CHECK(graph.trace == brute.trace);
  CHECK(graph.trace == sym.trace);
}

TEST_CASE("receiver counters are conserved") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const World w = random_world(seed, ProcedureKind::NeighborsGraph, false);
    std::uint64_t received = 0;
    for (const RadioStats& r : w.stats.radios) {
      CHECK(r.frames_received + r.frames_lost_collision + r.frames_lost_below_sensitivity == r.frames_delivered);
      received += r.frames_received;
    }
    CHECK(received > 100);
  }
}

TEST_CASE("every received frame passes a post-hoc SNIR check") {
  const World w = random_world(4);
  struct Arr {
    long frame;
    double prx;
    double start;
    double end;
  };
  std::map<int, std::vector<Arr>> arrivals;                 // per radio, in start order
  std::map<int, std::vector<std::pair<double, double>>> own;  // per radio, tx intervals
  std::vector<std::pair<int, long>> received;
  std::istringstream in(w.trace);
  std::string line;
  int collisions = 0;
  double longest = 0.0;
  while (std::getline(in, line)) {
    auto f = fields_of(line);
    const int radio = std::stoi(f["radio"]);
    if (f["kind"] == "rxStart") {
      const Arr a{std::stol(f["frame"]), std::stod(f["prx"]), std::stod(f["start"]), std::stod(f["end"])};
      arrivals[radio].push_back(a);
      longest = std::max(longest, a.end - a.start);
    } else if (f["kind"] == "txStart") {
      own[radio].emplace_back(std::stod(f["start"]), std::stod(f["end"]));
    } else if (f["kind"] == "rxEnd") {
      if (f["outcome"] == "received") received.emplace_back(radio, std::stol(f["frame"]));
      if (f["outcome"] == "lostCollision") ++collisions;
    }
  }
  REQUIRE(received.size() > 100);
  CHECK(collisions > 0);
  const double noise_mw = std::pow(10.0, -85.0 / 10.0);
  for (const auto& [radio, frame] : received) {
    const std::vector<Arr>& list = arrivals[radio];
    const auto self = std::find_if(list.begin(), list.end(), [frame = frame](const Arr& x) { return x.frame == frame; });
    REQUIRE(self != list.end());
    const Arr& a = *self;
    REQUIRE(a.prx >= -82.0);
    // Frames overlapping `a` start within one frame length of it.
    std::vector<const Arr*> overlap;
    for (const Arr& o : list) {
      if (o.start > a.end) break;
      if (o.start < a.start - longest || o.frame == frame || o.end <= a.start || o.start >= a.end) continue;
      overlap.push_back(&o);
    }
    std::vector<double> cuts{a.start, a.end};
    for (const Arr* o : overlap) {
      cuts.push_back(std::max(o->start, a.start));
      cuts.push_back(std::min(o->end, a.end));
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] <= cuts[i]) continue;
      double interference = 0.0;
      for (const Arr* o : overlap) {
        if (o->start < cuts[i + 1] && o->end > cuts[i]) interference += std::pow(10.0, o->prx / 10.0);
      }
      REQUIRE(a.prx - 10.0 * std::log10(interference + noise_mw) >= 4.0);
    }
    for (const auto& [s, e] : own[radio]) REQUIRE_FALSE((s < a.end && e > a.start));
  }
}

TEST_CASE("boresight reception at 10 m") {
  Simulation sim(SimOptions{});
  const RadioId ap = sim.add_radio(fixed(sim, 0.0, 0.0), ap_radio());
  const RadioId host = sim.add_radio(fixed(sim, 0.0, 10.0), omni());
  std::vector<double> seen;
  sim.set_reception_observer([&](RadioId r, const AirFrame&, const Reception& rx, ReceptionOutcome o) {
    CHECK(r == host);
    CHECK(o == ReceptionOutcome::Received);
    seen.push_back(rx.prx_dbm);
  });
  beacon_at(sim, 0.001, ap);
  sim.run(1.0);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0] == doctest::Approx(-29.03).epsilon(1e-4));
  const double expected = 10.0 * std::log10(40.0) + 15.0 - oracle::fspl(10.0, 2.4e9, 2.0);
  CHECK(std::abs(seen[0] - expected) < 1e-9);
}

TEST_CASE("sensitivity boundary is inclusive") {
  const Position txp{0.0, 0.0};
  const Position rxp{300.0, 0.0};
  const double prx = received_power(RadioProfile(omni(-110.0, -85.0)), txp, rxp, GainDb{0.0}).value;
  Simulation sim(SimOptions{});
  const RadioId tx = sim.add_radio(fixed(sim, txp.x, txp.y), omni(-110.0, -85.0));
  const RadioId rx = sim.add_radio(fixed(sim, rxp.x, rxp.y), omni(prx - 10.0, prx));
  beacon_at(sim, 0.001, tx);
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[rx].frames_delivered == 1);
  CHECK(s.radios[rx].frames_received == 1);
}

TEST_CASE("frames below the detection threshold are never delivered") {
  const Position txp{0.0, 0.0};
  const Position rxp{300.0, 0.0};
  const double prx = received_power(RadioProfile(omni(-110.0, -85.0)), txp, rxp, GainDb{0.0}).value;
  Simulation sim(SimOptions{});
  const RadioId tx = sim.add_radio(fixed(sim, txp.x, txp.y), omni(-110.0, -85.0));
  const RadioId rx = sim.add_radio(fixed(sim, rxp.x, rxp.y), omni(prx + 0.1, prx + 0.1));
  beacon_at(sim, 0.001, tx);
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[tx].frames_sent == 1);
  CHECK(s.radios[rx].frames_delivered == 0);
}

TEST_CASE("weak frames above detection are lost below sensitivity") {
  Simulation sim(SimOptions{});
  const RadioId tx = sim.add_radio(fixed(sim, 0.0, 0.0), omni(-110.0, -85.0));
  const RadioId rx = sim.add_radio(fixed(sim, 1000.0, 0.0), omni(-110.0, -85.0));
  beacon_at(sim, 0.001, tx);
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[rx].frames_lost_below_sensitivity == 1);
}

TEST_CASE("equal-power overlapping frames collide") {
  Simulation sim(SimOptions{});
  const RadioId a = sim.add_radio(fixed(sim, -50.0, 0.0), omni());
  const RadioId b = sim.add_radio(fixed(sim, 50.0, 0.0), omni());
  const RadioId mid = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  beacon_at(sim, 0.001, a);
  beacon_at(sim, 0.001, b);
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[mid].frames_delivered == 2);
  CHECK(s.radios[mid].frames_lost_collision == 2);
  CHECK(s.radios[mid].frames_received == 0);
}

TEST_CASE("a radio cannot transmit twice at once") {
  Simulation sim(SimOptions{});
  const RadioId a = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  sim.add_radio(fixed(sim, 10.0, 0.0), omni());
  beacon_at(sim, 0.001, a);
  beacon_at(sim, 0.0015, a);  // first frame lasts 1 ms
  CHECK_THROWS_AS(sim.run(1.0), ScenarioError);
}

TEST_CASE("no neighbors means no receptions") {
  Simulation sim(SimOptions{});
  const RadioId a = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  sim.add_radio(fixed(sim, 1e6, 0.0), omni());
  beacon_at(sim, 0.001, a);
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[a].frames_sent == 1);
  CHECK(s.radios[1].frames_delivered == 0);
}

TEST_CASE("radios on the same host are isolated") {
  Simulation sim(SimOptions{});
  const HostId h = fixed(sim, 0.0, 0.0);
  const RadioId a = sim.add_radio(h, omni());
  const RadioId b = sim.add_radio(h, omni());
  const RadioId c = sim.add_radio(fixed(sim, 20.0, 0.0), omni());
  beacon_at(sim, 0.001, a);
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[b].frames_delivered == 0);
  CHECK(s.radios[c].frames_received == 1);
}

TEST_CASE("mobility tick is clamped to a quarter of the smallest box") {
  SimOptions o;
  o.mobility_tick = 1.0;
  Simulation sim(o);
  sim.add_radio(sim.add_host(LinearMobility{{0.0, 0.0}, 100.0, 0.0}), omni());
  sim.add_radio(fixed(sim, 50.0, 0.0), omni());
  sim.run(1.0);
  const double dmax = max_interference_distance(RadioProfile(omni()), GainDb{0.0});
  CHECK(sim.effective_tick() < dmax / 4.0 / 100.0);
  CHECK(sim.effective_tick() > 0.9 * dmax / 4.0 / 100.0);
}

TEST_CASE("moving hosts update positions at every tick") {
  SimOptions o;
  o.mobility_tick = 0.1;
  std::ostringstream out;
  o.trace = &out;
  Simulation sim(o);
  const RadioId r = sim.add_radio(sim.add_host(LinearMobility{{0.0, 0.0}, 1.0, 0.0}), omni());
  sim.run(1.0);
  CHECK(sim.position(r).x == doctest::Approx(1.0));
  int moves = 0;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) moves += fields_of(line)["kind"] == "move";
  CHECK(moves == 10);
}

TEST_CASE("csma delivers on an idle channel with one attempt") {
  Simulation sim(SimOptions{});
  const RadioId a = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  const RadioId b = sim.add_radio(fixed(sim, 30.0, 0.0), omni());
  int got = 0;
  sim.set_packet_handler(b, [&](const Packet& p) {
    CHECK(p.bits == 1000);
    ++got;
  });
  sim.schedule(0.01, "send", a, [&] {
    Packet p;
    p.bits = 1000;
    sim.mac(a).send(p, b);
  });
  const SimStats s = sim.run(1.0);
  CHECK(got == 1);
  CHECK(s.radios[a].mac_attempts == 1);
  CHECK(s.radios[a].mac_successes == 1);
  CHECK(s.radios[a].frames_sent == 1);
  CHECK(s.radios[b].frames_sent == 1);  // the ACK
  CHECK(s.radios[a].mac_drops == 0);
}

TEST_CASE("csma gives up after the retry limit") {
  SimOptions o;
  o.mac.max_retries = 5;
  Simulation sim(o);
  const RadioId a = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  const RadioId b = sim.add_radio(fixed(sim, 1e5, 0.0), omni());
  sim.schedule(0.01, "send", a, [&] {
    Packet p;
    p.bits = 1000;
    sim.mac(a).send(p, b);
  });
  const SimStats s = sim.run(5.0);
  CHECK(s.radios[a].mac_attempts == 6);
  CHECK(s.radios[a].mac_drops == 1);
  CHECK(s.radios[a].mac_successes == 0);
}

TEST_CASE("csma queue overflow is counted") {
  SimOptions o;
  o.mac.queue_capacity = 3;
  Simulation sim(o);
  const RadioId a = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  const RadioId b = sim.add_radio(fixed(sim, 30.0, 0.0), omni());
  sim.schedule(0.01, "burst", a, [&] {
    for (int i = 0; i < 5; ++i) {
      Packet p;
      p.bits = 1000;
      sim.mac(a).send(p, b);
    }
  });
  const SimStats s = sim.run(1.0);
  CHECK(s.radios[a].queue_drops == 2);
  CHECK(s.radios[a].mac_successes == 3);
}

TEST_CASE("hidden terminals collide at the shared receiver") {
  Simulation sim(SimOptions{});
  const double reach = max_interference_distance(RadioProfile(omni()), GainDb{0.0});
  const RadioId a = sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  const RadioId b = sim.add_radio(fixed(sim, 0.6 * reach, 0.0), omni());
  const RadioId c = sim.add_radio(fixed(sim, 1.2 * reach, 0.0), omni());
  for (RadioId src : {a, c}) {
    for (int k = 0; k < 200; ++k) {
      sim.schedule(0.002 * k, "send", src, [&sim, src, b] {
        Packet p;
        p.bits = 1000;
        sim.mac(src).send(p, b);
      });
    }
  }
  int crossed = 0;
  sim.set_reception_observer([&](RadioId r, const AirFrame& f, const Reception&, ReceptionOutcome) {
    crossed += (r == a && f.transmitter == c) || (r == c && f.transmitter == a);
  });
  const SimStats s = sim.run(2.0);
  CHECK(crossed == 0);  // a and c never hear each other
  CHECK(s.radios[a].frames_received > 0);  // ACKs from b
  CHECK(s.radios[b].frames_lost_collision > 0);
  CHECK(s.radios[b].frames_received > 0);
}

TEST_CASE("simulation rejects misuse") {
  SimOptions bad;
  bad.mobility_tick = 0.0;
  CHECK_THROWS_AS(Simulation{bad}, ConfigError);
  Simulation sim(SimOptions{});
  CHECK_THROWS_AS(sim.add_radio(3, omni()), ScenarioError);
  sim.add_radio(fixed(sim, 0.0, 0.0), omni());
  CHECK_THROWS_AS(sim.run(0.0), ScenarioError);
  sim.run(1.0);
  CHECK_THROWS_AS(sim.run(1.0), ScenarioError);
  CHECK_THROWS_AS(sim.add_host(StationaryMobility{}), ScenarioError);
}
