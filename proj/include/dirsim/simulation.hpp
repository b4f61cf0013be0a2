// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dirsim/csma_mac.hpp"
#include "dirsim/mobility.hpp"
#include "dirsim/neighbor_procedures.hpp"
#include "dirsim/propagation.hpp"

namespace dirsim {

using HostId = std::uint32_t;
using FrameId = std::uint64_t;

enum class EventKind : std::uint8_t { Move, TxStart, TxEnd, RxStart, RxEnd, Timer };

const char* event_kind_name(EventKind kind);

struct Reception {
  RadioId radio = 0;
  double prx_dbm = 0.0;
  Position rx_pos;
};

/// A transmission on the shared channel. Receiver powers are fixed when the
/// frame is emitted (positions sampled at t_start).
struct AirFrame {
  FrameId id = 0;
  RadioId transmitter = 0;
  Position tx_pos;
  double t_start = 0.0;
  double t_end = 0.0;
  std::int64_t bits = 0;
  MacHeader header;
  Packet packet;
  std::vector<Reception> receptions;
};

enum class ReceptionOutcome : std::uint8_t { Received, LostCollision, LostBelowSensitivity };

const char* outcome_name(ReceptionOutcome outcome);

struct RadioStats {
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_delivered = 0;  // frames that reached this radio's receiver
  std::uint64_t frames_received = 0;
  std::uint64_t frames_lost_collision = 0;
  std::uint64_t frames_lost_below_sensitivity = 0;
  std::uint64_t mac_drops = 0;   // retry limit exceeded
  std::uint64_t queue_drops = 0;
  std::uint64_t mac_successes = 0;
  std::uint64_t mac_attempts = 0;
};

struct SimStats {
  std::vector<RadioStats> radios;
  std::uint64_t delivered_bits = 0;
  double elapsed = 0.0;
  std::uint64_t events = 0;
  MaintenanceStats maintenance;

  double throughput_bps() const { return elapsed > 0.0 ? static_cast<double>(delivered_bits) / elapsed : 0.0; }
};

struct SimOptions {
  ProcedureKind procedure = ProcedureKind::NeighborsGraph;
  double mobility_tick = 0.1;  // s
  std::uint64_t seed = 1;
  MacParams mac;
  std::ostream* trace = nullptr;
  /// Radios on the same host never exchange or interfere with frames.
  bool isolate_host_radios = true;
};

/// Deterministic discrete-event engine over one shared channel. Build the
/// roster (hosts, radios, handlers, initial timers), then call run() once.
class Simulation {
 public:
  explicit Simulation(SimOptions options);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  HostId add_host(MobilityModel mobility);
  RadioId add_radio(HostId host, const RadioConfig& config);

  SimStats run(double end_time);

  // Channel -----------------------------------------------------------------
  /// Emits a frame from `tx` now. Throws ScenarioError if `tx` is already transmitting.
  FrameId transmit_frame(RadioId tx, const MacHeader& header, const Packet& packet, std::int64_t bits);
  bool is_transmitting(RadioId radio) const;
  /// Carrier sense: own transmission or any frame on air at or above the detection threshold.
  bool channel_busy(RadioId radio) const;
  /// Time when everything currently sensed at `radio` has ended (now if idle).
  double busy_until(RadioId radio) const;
  double frame_duration(RadioId tx, std::int64_t bits) const;

  // Scheduling ----------------------------------------------------------------
  void schedule(double time, const char* tag, RadioId radio, std::function<void()> action);
  double now() const { return now_; }

  // Upper layers --------------------------------------------------------------
  CsmaMac& mac(RadioId radio);
  void set_packet_handler(RadioId radio, std::function<void(const Packet&)> handler);
  void deliver_up(RadioId radio, const Packet& packet);
  void record_delivered_bits(std::int64_t bits) { stats_.delivered_bits += static_cast<std::uint64_t>(bits); }
  using ReceptionObserver = std::function<void(RadioId, const AirFrame&, const Reception&, ReceptionOutcome)>;
  void set_reception_observer(ReceptionObserver observer) { observer_ = std::move(observer); }

  // Introspection -------------------------------------------------------------
  RadioTable radios() const { return table_; }
  const RadioProfile& profile(RadioId radio) const;
  Position position(RadioId radio) const;
  HostId host_of(RadioId radio) const;
  std::size_t radio_count() const { return table_.size(); }
  NeighborProcedure& procedure() { return *procedure_; }
  RadioStats& radio_stats(RadioId radio) { return stats_.radios.at(radio); }
  double effective_tick() const { return tick_; }
  std::uint64_t stream_seed(std::uint64_t stream, std::uint64_t index) const;
  const SimOptions& options() const { return options_; }

  static constexpr std::uint64_t kMobilityStream = 1;
  static constexpr std::uint64_t kMacStream = 2;
  static constexpr std::uint64_t kTrafficStream = 3;

 private:
  struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    RadioId radio;
    FrameId frame;
    const char* tag;
    std::function<void()> action;
  };
  // Moves run first among simultaneous events so everything at a tick sees the new positions.
  struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      const bool am = a.kind == EventKind::Move;
      const bool bm = b.kind == EventKind::Move;
      if (am != bm) return bm;
      return a.seq > b.seq;
    }
  };
  struct Arrival {
    FrameId frame;
    double power_mw;
    double t_start;
    double t_end;
    bool pending;  // not yet evaluated
  };
  struct RadioState {
    HostId host = 0;
    std::vector<Arrival> arrivals;
    std::vector<std::pair<double, double>> own_tx;  // transmission intervals
    double tx_until = -1.0;
  };
  struct Host {
    MobilityModel mobility;
    Position pos;
    std::vector<RadioId> radios;
  };
  struct FrameRecord {
    AirFrame frame;
    std::size_t open = 0;  // outstanding TxEnd/RxEnd events
  };

  void push(Event e);
  void handle_move(HostId host);
  void handle_tx_end(FrameId frame);
  void handle_rx_end(RadioId radio, FrameId frame);
  ReceptionOutcome evaluate_reception(RadioId radio, const FrameRecord& rec, double prx_dbm, double& min_snir_db);
  void prune(RadioState& state);
  void release(FrameId frame);
  void trace_line(EventKind kind, RadioId radio, const std::string& fields);

  SimOptions options_;
  std::unique_ptr<NeighborProcedure> procedure_;
  std::deque<RadioProfile> profiles_;
  std::vector<RadioView> table_;
  std::vector<RadioState> states_;
  std::vector<Host> hosts_;
  std::vector<std::unique_ptr<CsmaMac>> macs_;
  std::vector<std::function<void(const Packet&)>> handlers_;
  std::unordered_map<FrameId, FrameRecord> frames_;
  std::vector<Event> queue_;
  ReceptionObserver observer_;
  SimStats stats_;
  std::uint64_t next_seq_ = 0;
  FrameId next_frame_ = 1;
  double now_ = 0.0;
  double tick_ = 0.1;
  bool started_ = false;
};

}  // namespace dirsim
