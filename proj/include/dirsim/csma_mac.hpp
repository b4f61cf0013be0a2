// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <random>

#include "dirsim/neighbors_graph.hpp"

namespace dirsim {

class Simulation;
struct AirFrame;

inline constexpr RadioId kBroadcast = std::numeric_limits<RadioId>::max();

enum class FrameType : std::uint8_t { Data, Ack, Beacon };

struct Packet {
  std::uint64_t id = 0;
  RadioId origin = 0;
  RadioId final_destination = kBroadcast;
  std::int64_t bits = 0;
  double created = 0.0;
};

struct MacHeader {
  FrameType type = FrameType::Data;
  RadioId source = 0;
  RadioId destination = kBroadcast;
  std::uint32_t sequence = 0;
};

struct MacParams {
  double slot = 20e-6;
  double sifs = 10e-6;
  double difs = 50e-6;
  int cw_min = 16;
  int cw_max = 1024;
  int max_retries = 7;
  std::size_t queue_capacity = 50;
  std::int64_t ack_bits = 112;
  std::int64_t header_bits = 0;  // added to the payload size of data frames
};

/// Abstract CSMA with binary exponential backoff and stop-and-wait ACKs.
/// Carrier sense defers to the end of the sensed busy period plus DIFS and a
/// fresh random backoff.
class CsmaMac {
 public:
  CsmaMac(Simulation& sim, RadioId radio, const MacParams& params, std::uint64_t seed);

  /// Queues a packet for `destination` (kBroadcast: no ACK, single attempt).
  void send(const Packet& packet, RadioId destination);

  void on_tx_end(const AirFrame& frame);
  void on_receive(const AirFrame& frame);

  std::size_t queue_length() const { return queue_.size(); }
  bool idle() const { return state_ == State::Idle; }
  int contention_window() const { return cw_; }

 private:
  enum class State { Idle, Contending, Transmitting, AwaitingAck };
  struct Pending {
    Packet packet;
    RadioId destination;
  };

  void start_contention(double not_before);
  void attempt(std::uint64_t token);
  void ack_timeout(std::uint64_t token);
  void finish_head();
  double backoff();

  Simulation& sim_;
  RadioId radio_;
  MacParams params_;
  std::mt19937_64 rng_;
  std::deque<Pending> queue_;
  State state_ = State::Idle;
  int cw_;
  int retries_ = 0;
  std::uint32_t sequence_ = 0;
  std::uint64_t token_ = 0;  // invalidates stale timers
  std::map<RadioId, std::uint32_t> last_seen_;  // duplicate filter per source
};

}  // namespace dirsim
