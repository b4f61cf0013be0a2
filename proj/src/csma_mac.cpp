// SPDX-License-Identifier: Apache-2.0
#include "dirsim/csma_mac.hpp"

#include <algorithm>

#include "dirsim/simulation.hpp"

namespace dirsim {

CsmaMac::CsmaMac(Simulation& sim, RadioId radio, const MacParams& params, std::uint64_t seed)
    : sim_(sim), radio_(radio), params_(params), rng_(seed), cw_(params.cw_min) {}

double CsmaMac::backoff() {
  std::uniform_int_distribution<int> slots(0, cw_ - 1);
  return params_.difs + slots(rng_) * params_.slot;
}

void CsmaMac::send(const Packet& packet, RadioId destination) {
  if (queue_.size() >= params_.queue_capacity) {
    ++sim_.radio_stats(radio_).queue_drops;
    return;
  }
  queue_.push_back({packet, destination});
  if (state_ == State::Idle) start_contention(sim_.now());
}

void CsmaMac::start_contention(double not_before) {
  state_ = State::Contending;
  const std::uint64_t token = ++token_;
  sim_.schedule(std::max(not_before, sim_.now()) + backoff(), "backoff", radio_, [this, token] { attempt(token); });
}

void CsmaMac::attempt(std::uint64_t token) {
  if (token != token_ || state_ != State::Contending || queue_.empty()) return;
  if (sim_.channel_busy(radio_)) {
    start_contention(sim_.busy_until(radio_));
    return;
  }
  Pending& head = queue_.front();
  if (retries_ == 0) ++sequence_;
  MacHeader h;
  h.type = FrameType::Data;
  h.source = radio_;
  h.destination = head.destination;
  h.sequence = sequence_;
  state_ = State::Transmitting;
  ++sim_.radio_stats(radio_).mac_attempts;
  sim_.transmit_frame(radio_, h, head.packet, head.packet.bits + params_.header_bits);
}

void CsmaMac::on_tx_end(const AirFrame& frame) {
  if (frame.header.type == FrameType::Ack || state_ != State::Transmitting) return;
  if (frame.header.destination == kBroadcast) {
    ++sim_.radio_stats(radio_).mac_successes;
    finish_head();
    return;
  }
  state_ = State::AwaitingAck;
  const std::uint64_t token = ++token_;
  const double wait = params_.sifs + sim_.frame_duration(radio_, params_.ack_bits) + 2.0 * params_.slot;
  sim_.schedule(sim_.now() + wait, "ackTimeout", radio_, [this, token] { ack_timeout(token); });
}

void CsmaMac::ack_timeout(std::uint64_t token) {
  if (token != token_ || state_ != State::AwaitingAck) return;
  ++retries_;
  if (retries_ > params_.max_retries) {
    ++sim_.radio_stats(radio_).mac_drops;
    finish_head();
    return;
  }
  cw_ = std::min(2 * cw_, params_.cw_max);
  start_contention(sim_.now());
}

void CsmaMac::finish_head() {
  queue_.pop_front();
  retries_ = 0;
  cw_ = params_.cw_min;
  state_ = State::Idle;
  ++token_;
  if (!queue_.empty()) start_contention(sim_.now());
}

void CsmaMac::on_receive(const AirFrame& frame) {
  const MacHeader& h = frame.header;
  if (h.type == FrameType::Ack) {
    if (h.destination == radio_ && state_ == State::AwaitingAck && h.sequence == sequence_) {
      ++sim_.radio_stats(radio_).mac_successes;
      finish_head();
    }
    return;
  }
  if (h.destination == kBroadcast) {
    sim_.deliver_up(radio_, frame.packet);
    return;
  }
  if (h.destination != radio_) return;

  MacHeader ack;
  ack.type = FrameType::Ack;
  ack.source = radio_;
  ack.destination = h.source;
  ack.sequence = h.sequence;
  const std::int64_t ack_bits = params_.ack_bits;
  sim_.schedule(sim_.now() + params_.sifs, "sendAck", radio_, [this, ack, ack_bits] {
    // Busy transmitting our own frame: the ACK is lost and the sender retries.
    if (!sim_.is_transmitting(radio_)) sim_.transmit_frame(radio_, ack, Packet{}, ack_bits);
  });

  auto seen = last_seen_.find(h.source);
  if (seen != last_seen_.end() && seen->second == h.sequence) return;  // retransmission
  last_seen_[h.source] = h.sequence;
  sim_.deliver_up(radio_, frame.packet);
}

}  // namespace dirsim
