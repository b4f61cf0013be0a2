// SPDX-License-Identifier: Apache-2.0
#include "dirsim/simulation.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dirsim/errors.hpp"

namespace dirsim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Move: return "move";
    case EventKind::TxStart: return "txStart";
    case EventKind::TxEnd: return "txEnd";
    case EventKind::RxStart: return "rxStart";
    case EventKind::RxEnd: return "rxEnd";
    case EventKind::Timer: return "timer";
  }
  return "?";
}

const char* outcome_name(ReceptionOutcome outcome) {
  switch (outcome) {
    case ReceptionOutcome::Received: return "received";
    case ReceptionOutcome::LostCollision: return "lostCollision";
    case ReceptionOutcome::LostBelowSensitivity: return "lostBelowSensitivity";
  }
  return "?";
}

Simulation::Simulation(SimOptions options)
    : options_(std::move(options)), procedure_(make_procedure(options_.procedure)), tick_(options_.mobility_tick) {
  if (!(options_.mobility_tick > 0.0)) throw ConfigError("mobility tick must be positive");
}

Simulation::~Simulation() = default;

HostId Simulation::add_host(MobilityModel mobility) {
  if (started_) throw ScenarioError("hosts must be added before run()");
  Host h{std::move(mobility), {}, {}};
  h.pos = mobility_position(h.mobility, 0.0);
  hosts_.push_back(std::move(h));
  return static_cast<HostId>(hosts_.size() - 1);
}

RadioId Simulation::add_radio(HostId host, const RadioConfig& config) {
  if (started_) throw ScenarioError("radios must be added before run()");
  if (host >= hosts_.size()) throw ScenarioError("unknown host " + std::to_string(host));
  const auto id = static_cast<RadioId>(table_.size());
  profiles_.emplace_back(config);
  table_.push_back(RadioView{hosts_[host].pos, &profiles_.back()});
  RadioState st;
  st.host = host;
  states_.push_back(std::move(st));
  hosts_[host].radios.push_back(id);
  macs_.push_back(std::make_unique<CsmaMac>(*this, id, options_.mac, stream_seed(kMacStream, id)));
  handlers_.emplace_back();
  stats_.radios.emplace_back();
  return id;
}

std::uint64_t Simulation::stream_seed(std::uint64_t stream, std::uint64_t index) const {
  std::seed_seq seq{static_cast<std::uint32_t>(options_.seed), static_cast<std::uint32_t>(options_.seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

const RadioProfile& Simulation::profile(RadioId radio) const { return *table_.at(radio).profile; }
Position Simulation::position(RadioId radio) const { return table_.at(radio).pos; }
HostId Simulation::host_of(RadioId radio) const { return states_.at(radio).host; }

CsmaMac& Simulation::mac(RadioId radio) { return *macs_.at(radio); }

void Simulation::set_packet_handler(RadioId radio, std::function<void(const Packet&)> handler) {
  handlers_.at(radio) = std::move(handler);
}

void Simulation::deliver_up(RadioId radio, const Packet& packet) {
  if (handlers_.at(radio)) handlers_[radio](packet);
}

void Simulation::push(Event e) {
  e.seq = next_seq_++;
  queue_.push_back(std::move(e));
  std::push_heap(queue_.begin(), queue_.end(), EventLater{});
}

void Simulation::schedule(double time, const char* tag, RadioId radio, std::function<void()> action) {
  if (time < now_) throw ScenarioError("cannot schedule in the past");
  push(Event{time, 0, EventKind::Timer, radio, 0, tag, std::move(action)});
}

void Simulation::trace_line(EventKind kind, RadioId radio, const std::string& fields) {
  if (options_.trace == nullptr) return;
  char head[64];
  std::snprintf(head, sizeof head, "%.9f\t%s\t%" PRIu32 "\t", now_, event_kind_name(kind), radio);
  *options_.trace << head << fields << '\n';
}

double Simulation::frame_duration(RadioId tx, std::int64_t bits) const {
  return static_cast<double>(bits) / profile(tx).config().bitrate_bps;
}

bool Simulation::is_transmitting(RadioId radio) const { return states_.at(radio).tx_until > now_; }

double Simulation::busy_until(RadioId radio) const {
  const RadioState& st = states_.at(radio);
  double until = std::max(now_, st.tx_until);
  for (const Arrival& a : st.arrivals) {
    if (a.t_start <= now_ && a.t_end > now_) until = std::max(until, a.t_end);
  }
  return until;
}

bool Simulation::channel_busy(RadioId radio) const { return busy_until(radio) > now_; }

FrameId Simulation::transmit_frame(RadioId tx, const MacHeader& header, const Packet& packet, std::int64_t bits) {
  if (tx >= table_.size()) throw ScenarioError("unknown radio " + std::to_string(tx));
  if (is_transmitting(tx)) throw ScenarioError("radio " + std::to_string(tx) + " is already transmitting");
  if (bits <= 0) throw ScenarioError("frame must carry at least one bit");

  const FrameId id = next_frame_++;
  FrameRecord rec;
  AirFrame& f = rec.frame;
  f.id = id;
  f.transmitter = tx;
  f.tx_pos = table_[tx].pos;
  f.t_start = now_;
  f.t_end = now_ + frame_duration(tx, bits);
  f.bits = bits;
  f.header = header;
  f.packet = packet;

  const RadioProfile& tx_profile = *table_[tx].profile;
  // Copy: the procedure may reuse its buffer on the next call.
  const std::vector<RadioId> delivery = procedure_->delivery_set(table_, tx);
  for (RadioId r : delivery) {
    if (options_.isolate_host_radios && states_[r].host == states_[tx].host) continue;
    const RadioView& rv = table_[r];
    const AntennaPattern& rx_antenna = rv.profile->antenna();
    const GainDb grx = rx_antenna.is_omni() ? GainDb{0.0} : rx_antenna.gain(link_bearing(rv.pos, f.tx_pos));
    const double prx = received_power(tx_profile, f.tx_pos, rv.pos, grx).value;
    if (prx < rv.profile->config().detection_threshold_dbm) continue;
    f.receptions.push_back(Reception{r, prx, rv.pos});
  }

  RadioState& ts = states_[tx];
  ts.tx_until = f.t_end;
  ts.own_tx.emplace_back(f.t_start, f.t_end);
  ++stats_.radios[tx].frames_sent;

  if (options_.trace != nullptr) {
    static const char* kTypes[] = {"data", "ack", "beacon"};
    trace_line(EventKind::TxStart, tx,
               "frame=" + std::to_string(id) + "\ttype=" + kTypes[static_cast<int>(header.type)] +
                   "\tdst=" + (header.destination == kBroadcast ? std::string("*") : std::to_string(header.destination)) +
                   "\tbits=" + std::to_string(bits) + "\tstart=" + fmt_double(f.t_start) +
                   "\tend=" + fmt_double(f.t_end) +
                   "\treceivers=" + std::to_string(f.receptions.size()));
  }

  for (const Reception& r : f.receptions) {
    RadioState& rs = states_[r.radio];
    rs.arrivals.push_back(Arrival{id, dbm_to_mw(PowerDbm{r.prx_dbm}).value, f.t_start, f.t_end, true});
    ++stats_.radios[r.radio].frames_delivered;
    if (options_.trace != nullptr) {
      trace_line(EventKind::RxStart, r.radio,
               "frame=" + std::to_string(id) + "\ttx=" + std::to_string(tx) + "\tprx=" + fmt_double(r.prx_dbm) +
                   "\tstart=" + fmt_double(f.t_start) + "\tend=" + fmt_double(f.t_end));
    }
    push(Event{f.t_end, 0, EventKind::RxEnd, r.radio, id, nullptr, {}});
    ++rec.open;
  }
  push(Event{f.t_end, 0, EventKind::TxEnd, tx, id, nullptr, {}});
  ++rec.open;
  frames_.emplace(id, std::move(rec));
  return id;
}

void Simulation::release(FrameId frame) {
  auto it = frames_.find(frame);
  if (it != frames_.end() && --it->second.open == 0) frames_.erase(it);
}

void Simulation::handle_tx_end(FrameId frame) {
  const FrameRecord& rec = frames_.at(frame);
  if (options_.trace != nullptr) trace_line(EventKind::TxEnd, rec.frame.transmitter, "frame=" + std::to_string(frame));
  macs_[rec.frame.transmitter]->on_tx_end(rec.frame);
  prune(states_[rec.frame.transmitter]);
  release(frame);
}

ReceptionOutcome Simulation::evaluate_reception(RadioId radio, const FrameRecord& rec, double prx_dbm,
                                                double& min_snir_db) {
  const RadioState& st = states_[radio];
  const RadioConfig& cfg = table_[radio].profile->config();
  const double t0 = rec.frame.t_start;
  const double t1 = rec.frame.t_end;
  const double noise_mw = dbm_to_mw(PowerDbm{cfg.detection_threshold_dbm}).value;

  std::vector<double> cuts{t0, t1};
  std::vector<const Arrival*> overlapping;
  for (const Arrival& a : st.arrivals) {
    if (a.frame == rec.frame.id || a.t_end <= t0 || a.t_start >= t1) continue;
    overlapping.push_back(&a);
    if (a.t_start > t0) cuts.push_back(a.t_start);
    if (a.t_end < t1) cuts.push_back(a.t_end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  min_snir_db = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    double interference = 0.0;
    for (const Arrival* o : overlapping) {
      if (o->t_start < b && o->t_end > a) interference += o->power_mw;
    }
    min_snir_db = std::min(min_snir_db, prx_dbm - 10.0 * std::log10(interference + noise_mw));
  }

  const bool self_busy = std::any_of(st.own_tx.begin(), st.own_tx.end(),
                                     [&](const auto& iv) { return iv.first < t1 && iv.second > t0; });
  if (prx_dbm < cfg.sensitivity_dbm) return ReceptionOutcome::LostBelowSensitivity;
  if (self_busy || min_snir_db < cfg.snir_threshold_db) return ReceptionOutcome::LostCollision;
  return ReceptionOutcome::Received;
}

void Simulation::prune(RadioState& st) {
  double horizon = std::numeric_limits<double>::infinity();
  for (const Arrival& a : st.arrivals) {
    if (a.pending) horizon = std::min(horizon, a.t_start);
  }
  horizon = std::min(horizon, now_);
  std::erase_if(st.arrivals, [&](const Arrival& a) { return !a.pending && a.t_end <= horizon; });
  std::erase_if(st.own_tx, [&](const auto& iv) { return iv.second <= horizon; });
}

void Simulation::handle_rx_end(RadioId radio, FrameId frame) {
  const FrameRecord& rec = frames_.at(frame);
  const Reception* r = nullptr;
  for (const Reception& x : rec.frame.receptions) {
    if (x.radio == radio) r = &x;
  }
  double min_snir = 0.0;
  const ReceptionOutcome outcome = evaluate_reception(radio, rec, r->prx_dbm, min_snir);
  RadioStats& rs = stats_.radios[radio];
  switch (outcome) {
    case ReceptionOutcome::Received: ++rs.frames_received; break;
    case ReceptionOutcome::LostCollision: ++rs.frames_lost_collision; break;
    case ReceptionOutcome::LostBelowSensitivity: ++rs.frames_lost_below_sensitivity; break;
  }
  if (options_.trace != nullptr) {
    trace_line(EventKind::RxEnd, radio,
             "frame=" + std::to_string(frame) + "\toutcome=" + outcome_name(outcome) + "\tminSnir=" + fmt_double(min_snir));
  }

  RadioState& st = states_[radio];
  for (Arrival& a : st.arrivals) {
    if (a.frame == frame) a.pending = false;
  }
  if (observer_) observer_(radio, rec.frame, *r, outcome);
  if (outcome == ReceptionOutcome::Received) macs_[radio]->on_receive(rec.frame);
  prune(st);
  release(frame);
}

void Simulation::handle_move(HostId host) {
  Host& h = hosts_[host];
  const Position p = mobility_position(h.mobility, now_);
  if (!(p == h.pos)) {
    h.pos = p;
    for (RadioId r : h.radios) {
      table_[r].pos = p;
      if (options_.trace != nullptr) trace_line(EventKind::Move, r, "x=" + fmt_double(p.x) + "\ty=" + fmt_double(p.y));
      procedure_->on_move(table_, r);
    }
  }
}

SimStats Simulation::run(double end_time) {
  if (!(end_time > 0.0)) throw ScenarioError("end time must be positive");
  if (started_) throw ScenarioError("run() may only be called once");
  started_ = true;

  procedure_->reset(table_);

  // Keep each mobility step below a quarter of the smallest coverage box.
  double vmax = 0.0;
  for (const Host& h : hosts_) vmax = std::max(vmax, max_speed(h.mobility));
  if (vmax > 0.0 && !table_.empty()) {
    const GainDb grx = system_max_gain(table_);
    double dmin = std::numeric_limits<double>::infinity();
    for (const RadioView& v : table_) dmin = std::min(dmin, max_interference_distance(*v.profile, grx));
    const double limit = dmin / 4.0 / vmax;
    if (tick_ >= limit) tick_ = 0.99 * limit;
  }

  for (HostId h = 0; h < hosts_.size(); ++h) {
    if (is_stationary(hosts_[h].mobility) || hosts_[h].radios.empty()) continue;
    const double tick = tick_;
    auto step = std::make_shared<std::function<void(std::uint64_t)>>();
    *step = [this, h, tick, end_time, weak = std::weak_ptr(step)](std::uint64_t k) {
      handle_move(h);
      const double next = static_cast<double>(k + 1) * tick;
      if (next <= end_time) {
        auto self = weak.lock();
        push(Event{next, 0, EventKind::Move, hosts_[h].radios.front(), 0, nullptr, [self, k] { (*self)(k + 1); }});
      }
    };
    push(Event{tick, 0, EventKind::Move, hosts_[h].radios.front(), 0, nullptr, [step] { (*step)(1); }});
  }

  while (!queue_.empty() && queue_.front().time <= end_time) {
    std::pop_heap(queue_.begin(), queue_.end(), EventLater{});
    Event e = std::move(queue_.back());
    queue_.pop_back();
    now_ = e.time;
    ++stats_.events;
    switch (e.kind) {
      case EventKind::TxEnd: handle_tx_end(e.frame); break;
      case EventKind::RxEnd: handle_rx_end(e.radio, e.frame); break;
      case EventKind::Move:
        e.action();
        break;
      case EventKind::Timer:
        if (e.tag != nullptr) trace_line(EventKind::Timer, e.radio, e.tag);
        e.action();
        break;
      case EventKind::TxStart:
      case EventKind::RxStart:
        break;
    }
  }
  now_ = end_time;
  stats_.elapsed = end_time;
  stats_.maintenance = procedure_->stats();
  return stats_;
}

}  // namespace dirsim
