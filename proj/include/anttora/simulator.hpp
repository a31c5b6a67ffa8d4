/*
 * Copyright 2026 The anttora Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Deterministic discrete-event engine driving a set of node agents over a
// link model with optional random-waypoint mobility.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "anttora/mobility.hpp"
#include "anttora/node_agent.hpp"
#include "anttora/scenario.hpp"
#include "anttora/trace.hpp"

namespace anttora::sim {

enum class EventKind {
  kPacketDelivery,
  kHelloTimer,
  kEvaporationTimer,
  kMobilityStep,
  kLinkChange,
  kDataInjection,
  kRouteExpiry,
  kSample,
};

struct Delivery {
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t epoch = 0;
  packets::Packet packet;
};

struct LinkToggle {
  NodeId a = 0;
  NodeId b = 0;
  bool up = false;
};

struct SimEvent {
  SimTime time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kSample;
  NodeId node = 0;         // hello timer
  std::size_t flow = 0;    // data injection
  std::uint64_t index = 0; // data injection: packet number within the flow
  std::variant<std::monostate, Delivery, LinkToggle> payload;
};

inline SimEvent make_event(SimTime time, EventKind kind) {
  SimEvent e;
  e.time = time;
  e.kind = kind;
  return e;
}

struct EventLater {
  bool operator()(const SimEvent& x, const SimEvent& y) const {
    return x.time != y.time ? x.time > y.time : x.seq > y.seq;
  }
};

struct LinkParams {
  double capacity = 0.0;
  double propagation_delay = 0.0;
};

struct LinkStatus {
  bool up = false;
  std::uint64_t epoch = 0;
};

/// Exact timing of one delivered data packet.
struct DeliveryRecord {
  packets::DataPacket packet;
  SimTime delivered_at = 0.0;
};

/// A maintenance decision and the index of the event that caused it.
struct MaintenanceRecord {
  std::uint64_t event_index = 0;
  SimTime time = 0.0;
  NodeId node = 0;
  NodeId destination = 0;
  tora::MaintenanceCase kind = tora::MaintenanceCase::kGenerate;
};

struct HeightRecord {
  std::uint64_t event_index = 0;
  SimTime time = 0.0;
  NodeId node = 0;
  NodeId destination = 0;
  tora::Height height;
};

struct TransmitRecord {
  std::uint64_t event_index = 0;
  SimTime time = 0.0;
  NodeId node = 0;
  std::optional<NodeId> to;
  std::string type;
};

inline AgentConfig agent_config(const Scenario& s, NodeId node) {
  AgentConfig c;
  c.mode = s.mode;
  c.qos = s.qos;
  c.deposit = s.deposit;
  c.preference = s.preference;
  c.bounds = s.normalization;
  c.tau0 = s.tau0;
  c.hello_interval = s.hello_interval;
  c.hello_bits = s.hello_bits;
  c.hello_loss_threshold = s.hello_loss_threshold;
  c.route_ttl = s.route_ttl;
  c.processing_delay = s.processing_delay_of(node);
  c.drain_ewma = s.drain_ewma;
  c.queue_limit = s.queue_limit;
  c.discovery_backoff = s.discovery_backoff;
  return c;
}

class Simulator {
 public:
  Simulator(Scenario scenario, std::uint64_t seed) : sc_(std::move(scenario)), seed_(seed), rng_(seed) {
    const std::size_t n = sc_.node_count;
    agents_.reserve(n);
    for (NodeId i = 0; i < n; ++i) agents_.emplace_back(i, agent_config(sc_, i), sc_.initial_energy);
    for (const auto& o : sc_.link_overrides) {
      params_[key(o.a, o.b)] = LinkParams{o.capacity, o.propagation_delay};
    }

    trace::TraceRecord meta;
    meta.kind = trace::RecordKind::kMeta;
    meta.value = n;
    meta.text = to_string(sc_.mode);
    meta.seed = seed_;
    emit(meta);
    if (n == 0) return;

    if (sc_.topology == TopologyMode::kStatic) {
      for (const auto& [a, b] : sc_.links) set_link(a, b, true);
      for (const auto& e : sc_.link_events) {
        if (e.time <= sc_.end_time) schedule_link_change(e.time, e.a, e.b, e.up);
      }
    } else {
      std::vector<mobility::Vec2> pos;
      if (sc_.positions.empty()) {
        std::uniform_real_distribution<double> ux(0.0, sc_.mobility.width);
        std::uniform_real_distribution<double> uy(0.0, sc_.mobility.height);
        for (std::size_t i = 0; i < n; ++i) {
          const double x = ux(rng_);
          pos.push_back({x, uy(rng_)});
        }
      } else {
        for (const auto& p : sc_.positions) pos.push_back({p[0], p[1]});
      }
      const auto& m = sc_.mobility;
      mob_ = mobility::make_state(pos, m.width, m.height, m.comm_range, m.min_speed, m.max_speed,
                                  m.pause, rng_);
      for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
          if (mob_->connected[a][b]) set_link(a, b, true);
        }
      }
      push(make_event(m.step, EventKind::kMobilityStep));
    }

    std::uniform_real_distribution<double> jitter(0.0, 0.1 * sc_.hello_interval);
    for (NodeId i = 0; i < n; ++i) {
      SimEvent e = make_event(jitter(rng_), EventKind::kHelloTimer);
      e.node = i;
      push(std::move(e));
    }
    if (sc_.mode == Mode::kAntTora) push(make_event(sc_.evaporation_period, EventKind::kEvaporationTimer));
    push(make_event(sc_.hello_interval, EventKind::kRouteExpiry));
    push(make_event(0.0, EventKind::kSample));
    for (std::size_t f = 0; f < sc_.flows.size(); ++f) {
      SimEvent e = make_event(sc_.flows[f].start, EventKind::kDataInjection);
      e.flow = f;
      push(std::move(e));
    }
  }

  const Scenario& scenario() const { return sc_; }
  SimTime now() const { return now_; }
  std::uint64_t events_processed() const { return processed_; }
  bool idle() const { return queue_.empty(); }

  NodeAgent& agent(NodeId i) { return agents_.at(i); }
  const NodeAgent& agent(NodeId i) const { return agents_.at(i); }
  std::size_t node_count() const { return agents_.size(); }

  bool link_up(NodeId a, NodeId b) const {
    auto it = links_.find(key(a, b));
    return it != links_.end() && it->second.up;
  }

  std::vector<NodeId> physical_neighbors(NodeId a) const {
    std::vector<NodeId> out;
    for (const auto& [k, st] : links_) {
      if (!st.up) continue;
      if (k.first == a) out.push_back(k.second);
      if (k.second == a) out.push_back(k.first);
    }
    std::ranges::sort(out);
    return out;
  }

  LinkParams link_params(NodeId a, NodeId b) const {
    auto it = params_.find(key(a, b));
    if (it != params_.end()) return it->second;
    return LinkParams{sc_.capacity, sc_.propagation_delay};
  }

  void schedule_link_change(SimTime t, NodeId a, NodeId b, bool up) {
    if (a >= agents_.size() || b >= agents_.size() || a == b) {
      throw PreconditionError("link change: bad endpoints");
    }
    SimEvent e = make_event(t, EventKind::kLinkChange);
    e.payload = LinkToggle{a, b, up};
    push(std::move(e));
  }

  /// Hands a data packet to `source` right away, outside any flow.
  void inject(NodeId source, NodeId destination, std::int64_t bits) {
    packets::DataPacket p;
    p.flow = static_cast<std::uint32_t>(sc_.flows.size());
    p.seq = adhoc_seq_++;
    p.source = source;
    p.destination = destination;
    p.size_bits = bits;
    p.created_at = now_;
    originate(std::move(p));
  }

  /// Processes one event. Returns false when nothing is left before end_time.
  bool step() {
    if (queue_.empty() || queue_.top().time > sc_.end_time) return false;
    SimEvent e = queue_.top();
    queue_.pop();
    if (e.time < now_) throw Error("event queue out of order");
    now_ = e.time;
    ++processed_;
    handle(e);
    return true;
  }

  void run_until(SimTime t) {
    while (!queue_.empty() && queue_.top().time <= std::min(t, sc_.end_time)) step();
    if (t > now_) now_ = std::min(t, sc_.end_time);
  }

  void run() {
    while (step()) {
    }
    now_ = sc_.end_time;
  }

  const std::vector<std::string>& trace_lines() const { return lines_; }
  const std::vector<DeliveryRecord>& deliveries() const { return deliveries_; }
  const std::vector<MaintenanceRecord>& maintenance_log() const { return maint_log_; }
  const std::vector<HeightRecord>& height_log() const { return height_log_; }
  const std::vector<TransmitRecord>& transmit_log() const { return tx_log_; }

  /// Copies put on the air (one per receiver; unicast counts once).
  std::uint64_t copies_sent() const { return copies_sent_; }
  std::uint64_t copies_received() const { return copies_received_; }
  std::uint64_t copies_dropped() const { return copies_dropped_; }
  std::uint64_t copies_in_flight() const {
    return copies_sent_ - copies_received_ - copies_dropped_;
  }

 private:
  using Key = std::pair<NodeId, NodeId>;
  static Key key(NodeId a, NodeId b) { return a < b ? Key{a, b} : Key{b, a}; }

  void push(SimEvent e) {
    e.seq = next_seq_++;
    queue_.push(std::move(e));
  }

  void emit(trace::TraceRecord rec) {
    rec.time = now_;
    rec.seq = lines_.size();
    lines_.push_back(trace::encode_record(rec));
  }

  void emit_packet(trace::RecordKind kind, NodeId node, std::optional<NodeId> peer,
                   const packets::Packet& p, double cost = 0.0, std::string text = {}) {
    trace::TraceRecord r;
    r.kind = kind;
    r.node = node;
    r.peer = peer;
    r.cost = cost;
    r.text = std::move(text);
    r.packet = p;
    emit(std::move(r));
  }

  void set_link(NodeId a, NodeId b, bool up) {
    LinkStatus& st = links_[key(a, b)];
    if (st.up == up) return;
    st.up = up;
    ++st.epoch;
    trace::TraceRecord r;
    r.kind = up ? trace::RecordKind::kLinkUp : trace::RecordKind::kLinkDown;
    r.node = std::min(a, b);
    r.peer = std::max(a, b);
    emit(r);
    if (up) {
      transmit_all(a, agents_[a].on_link_up(b, now_));
      transmit_all(b, agents_[b].on_link_up(a, now_));
    } else {
      transmit_all(a, agents_[a].on_link_failure(b, now_));
      transmit_all(b, agents_[b].on_link_failure(a, now_));
    }
  }

  void drain_agent_events(NodeId node) {
    for (auto& ev : agents_[node].take_events()) {
      trace::TraceRecord r;
      r.node = node;
      r.destination = ev.destination;
      if (ev.kind == AgentEvent::Kind::kHeight) {
        r.kind = trace::RecordKind::kHeight;
        r.height = ev.height;
        height_log_.push_back({processed_, now_, node, ev.destination, ev.height});
      } else {
        r.kind = trace::RecordKind::kMaintenance;
        r.text = tora::to_string(ev.maintenance);
        maint_log_.push_back({processed_, now_, node, ev.destination, ev.maintenance});
      }
      emit(std::move(r));
    }
  }

  void transmit_all(NodeId node, Emissions out) {
    drain_agent_events(node);
    for (auto& em : out) transmit(node, std::move(em));
  }

  void transmit(NodeId node, Emission em) {
    NodeAgent& ag = agents_[node];
    const std::int64_t bits = packets::packet_bits(em.packet);
    if (ag.energy().depleted()) {
      emit_packet(trace::RecordKind::kDrop, node, em.to, em.packet, 0.0, "no_energy");
      return;
    }
    if (em.to && !link_up(node, *em.to)) {
      emit_packet(trace::RecordKind::kDrop, node, em.to, em.packet, 0.0, "no_link");
      return;
    }
    const double cost = ag.energy().debit(sc_.tx_cost_per_bit * static_cast<double>(bits));
    emit_packet(trace::RecordKind::kTransmit, node, em.to, em.packet, cost);
    tx_log_.push_back({processed_, now_, node, em.to, packets::type_name(em.packet)});
    std::vector<NodeId> targets;
    if (em.to) {
      targets.push_back(*em.to);
    } else {
      targets = physical_neighbors(node);
    }
    for (NodeId to : targets) {
      const LinkParams lp = link_params(node, to);
      const double at = now_ + static_cast<double>(bits) / lp.capacity + lp.propagation_delay +
                        sc_.processing_delay_of(to);
      SimEvent e = make_event(at, EventKind::kPacketDelivery);
      e.payload = Delivery{node, to, links_.at(key(node, to)).epoch, em.packet};
      push(std::move(e));
      ++copies_sent_;
    }
  }

  void originate(packets::DataPacket p) {
    emit_packet(trace::RecordKind::kGenerate, p.source, std::nullopt, p);
    NodeAgent& ag = agents_[p.source];
    if (ag.energy().depleted()) {
      emit_packet(trace::RecordKind::kDrop, p.source, std::nullopt, p, 0.0, "no_energy");
      return;
    }
    finish_data(p.source, ag.send_data(std::move(p), now_));
  }

  void finish_data(NodeId node, DataResult res) {
    for (auto& [pkt, reason] : res.dropped) {
      emit_packet(trace::RecordKind::kDrop, node, std::nullopt, pkt, 0.0, reason);
    }
    if (res.delivered) {
      emit_packet(trace::RecordKind::kDeliver, node, std::nullopt, *res.delivered);
      deliveries_.push_back({*res.delivered, now_});
    }
    transmit_all(node, std::move(res.emissions));
  }

  void handle(SimEvent& e) {
    switch (e.kind) {
      case EventKind::kPacketDelivery: {
        auto& d = std::get<Delivery>(e.payload);
        const auto it = links_.find(key(d.from, d.to));
        if (it == links_.end() || !it->second.up || it->second.epoch != d.epoch) {
          ++copies_dropped_;
          emit_packet(trace::RecordKind::kDrop, d.to, d.from, d.packet, 0.0, "link_down");
          return;
        }
        NodeAgent& ag = agents_[d.to];
        if (ag.energy().depleted()) {
          ++copies_dropped_;
          emit_packet(trace::RecordKind::kDrop, d.to, d.from, d.packet, 0.0, "no_energy");
          return;
        }
        ++copies_received_;
        const double cost =
            ag.energy().debit(sc_.rx_cost_per_bit * static_cast<double>(packets::packet_bits(d.packet)));
        emit_packet(trace::RecordKind::kReceive, d.to, d.from, d.packet, cost);
        finish_data(d.to, ag.receive(d.packet, d.from, now_));
        return;
      }
      case EventKind::kHelloTimer: {
        transmit_all(e.node, agents_[e.node].hello_tick(now_));
        SimEvent next = make_event(now_ + sc_.hello_interval, EventKind::kHelloTimer);
        next.node = e.node;
        push(std::move(next));
        return;
      }
      case EventKind::kEvaporationTimer:
        for (auto& ag : agents_) ag.evaporation_tick(now_);
        push(make_event(now_ + sc_.evaporation_period, EventKind::kEvaporationTimer));
        return;
      case EventKind::kMobilityStep: {
        const double dt = sc_.mobility.step;
        for (const auto& c : mobility::step_mobility(*mob_, dt, rng_)) {
          SimEvent ev = make_event(now_ + c.offset, EventKind::kLinkChange);
          ev.payload = LinkToggle{c.a, c.b, c.up};
          push(std::move(ev));
        }
        push(make_event(now_ + dt, EventKind::kMobilityStep));
        return;
      }
      case EventKind::kLinkChange: {
        const auto& t = std::get<LinkToggle>(e.payload);
        set_link(t.a, t.b, t.up);
        return;
      }
      case EventKind::kDataInjection: {
        const FlowSpec& f = sc_.flows[e.flow];
        packets::DataPacket p;
        p.flow = static_cast<std::uint32_t>(e.flow);
        p.seq = e.index;
        p.source = f.source;
        p.destination = f.destination;
        p.size_bits = f.packet_bits;
        p.created_at = now_;
        originate(std::move(p));
        const SimTime next = f.start + static_cast<double>(e.index + 1) / f.rate;
        if (next < f.stop) {
          SimEvent ev = make_event(next, EventKind::kDataInjection);
          ev.flow = e.flow;
          ev.index = e.index + 1;
          push(std::move(ev));
        }
        return;
      }
      case EventKind::kRouteExpiry:
        for (NodeId i = 0; i < agents_.size(); ++i) transmit_all(i, agents_[i].expire_routes(now_));
        push(make_event(now_ + sc_.hello_interval, EventKind::kRouteExpiry));
        return;
      case EventKind::kSample: {
        trace::TraceRecord r;
        r.kind = trace::RecordKind::kSample;
        std::uint64_t total = 0;
        for (const auto& ag : agents_) total += ag.cache_entries();
        r.value = total;
        emit(r);
        push(make_event(now_ + sc_.sample_interval, EventKind::kSample));
        return;
      }
    }
  }

  Scenario sc_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::vector<NodeAgent> agents_;
  std::map<Key, LinkStatus> links_;
  std::map<Key, LinkParams> params_;
  std::optional<mobility::MobilityState> mob_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventLater> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::uint64_t adhoc_seq_ = 0;
  SimTime now_ = 0.0;
  std::vector<std::string> lines_;
  std::vector<DeliveryRecord> deliveries_;
  std::vector<MaintenanceRecord> maint_log_;
  std::vector<HeightRecord> height_log_;
  std::vector<TransmitRecord> tx_log_;
  std::uint64_t copies_sent_ = 0;
  std::uint64_t copies_received_ = 0;
  std::uint64_t copies_dropped_ = 0;
};

}  // namespace anttora::sim
