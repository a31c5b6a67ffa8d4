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

// Per-node protocol state machine: route discovery with query ants, QoS
// admission into the route cache, link-reversal maintenance, route erasure,
// HELLO-based neighbor estimation and energy bookkeeping.
//
// The agent never touches a clock or the network directly. The simulator
// feeds it events and transmits whatever it returns.

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anttora/aco.hpp"
#include "anttora/energy.hpp"
#include "anttora/height.hpp"
#include "anttora/packets.hpp"
#include "anttora/route_cache.hpp"
#include "anttora/types.hpp"

namespace anttora {

struct AgentConfig {
  Mode mode = Mode::kAntTora;
  QosConstraints qos;
  aco::DepositWeights deposit;
  aco::PreferenceWeights preference;
  aco::NormalizationBounds bounds;
  double tau0 = 0.1;
  double hello_interval = 1.0;
  std::int64_t hello_bits = 512;
  int hello_loss_threshold = 3;
  double route_ttl = 10.0;
  double processing_delay = 0.0005;
  double drain_ewma = 0.3;
  std::size_t queue_limit = 64;
  double discovery_backoff = 1.0;
  // Floors keeping the preference terms finite before any energy is spent.
  double drain_floor = 1e-6;
  double tau_floor = 1e-12;
};

struct NeighborInfo {
  NodeId neighbor = 0;
  double residual_energy = 0.0;
  double drain_rate = 0.0;
  double est_bandwidth = 0.0;  // 0 until the first HELLO
  double link_delay = 0.0;     // HELLO latency minus own processing delay
  SimTime last_hello = kNever;
  SimTime active_since = 0.0;
  bool heard = false;
};

/// A packet to put on the air. No recipient means local broadcast.
struct Emission {
  packets::Packet packet;
  std::optional<NodeId> to;
};

using Emissions = std::vector<Emission>;

struct AgentEvent {
  enum class Kind { kHeight, kMaintenance };
  Kind kind = Kind::kHeight;
  NodeId destination = 0;
  tora::Height height;
  tora::MaintenanceCase maintenance = tora::MaintenanceCase::kGenerate;
};

struct DataResult {
  Emissions emissions;
  std::optional<packets::DataPacket> delivered;
  std::vector<std::pair<packets::DataPacket, std::string>> dropped;
};

/// Everything a node tracks about one destination.
struct DestinationState {
  using RequestKey = std::pair<NodeId, SimTime>;  // (source, request start time)

  tora::NodeToraState tora;
  aco::PheromoneTable pheromone;
  RouteCache cache;
  std::set<RequestKey> seen_requests;
  std::map<RequestKey, SimTime> answered;  // last reply broadcast per request
  std::map<NodeId, NodeId> reverse_hop;    // source -> neighbor leading back to it
  std::optional<packets::QryRequestAnt> pending_request;
  SimTime searching_since = kNever;  // when RR was last (re)armed
  std::set<NodeId> relay_for;        // sources whose next reply this node relays
  std::set<std::pair<SimTime, NodeId>> known_levels;  // (tau, oid) of levels seen in UPDs
  std::deque<packets::DataPacket> queue;
  SimTime last_discovery = kNever;
  SimTime last_data = kNever;
};

class NodeAgent {
 public:
  NodeAgent(NodeId id, AgentConfig config, double initial_energy)
      : id_(id), cfg_(std::move(config)), energy_(initial_energy) {}

  NodeId id() const { return id_; }
  const AgentConfig& config() const { return cfg_; }
  NodeEnergy& energy() { return energy_; }
  const NodeEnergy& energy() const { return energy_; }
  const std::map<NodeId, NeighborInfo>& neighbors() const { return neighbors_; }
  const std::map<NodeId, DestinationState>& destinations() const { return dests_; }

  const DestinationState* destination_state(NodeId d) const {
    auto it = dests_.find(d);
    return it == dests_.end() ? nullptr : &it->second;
  }

  std::vector<AgentEvent> take_events() { return std::exchange(events_, {}); }

  std::size_t cache_entries() const {
    std::size_t n = 0;
    for (const auto& [d, ds] : dests_) n += ds.cache.size();
    return n;
  }

  // ---- neighbor management -------------------------------------------

  Emissions on_link_up(NodeId j, SimTime now) {
    Emissions out;
    if (j == id_ || neighbors_.contains(j)) return out;
    NeighborInfo info;
    info.neighbor = j;
    info.last_hello = now;
    info.active_since = now;
    neighbors_[j] = info;
    for (auto& [d, ds] : dests_) {
      ds.tora.add_neighbor(j);
      if (ds.tora.route_required() && ds.pending_request) {
        out.push_back(Emission{*ds.pending_request, std::nullopt});
      }
    }
    return out;
  }

  Emissions on_link_failure(NodeId j, SimTime now) {
    Emissions out;
    if (!neighbors_.contains(j)) return out;
    neighbors_.erase(j);
    for (auto& [d, ds] : dests_) {
      const tora::LinkState* ls = nullptr;
      if (auto it = ds.tora.links().find(j); it != ds.tora.links().end()) ls = &it->second;
      const bool was_downstream = ls && ls->direction == tora::LinkDirection::kDownstream;
      ds.tora.remove_neighbor(j);
      ds.pheromone.erase(j);
      ds.cache.purge_next_hop(j);
      update_preferences(ds, now);

      if (!ds.tora.is_destination() && !ds.tora.own_height().is_null() && was_downstream &&
          !tora::has_downstream(ds.tora)) {
        // No outbound link left: tell the sources, then repair locally. The
        // lost neighbor is named unless it is the destination itself.
        const NodeId lost = j == d ? id_ : j;
        for (const auto& [source, hop] : ds.reverse_hop) {
          if (source == id_ || !neighbors_.contains(hop)) continue;
          out.push_back(Emission{packets::ErrorPacket{source, lost, d}, hop});
        }
        auto outcome = tora::maintenance_case(ds.tora, tora::MaintenanceTrigger::kLinkFailure, now);
        append(out, apply_outcome(ds, outcome, now));
      }
      if (wants_route(ds, now) && !ds.cache.has_unexpired(now)) {
        append(out, initiate_discovery(ds, now));
      }
    }
    return out;
  }

  const NeighborInfo& on_hello(const packets::HelloAnt& hello, SimTime receive_time) {
    if (!(receive_time > hello.send_time)) {
      throw PreconditionError("on_hello: receive_time must exceed send_time");
    }
    NeighborInfo& n = neighbors_[hello.sender];
    n.neighbor = hello.sender;
    const double latency = receive_time - hello.send_time;
    n.est_bandwidth = static_cast<double>(hello.size_bits) / latency;
    n.link_delay = std::max(0.0, latency - cfg_.processing_delay);
    n.residual_energy = hello.residual_energy;
    n.drain_rate = hello.drain_rate;
    n.last_hello = receive_time;
    n.heard = true;
    return n;
  }

  /// Periodic HELLO: closes the drain-rate window, declares silent
  /// neighbors lost and announces this node.
  Emissions hello_tick(SimTime now) {
    Emissions out;
    energy_.close_window(cfg_.hello_interval, cfg_.drain_ewma);
    const double limit = cfg_.hello_loss_threshold * cfg_.hello_interval;
    std::vector<NodeId> silent;
    for (const auto& [j, n] : neighbors_) {
      if (now - n.last_hello > limit) silent.push_back(j);
    }
    for (NodeId j : silent) append(out, on_link_failure(j, now));
    if (!energy_.depleted()) {
      out.push_back(Emission{packets::HelloAnt{id_, now, energy_.residual(), energy_.drain_rate(),
                                               cfg_.hello_bits},
                             std::nullopt});
    }
    return out;
  }

  // ---- route discovery -------------------------------------------------

  Emissions on_qry_request(const packets::QryRequestAnt& req, NodeId from, SimTime now) {
    Emissions out;
    if (req.source == id_ || std::ranges::find(req.visited, id_) != req.visited.end()) return out;
    DestinationState& ds = dest(req.destination);
    const DestinationState::RequestKey key{req.source, req.request_start_time};
    const bool first_copy = ds.seen_requests.insert(key).second;
    if (first_copy) ds.reverse_hop.try_emplace(req.source, from);

    if (ds.tora.is_destination()) {
      packets::QryReplyAnt rep;
      rep.metrics = aco::seed_metrics(cfg_.processing_delay, energy_.residual(), energy_.drain_rate());
      rep.source = req.source;
      rep.destination = id_;
      rep.to_visit.assign(req.visited.rbegin(), req.visited.rend());
      rep.route = {id_};
      rep.reporter_height = ds.tora.own_height();
      out.push_back(Emission{std::move(rep), std::nullopt});
      return out;
    }

    if (!tora::has_downstream(ds.tora)) {
      // Already searching; a fresh query may re-arm a search whose reply was lost.
      if (ds.tora.route_required() &&
          (!first_copy || now - ds.searching_since < cfg_.discovery_backoff)) {
        return out;
      }
      auto fwd = forwarded_request(req, from);
      if (ds.tora.own_height().is_null()) {
        ds.tora.set_route_required(true);
        ds.pending_request = fwd;
        ds.searching_since = now;
      } else if (!first_copy) {
        return out;
      }
      out.push_back(Emission{std::move(fwd), std::nullopt});
      return out;
    }

    if (ds.tora.own_height().is_null()) {
      set_height(ds, tora::new_height_on_reply(ds.tora));
    } else if (auto it = ds.answered.find(key);
               it != ds.answered.end() && it->second >= link_active_since(from)) {
      return out;
    }

    const RouteCacheEntry* best = ds.cache.best(now);
    if (best == nullptr) {
      // A downstream neighbor is known but no path through it; keep searching.
      if (first_copy) {
        ds.relay_for.insert(req.source);
        out.push_back(Emission{forwarded_request(req, from), std::nullopt});
      }
      return out;
    }
    ds.answered[key] = now;
    packets::QryReplyAnt rep;
    rep.metrics = best->metrics;
    rep.source = req.source;
    rep.destination = req.destination;
    rep.to_visit.assign(req.visited.rbegin(), req.visited.rend());
    rep.route = best->path;
    rep.reporter_height = ds.tora.own_height();
    out.push_back(Emission{std::move(rep), std::nullopt});
    return out;
  }

  Emissions on_qry_reply(const packets::QryReplyAnt& rep, NodeId from, SimTime now) {
    Emissions out;
    if (rep.destination == id_ || !neighbors_.contains(from)) return out;
    DestinationState& ds = dest(rep.destination);
    const bool known =
        rep.source == id_ || std::ranges::any_of(ds.seen_requests, [&](const auto& k) {
          return k.first == rep.source;
        });
    if (!known) return out;

    ds.tora.set_neighbor_height(from, rep.reporter_height);

    const NeighborInfo& link = neighbors_.at(from);
    const bool in_route = std::ranges::find(rep.route, id_) != rep.route.end();
    if (in_route || !link.heard || rep.reporter_height.is_null()) return out;

    const aco::PathMetrics metrics =
        aco::extend(rep.metrics, link.link_delay, link.est_bandwidth, cfg_.processing_delay,
                    energy_.residual(), energy_.drain_rate());
    std::vector<NodeId> path{id_};
    path.insert(path.end(), rep.route.begin(), rep.route.end());

    if (cfg_.mode == Mode::kAntTora) {
      const double deposit =
          aco::pheromone_deposit(aco::normalize(metrics, cfg_.bounds), cfg_.deposit);
      ds.pheromone.reinforce(from, deposit, cfg_.preference.rho, cfg_.tau0);
    }
    admit(ds, path, metrics, now);

    const bool relay = rep.source != id_ &&
                       (ds.tora.route_required() || ds.relay_for.erase(rep.source) > 0);
    if (ds.tora.route_required()) set_height(ds, tora::new_height_on_reply(ds.tora));
    if (relay) {
      packets::QryReplyAnt fwd;
      fwd.metrics = metrics;
      fwd.source = rep.source;
      fwd.destination = rep.destination;
      fwd.to_visit = rep.to_visit;
      if (!fwd.to_visit.empty() && fwd.to_visit.front() == id_) {
        fwd.to_visit.erase(fwd.to_visit.begin());
      }
      fwd.route = path;
      fwd.reporter_height = ds.tora.own_height();
      out.push_back(Emission{std::move(fwd), std::nullopt});
    }
    append(out, flush_queue(ds, now));
    return out;
  }

  // ---- maintenance and erasure ----------------------------------------

  Emissions on_upd(const packets::UpdPacket& upd, NodeId from, SimTime now) {
    Emissions out;
    if (!neighbors_.contains(from)) return out;
    DestinationState& ds = dest(upd.destination);
    ds.tora.set_neighbor_height(from, upd.height);
    bool purged = false;
    // A new level means its originator lost every downstream link.
    if (const auto& lvl = upd.height.level; lvl && lvl->tau > 0.0 &&
                                             ds.known_levels.insert({lvl->tau, lvl->oid}).second) {
      purged = ds.cache.purge_containing(lvl->oid) > 0;
    }
    // A neighbor that moved above us no longer carries our routes.
    if (ds.tora.links().at(from).direction != tora::LinkDirection::kDownstream) {
      purged = ds.cache.purge_next_hop(from) > 0 || purged;
    }
    if (purged) {
      update_preferences(ds, now);
    }
    if (ds.tora.is_destination() || ds.tora.own_height().is_null()) return out;
    if (tora::has_downstream(ds.tora)) return out;
    auto outcome = tora::maintenance_case(ds.tora, tora::MaintenanceTrigger::kUpdReversal, now);
    append(out, apply_outcome(ds, outcome, now));
    return out;
  }

  Emissions on_error(const packets::ErrorPacket& err, NodeId from, SimTime now) {
    (void)from;
    Emissions out;
    DestinationState& ds = dest(err.destination);
    ds.cache.purge_containing(err.originator);
    update_preferences(ds, now);
    if (err.source == id_) {
      if (!ds.cache.has_unexpired(now) && wants_route(ds, now)) {
        append(out, initiate_discovery(ds, now));
      }
      return out;
    }
    if (auto it = ds.reverse_hop.find(err.source);
        it != ds.reverse_hop.end() && neighbors_.contains(it->second)) {
      out.push_back(Emission{err, it->second});
    }
    return out;
  }

  Emissions on_clr(const packets::ClrPacket& clr, NodeId from, SimTime now) {
    (void)from;
    Emissions out;
    DestinationState& ds = dest(clr.destination);
    if (ds.tora.is_destination()) return out;
    const bool had_downstream = tora::has_downstream(ds.tora);
    const bool was_null = ds.tora.own_height().is_null();
    auto result = tora::apply_clr(ds.tora, clr.reference_level);
    ds.tora = std::move(result.state);
    for (NodeId j : result.cleared) ds.cache.purge_next_hop(j);
    update_preferences(ds, now);
    if (result.rebroadcast) {
      record_height(ds);
      out.push_back(Emission{clr, std::nullopt});
      return out;
    }
    if (!was_null && had_downstream && !tora::has_downstream(ds.tora)) {
      auto outcome = tora::maintenance_case(ds.tora, tora::MaintenanceTrigger::kLinkFailure, now);
      append(out, apply_outcome(ds, outcome, now));
    }
    return out;
  }

  // ---- data ------------------------------------------------------------

  /// Hands an application packet to this node as source.
  DataResult send_data(packets::DataPacket pkt, SimTime now) {
    DataResult res;
    DestinationState& ds = dest(pkt.destination);
    ds.last_data = now;
    ds.cache.purge_expired(now);
    if (const RouteCacheEntry* best = ds.cache.best(now)) {
      res.emissions.push_back(dispatch(ds, std::move(pkt), *best, now));
      return res;
    }
    if (ds.queue.size() >= cfg_.queue_limit) {
      res.dropped.emplace_back(std::move(pkt), "queue_full");
    } else {
      ds.queue.push_back(std::move(pkt));
    }
    res.emissions = initiate_discovery(ds, now);
    return res;
  }

  DataResult on_data(packets::DataPacket pkt, NodeId from, SimTime now) {
    DataResult res;
    (void)now;
    const std::size_t here = pkt.hop + 1;
    if (here >= pkt.route.size() || pkt.route[here] != id_) {
      res.dropped.emplace_back(std::move(pkt), "misrouted");
      return res;
    }
    pkt.hop = static_cast<std::uint32_t>(here);
    if (here + 1 == pkt.route.size()) {
      res.delivered = std::move(pkt);
      return res;
    }
    dest(pkt.destination).reverse_hop.try_emplace(pkt.source, from);
    const NodeId next = pkt.route[here + 1];
    if (!neighbors_.contains(next)) {
      res.dropped.emplace_back(std::move(pkt), "no_link");
      return res;
    }
    res.emissions.push_back(Emission{std::move(pkt), next});
    return res;
  }

  // ---- timers ----------------------------------------------------------

  void evaporation_tick(SimTime now) {
    if (cfg_.mode != Mode::kAntTora) return;
    for (auto& [d, ds] : dests_) {
      ds.pheromone.evaporate_all(cfg_.preference.q);
      update_preferences(ds, now);
    }
  }

  Emissions expire_routes(SimTime now) {
    Emissions out;
    for (auto& [d, ds] : dests_) {
      if (ds.cache.purge_expired(now) > 0) update_preferences(ds, now);
      if (!ds.queue.empty() && !ds.cache.has_unexpired(now)) {
        append(out, initiate_discovery(ds, now));
      }
    }
    return out;
  }

  /// Starts a discovery toward `destination` if the backoff allows.
  Emissions discover(NodeId destination, SimTime now) {
    return initiate_discovery(dest(destination), now);
  }

  /// Routes every received packet to its handler.
  DataResult receive(const packets::Packet& packet, NodeId from, SimTime now) {
    DataResult res;
    if (!std::holds_alternative<packets::HelloAnt>(packet) &&
        !std::holds_alternative<packets::DataPacket>(packet) && !neighbors_.contains(from)) {
      return res;
    }
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, packets::HelloAnt>) {
            if (!neighbors_.contains(p.sender)) res.emissions = on_link_up(p.sender, now);
            on_hello(p, now);
          } else if constexpr (std::is_same_v<T, packets::QryRequestAnt>) {
            res.emissions = on_qry_request(p, from, now);
          } else if constexpr (std::is_same_v<T, packets::QryReplyAnt>) {
            res.emissions = on_qry_reply(p, from, now);
          } else if constexpr (std::is_same_v<T, packets::UpdPacket>) {
            res.emissions = on_upd(p, from, now);
          } else if constexpr (std::is_same_v<T, packets::ErrorPacket>) {
            res.emissions = on_error(p, from, now);
          } else if constexpr (std::is_same_v<T, packets::ClrPacket>) {
            res.emissions = on_clr(p, from, now);
          } else {
            res = on_data(p, from, now);
          }
        },
        packet);
    return res;
  }

  DestinationState& dest(NodeId d) {
    auto [it, fresh] = dests_.try_emplace(d);
    if (fresh) {
      it->second.tora = tora::NodeToraState(id_, d);
      for (const auto& [j, n] : neighbors_) it->second.tora.add_neighbor(j);
    }
    return it->second;
  }

 private:
  static void append(Emissions& out, Emissions more) {
    for (auto& e : more) out.push_back(std::move(e));
  }

  SimTime link_active_since(NodeId j) const {
    auto it = neighbors_.find(j);
    return it == neighbors_.end() ? 0.0 : it->second.active_since;
  }

  bool wants_route(const DestinationState& ds, SimTime now) const {
    return !ds.queue.empty() || (ds.last_data != kNever && now - ds.last_data <= cfg_.route_ttl);
  }

  packets::QryRequestAnt forwarded_request(const packets::QryRequestAnt& req, NodeId from) const {
    packets::QryRequestAnt fwd = req;
    double bw = 0.0;
    if (auto it = neighbors_.find(from); it != neighbors_.end()) bw = it->second.est_bandwidth;
    if (bw > 0.0) {
      fwd.min_bandwidth_seen =
          fwd.min_bandwidth_seen > 0.0 ? std::min(fwd.min_bandwidth_seen, bw) : bw;
    }
    fwd.visited.push_back(id_);
    return fwd;
  }

  void record_height(const DestinationState& ds) {
    events_.push_back(AgentEvent{AgentEvent::Kind::kHeight, ds.tora.destination(),
                                 ds.tora.own_height(), {}});
  }

  void set_height(DestinationState& ds, const tora::Height& h) {
    if (!h.is_null()) {
      ds.tora.set_route_required(false);
      ds.pending_request.reset();
    }
    if (ds.tora.own_height() == h) return;
    ds.tora.set_own_height(h);
    record_height(ds);
  }

  Emissions apply_outcome(DestinationState& ds, const tora::MaintenanceOutcome& outcome,
                          SimTime now) {
    Emissions out;
    const NodeId d = ds.tora.destination();
    events_.push_back(AgentEvent{AgentEvent::Kind::kMaintenance, d, outcome.new_height,
                                 outcome.kind});
    if (outcome.kind == tora::MaintenanceCase::kDetectPartition) {
      tora::ReferenceLevel level{};
      for (const auto& [j, ls] : ds.tora.links()) {
        if (!ls.mirrored.is_null()) {
          level = *ls.mirrored.level;
          break;
        }
      }
      level.reflected = 1;
      tora::erase_heights(ds.tora);
      record_height(ds);
      ds.cache.purge_if([&](const RouteCacheEntry& e) { return e.next_hop() != d; });
      update_preferences(ds, now);
      out.push_back(Emission{packets::ClrPacket{d, level}, std::nullopt});
      return out;
    }
    set_height(ds, outcome.new_height);
    if (outcome.broadcast == tora::Broadcast::kUpd) {
      out.push_back(Emission{packets::UpdPacket{d, ds.tora.own_height()}, std::nullopt});
    } else if (outcome.new_height.is_null() && !ds.tora.links().empty()) {
      // Neighbors still mirror the old height; withdraw it.
      out.push_back(Emission{packets::UpdPacket{d, ds.tora.own_height()}, std::nullopt});
    }
    return out;
  }

  Emissions initiate_discovery(DestinationState& ds, SimTime now) {
    Emissions out;
    if (ds.tora.is_destination()) return out;
    if (ds.last_discovery != kNever && now - ds.last_discovery < cfg_.discovery_backoff) return out;
    ds.last_discovery = now;
    packets::QryRequestAnt req;
    req.request_start_time = now;
    req.source = id_;
    req.destination = ds.tora.destination();
    req.visited = {id_};
    ds.seen_requests.insert({id_, now});
    if (ds.tora.own_height().is_null()) {
      ds.tora.set_route_required(true);
      ds.pending_request = req;
      ds.searching_since = now;
    }
    out.push_back(Emission{std::move(req), std::nullopt});
    return out;
  }

  void admit(DestinationState& ds, const std::vector<NodeId>& path,
             const aco::PathMetrics& metrics, SimTime now) {
    if (!loop_free(path)) return;
    if (cfg_.mode == Mode::kAntTora && !cfg_.qos.satisfied_by(metrics)) return;
    RouteCacheEntry e;
    e.path = path;
    e.metrics = metrics;
    e.created_at = now;
    e.expires_at = now + cfg_.route_ttl;
    ds.cache.insert(std::move(e));
    update_preferences(ds, now);
  }

  /// Ranks cached paths. Baseline mode scores every path equally so the
  /// first discovered one wins the age tie-break.
  void update_preferences(DestinationState& ds, SimTime now) {
    (void)now;
    auto& entries = ds.cache.entries();
    if (entries.empty()) return;
    if (cfg_.mode != Mode::kAntTora) {
      for (auto& e : entries) e.preference = 1.0;
      return;
    }
    std::vector<aco::CandidateEntry> cands;
    cands.reserve(entries.size());
    for (const auto& e : entries) {
      aco::CandidateEntry c;
      c.next_hop = e.next_hop();
      c.tau = std::max(ds.pheromone.get(c.next_hop), cfg_.tau_floor);
      c.metrics = e.metrics;
      c.metrics.drain_rate = std::max(c.metrics.drain_rate, cfg_.drain_floor);
      cands.push_back(c);
    }
    try {
      auto probs = aco::path_preference(cands, cfg_.preference);
      for (std::size_t i = 0; i < entries.size(); ++i) entries[i].preference = probs[i].probability;
    } catch (const aco::NoPreferablePath&) {
      for (auto& e : entries) e.preference = 0.0;
    }
  }

  Emission dispatch(DestinationState& ds, packets::DataPacket pkt, const RouteCacheEntry& route,
                    SimTime now) {
    pkt.route = route.path;
    pkt.hop = 0;
    pkt.sent_at = now;
    ds.cache.refresh(route.path, now + cfg_.route_ttl);
    const NodeId next = pkt.route[1];
    return Emission{std::move(pkt), next};
  }

  Emissions flush_queue(DestinationState& ds, SimTime now) {
    Emissions out;
    while (!ds.queue.empty()) {
      const RouteCacheEntry* best = ds.cache.best(now);
      if (best == nullptr) break;
      auto pkt = std::move(ds.queue.front());
      ds.queue.pop_front();
      out.push_back(dispatch(ds, std::move(pkt), *best, now));
    }
    return out;
  }

  NodeId id_;
  AgentConfig cfg_;
  NodeEnergy energy_;
  std::map<NodeId, NeighborInfo> neighbors_;
  std::map<NodeId, DestinationState> dests_;
  std::vector<AgentEvent> events_;
};

}  // namespace anttora
