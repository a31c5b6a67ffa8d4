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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "anttora/mobility.hpp"
#include "anttora/simulator.hpp"
#include "oracles.hpp"

namespace {

using namespace anttora;
using trace::RecordKind;

Scenario static_scenario(std::size_t n, std::vector<std::pair<NodeId, NodeId>> links) {
  Scenario s;
  s.node_count = n;
  s.links = std::move(links);
  s.end_time = 10.0;
  return s;
}

std::vector<trace::TraceRecord> records(const sim::Simulator& sim) {
  std::vector<trace::TraceRecord> out;
  for (const auto& l : sim.trace_lines()) out.push_back(trace::decode_record(l));
  return out;
}

bool is_hello(const trace::TraceRecord& r) {
  return r.packet && std::holds_alternative<packets::HelloAnt>(*r.packet);
}

TEST(Simulator, EmptyScenarioLeavesOnlyTheHeader) {
  Scenario s;
  sim::Simulator sim(s, 3);
  sim.run();
  ASSERT_EQ(sim.trace_lines().size(), 1u);
  EXPECT_EQ(trace::decode_record(sim.trace_lines()[0]).kind, RecordKind::kMeta);
}

TEST(Simulator, SameSeedSameTrace) {
  Scenario s = static_scenario(4, {{0, 1}, {1, 2}, {2, 3}});
  s.flows.push_back(FlowSpec{0, 3, 2.0, 1000, 2.0, 7.0});
  sim::Simulator a(s, 11), b(s, 11), c(s, 12);
  a.run();
  b.run();
  c.run();
  EXPECT_EQ(a.trace_lines(), b.trace_lines());
  EXPECT_NE(a.trace_lines(), c.trace_lines());
}

TEST(Simulator, SingleHopLatency) {
  Scenario s = static_scenario(2, {{0, 1}});
  s.capacity = 1e6;
  s.propagation_delay = 0.001;
  s.default_processing_delay = 0.0005;
  s.hello_bits = 1000;
  s.end_time = 3.0;
  sim::Simulator sim(s, 5);
  sim.run();
  const auto recs = records(sim);
  std::size_t checked = 0;
  for (const auto& rx : recs) {
    if (rx.kind != RecordKind::kReceive || !is_hello(rx)) continue;
    const auto& h = std::get<packets::HelloAnt>(*rx.packet);
    EXPECT_NEAR(rx.time - h.send_time, 0.0025, 1e-6);
    ++checked;
  }
  EXPECT_GE(checked, 4u);
}

TEST(Simulator, MultiHopDelayMatchesLinkSum) {
  Scenario s = static_scenario(4, {{0, 1}, {1, 2}, {2, 3}});
  s.capacity = 1e6;
  s.link_overrides.push_back(LinkOverride{1, 2, 5e5, 0.004});
  s.processing_delay = {0.0001, 0.0002, 0.0003, 0.0004};
  s.flows.push_back(FlowSpec{0, 3, 2.0, 1000, 2.0, 7.0});
  sim::Simulator sim(s, 7);
  sim.run();
  ASSERT_FALSE(sim.deliveries().empty());
  const auto link = [&](NodeId a, NodeId b) {
    const auto p = sim.link_params(a, b);
    return std::pair{p.capacity, p.propagation_delay};
  };
  const auto proc = [&](NodeId n) { return s.processing_delay_of(n); };
  for (const auto& d : sim.deliveries()) {
    EXPECT_EQ(d.packet.route, (std::vector<NodeId>{0, 1, 2, 3}));
    EXPECT_NEAR(d.delivered_at - d.packet.sent_at,
                oracle::path_delay(d.packet.route, 1000.0, link, proc), 1e-12);
  }
}

TEST(Simulator, BroadcastReachesEveryNeighborOnce) {
  Scenario s = static_scenario(4, {{0, 1}, {0, 2}, {0, 3}});
  s.end_time = 2.0;
  sim::Simulator sim(s, 9);
  sim.run();
  const auto recs = records(sim);
  for (const auto& tx : recs) {
    if (tx.kind != RecordKind::kTransmit || tx.node != 0 || !is_hello(tx)) continue;
    std::set<NodeId> got;
    for (const auto& rx : recs) {
      if (rx.kind == RecordKind::kReceive && rx.peer == 0 && rx.packet == tx.packet) {
        EXPECT_TRUE(got.insert(rx.node).second);
      }
    }
    EXPECT_EQ(got, (std::set<NodeId>{1, 2, 3}));
  }
}

TEST(Simulator, InFlightCopiesDieWithTheLink) {
  Scenario s = static_scenario(2, {{0, 1}});
  s.capacity = 1e4;  // long transmissions
  s.end_time = 5.0;
  sim::Simulator sim(s, 13);
  while (sim.step()) {
    const auto& log = sim.transmit_log();
    if (!log.empty() && log.back().node == 0 && log.back().type == "hello") break;
  }
  const SimTime sent = sim.now();
  sim.schedule_link_change(sent + 0.001, 0, 1, false);
  sim.run_until(sent + 0.2);
  bool dropped = false;
  for (const auto& r : records(sim)) {
    if (r.time <= sent) continue;
    EXPECT_NE(r.kind, RecordKind::kReceive);
    if (r.kind == RecordKind::kDrop && r.text == "link_down" && r.node == 1) dropped = true;
  }
  EXPECT_TRUE(dropped);
}

TEST(Simulator, CopyConservationAndCausality) {
  Scenario s;
  s.node_count = 12;
  s.topology = TopologyMode::kMobility;
  s.mobility.width = 600;
  s.mobility.height = 600;
  s.mobility.comm_range = 220;
  s.mobility.min_speed = 5;
  s.mobility.max_speed = 20;
  s.flows.push_back(FlowSpec{0, 11, 4.0, 2048, 1.0, 15.0});
  s.flows.push_back(FlowSpec{3, 7, 4.0, 2048, 1.0, 15.0});
  s.end_time = 20.0;
  sim::Simulator sim(s, 21);
  for (SimTime t = 1.0; t <= 20.0; t += 1.0) {
    sim.run_until(t);
    EXPECT_EQ(sim.copies_sent(), sim.copies_received() + sim.copies_dropped() + sim.copies_in_flight());
  }
  const auto recs = records(sim);
  std::multiset<std::string> open;  // sender|packet of copies on the air
  SimTime last = 0.0;
  for (const auto& r : recs) {
    EXPECT_GE(r.time, last);
    last = r.time;
    if (!r.packet) continue;
    const std::string key = std::to_string(r.kind == RecordKind::kTransmit ? r.node : r.peer.value_or(r.node)) +
                            "|" + packets::encode_trace(*r.packet, 0.0);
    if (r.kind == RecordKind::kTransmit) {
      open.insert(key);
    } else if (r.kind == RecordKind::kReceive) {
      EXPECT_TRUE(open.contains(key)) << "receive without transmit at " << r.time;
    }
  }
  // Energy ledger: every debit is accounted for in the residual.
  for (NodeId i = 0; i < sim.node_count(); ++i) {
    const auto& e = sim.agent(i).energy();
    EXPECT_NEAR(s.initial_energy - e.residual(), e.total_spent(), 1e-9);
  }
  // Traced debits carry six decimals each.
  std::map<NodeId, std::pair<double, std::size_t>> traced;
  for (const auto& r : recs) {
    if (r.cost == 0.0) continue;
    traced[r.node].first += r.cost;
    ++traced[r.node].second;
  }
  for (const auto& [i, t] : traced) {
    EXPECT_NEAR(t.first, sim.agent(i).energy().total_spent(), 5e-7 * static_cast<double>(t.second) + 1e-12);
  }
}

// ---- mobility ------------------------------------------------------------

mobility::MobilityState two_nodes(mobility::Vec2 a, mobility::Vec2 b, std::mt19937_64& rng) {
  auto st = mobility::make_state({a, b}, 1000, 1000, 250, 1, 1, 1e6, rng);
  for (auto& n : st.nodes) {
    n.waypoint = n.position;
    n.speed = 0.0;
    n.pause_left = 1e6;
  }
  return st;
}

TEST(Mobility, StillNodesNeverChangeLinks) {
  std::mt19937_64 rng(1);
  auto st = two_nodes({100, 100}, {200, 100}, rng);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(mobility::step_mobility(st, 1.0, rng).empty());
  EXPECT_TRUE(st.connected[0][1]);
}

TEST(Mobility, SeparatingPairBreaksOnce) {
  std::mt19937_64 rng(1);
  auto st = two_nodes({100, 100}, {200, 100}, rng);
  st.nodes[1].waypoint = {600, 100};
  st.nodes[1].speed = 10.0;
  st.nodes[1].pause_left = 0.0;
  std::vector<mobility::LinkChange> all;
  for (int i = 0; i < 6; ++i) {
    for (auto c : mobility::step_mobility(st, 10.0, rng)) {
      c.offset += 10.0 * i;
      all.push_back(c);
    }
  }
  ASSERT_EQ(all.size(), 1u);
  EXPECT_FALSE(all[0].up);
  EXPECT_NEAR(all[0].offset, 15.0, 1e-9);
}

TEST(Mobility, DownThenUpInsideOneStepKeepsOrder) {
  std::mt19937_64 rng(1);
  auto st = two_nodes({0, 0}, {200, 0}, rng);
  st.nodes[0].waypoint = {1000, 0};
  st.nodes[0].speed = 10.0;
  st.nodes[0].pause_left = 0.0;
  st.nodes[1].waypoint = {600, 0};
  st.nodes[1].speed = 100.0;
  st.nodes[1].pause_left = 0.0;
  auto changes = mobility::step_mobility(st, 40.0, rng);
  ASSERT_EQ(changes.size(), 2u);
  EXPECT_FALSE(changes[0].up);
  EXPECT_TRUE(changes[1].up);
  EXPECT_NEAR(changes[0].offset, 50.0 / 90.0, 1e-9);
  EXPECT_NEAR(changes[1].offset, 35.0, 1e-9);
  EXPECT_TRUE(st.connected[0][1]);
}

TEST(Mobility, StepMustMoveTimeForward) {
  std::mt19937_64 rng(1);
  auto st = two_nodes({0, 0}, {1, 0}, rng);
  EXPECT_THROW(mobility::step_mobility(st, 0.0, rng), PreconditionError);
}

TEST(Mobility, NodesStayInsideTheArea) {
  std::mt19937_64 rng(4);
  std::vector<mobility::Vec2> pos;
  for (int i = 0; i < 10; ++i) pos.push_back({50.0 * i, 30.0 * i});
  auto st = mobility::make_state(pos, 500, 300, 150, 5, 30, 0.5, rng);
  for (int k = 0; k < 200; ++k) {
    mobility::step_mobility(st, 0.5, rng);
    for (const auto& n : st.nodes) {
      EXPECT_GE(n.position.x, -1e-9);
      EXPECT_LE(n.position.x, 500 + 1e-9);
      EXPECT_GE(n.position.y, -1e-9);
      EXPECT_LE(n.position.y, 300 + 1e-9);
    }
  }
}

}  // namespace
