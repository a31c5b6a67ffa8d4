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

// Scenario description, validation and JSON ingestion.
//
// Parsing is strict: unknown keys are errors, and every problem is reported
// with the JSON path of the offending field.

#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "anttora/aco.hpp"
#include "anttora/energy.hpp"
#include "anttora/types.hpp"

namespace anttora {

enum class TopologyMode { kStatic, kMobility };

struct LinkOverride {
  NodeId a = 0;
  NodeId b = 0;
  double capacity = 0.0;
  double propagation_delay = 0.0;
};

struct LinkEventSpec {
  SimTime time = 0.0;
  NodeId a = 0;
  NodeId b = 0;
  bool up = false;
};

struct MobilitySpec {
  double width = 1000.0;
  double height = 1000.0;
  double comm_range = 250.0;
  double min_speed = 1.0;
  double max_speed = 10.0;
  double pause = 0.0;
  double step = 0.1;
};

struct FlowSpec {
  NodeId source = 0;
  NodeId destination = 0;
  double rate = 1.0;  // packets per second
  std::int64_t packet_bits = 4096;
  SimTime start = 1.0;
  SimTime stop = 10.0;
};

struct Scenario {
  std::size_t node_count = 0;
  std::vector<std::array<double, 2>> positions;  // empty: placed from the seed
  double initial_energy = 100.0;
  std::vector<double> processing_delay;  // per node; empty: default for all
  double default_processing_delay = 0.0005;

  TopologyMode topology = TopologyMode::kStatic;
  std::vector<std::pair<NodeId, NodeId>> links;
  std::vector<LinkEventSpec> link_events;
  MobilitySpec mobility;

  double capacity = 2e6;
  double propagation_delay = 0.001;
  std::vector<LinkOverride> link_overrides;

  QosConstraints qos;
  aco::DepositWeights deposit;
  aco::PreferenceWeights preference;
  double tau0 = 0.1;
  double evaporation_period = 1.0;
  aco::NormalizationBounds normalization;

  double tx_cost_per_bit = 5e-7;
  double rx_cost_per_bit = 2.5e-7;
  double drain_ewma = 0.3;

  double hello_interval = 1.0;
  std::int64_t hello_bits = 512;
  int hello_loss_threshold = 3;
  double route_ttl = 10.0;
  std::size_t queue_limit = 64;
  double discovery_backoff = 1.0;
  double sample_interval = 1.0;

  std::vector<FlowSpec> flows;
  SimTime end_time = 30.0;
  std::uint64_t seed = 1;
  Mode mode = Mode::kAntTora;

  double processing_delay_of(NodeId n) const {
    return processing_delay.empty() ? default_processing_delay : processing_delay.at(n);
  }
};

struct FieldError {
  std::string path;
  std::string reason;
};

class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<FieldError> errors)
      : Error(render(errors)), errors_(std::move(errors)) {}
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  static std::string render(const std::vector<FieldError>& errors) {
    std::string s = "invalid scenario:";
    for (const auto& e : errors) s += "\n  " + e.path + ": " + e.reason;
    return s;
  }
  std::vector<FieldError> errors_;
};

/// Semantic checks on a fully populated scenario.
inline std::vector<FieldError> validate(const Scenario& s) {
  std::vector<FieldError> errs;
  auto bad = [&](std::string path, std::string why) { errs.push_back({std::move(path), std::move(why)}); };
  auto pos = [&](const std::string& path, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) bad(path, "must be positive and finite");
  };
  auto nonneg = [&](const std::string& path, double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) bad(path, "must be nonnegative and finite");
  };
  auto node_ok = [&](const std::string& path, NodeId n) {
    if (n >= s.node_count) bad(path, "node " + std::to_string(n) + " does not exist");
  };

  if (!s.positions.empty() && s.positions.size() != s.node_count) {
    bad("nodes.positions", "expected one position per node");
  }
  if (!s.processing_delay.empty() && s.processing_delay.size() != s.node_count) {
    bad("nodes.processing_delay", "expected one value per node");
  }
  for (std::size_t i = 0; i < s.processing_delay.size(); ++i) {
    pos("nodes.processing_delay[" + std::to_string(i) + "]", s.processing_delay[i]);
  }
  pos("nodes.processing_delay", s.default_processing_delay);
  nonneg("nodes.initial_energy", s.initial_energy);

  for (std::size_t i = 0; i < s.links.size(); ++i) {
    const auto path = "topology.links[" + std::to_string(i) + "]";
    node_ok(path, s.links[i].first);
    node_ok(path, s.links[i].second);
    if (s.links[i].first == s.links[i].second) bad(path, "self-loop");
  }
  for (std::size_t i = 0; i < s.link_events.size(); ++i) {
    const auto path = "topology.events[" + std::to_string(i) + "]";
    node_ok(path + ".a", s.link_events[i].a);
    node_ok(path + ".b", s.link_events[i].b);
    nonneg(path + ".time", s.link_events[i].time);
  }
  if (s.topology == TopologyMode::kMobility) {
    pos("topology.width", s.mobility.width);
    pos("topology.height", s.mobility.height);
    pos("topology.comm_range", s.mobility.comm_range);
    nonneg("topology.min_speed", s.mobility.min_speed);
    nonneg("topology.max_speed", s.mobility.max_speed);
    if (s.mobility.max_speed < s.mobility.min_speed) bad("topology.max_speed", "below min_speed");
    nonneg("topology.pause", s.mobility.pause);
    pos("topology.step", s.mobility.step);
  }

  pos("link.capacity", s.capacity);
  pos("link.propagation_delay", s.propagation_delay);
  for (std::size_t i = 0; i < s.link_overrides.size(); ++i) {
    const auto path = "link.overrides[" + std::to_string(i) + "]";
    node_ok(path + ".a", s.link_overrides[i].a);
    node_ok(path + ".b", s.link_overrides[i].b);
    pos(path + ".capacity", s.link_overrides[i].capacity);
    pos(path + ".propagation_delay", s.link_overrides[i].propagation_delay);
  }

  pos("qos.max_delay", s.qos.max_delay);
  pos("qos.min_bandwidth", s.qos.min_bandwidth);
  pos("qos.min_energy", s.qos.min_energy);
  pos("qos.max_drain_rate", s.qos.max_drain_rate);
  if (s.qos.max_hop_count <= 0) bad("qos.max_hop_count", "must be positive");

  const auto& d = s.deposit;
  nonneg("aco.deposit.lambda_bandwidth", d.lambda_bandwidth);
  nonneg("aco.deposit.lambda_energy", d.lambda_energy);
  nonneg("aco.deposit.lambda_delay", d.lambda_delay);
  nonneg("aco.deposit.lambda_hop_count", d.lambda_hop_count);
  nonneg("aco.deposit.lambda_drain_rate", d.lambda_drain_rate);
  for (std::size_t i = 0; i < 6; ++i) {
    nonneg("aco.preference.alpha[" + std::to_string(i) + "]", s.preference.alpha[i]);
  }
  if (!(s.preference.rho > 0.0 && s.preference.rho < 1.0)) bad("aco.preference.rho", "must be in (0,1)");
  if (!(s.preference.q > 0.0 && s.preference.q <= 1.0)) bad("aco.preference.q", "must be in (0,1]");
  pos("aco.tau0", s.tau0);
  pos("aco.evaporation_period", s.evaporation_period);
  auto range = [&](const std::string& path, const aco::Range& r) {
    if (!(r.hi > r.lo) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) bad(path, "needs finite lo < hi");
  };
  range("aco.normalization.bandwidth", s.normalization.bandwidth);
  range("aco.normalization.energy", s.normalization.energy);
  range("aco.normalization.delay", s.normalization.delay);
  range("aco.normalization.hop_count", s.normalization.hop_count);
  range("aco.normalization.drain_rate", s.normalization.drain_rate);

  nonneg("energy.tx_cost_per_bit", s.tx_cost_per_bit);
  nonneg("energy.rx_cost_per_bit", s.rx_cost_per_bit);
  if (!(s.drain_ewma > 0.0 && s.drain_ewma <= 1.0)) bad("energy.drain_ewma", "must be in (0,1]");

  pos("protocol.hello_interval", s.hello_interval);
  if (s.hello_bits <= 0) bad("protocol.hello_bits", "must be positive");
  if (s.hello_loss_threshold <= 0) bad("protocol.hello_loss_threshold", "must be positive");
  pos("protocol.route_ttl", s.route_ttl);
  if (s.queue_limit == 0) bad("protocol.queue_limit", "must be positive");
  nonneg("protocol.discovery_backoff", s.discovery_backoff);
  pos("protocol.sample_interval", s.sample_interval);

  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto path = "traffic[" + std::to_string(i) + "]";
    const auto& f = s.flows[i];
    node_ok(path + ".source", f.source);
    node_ok(path + ".destination", f.destination);
    if (f.source == f.destination) bad(path, "source and destination must differ");
    pos(path + ".rate", f.rate);
    if (f.packet_bits <= 0) bad(path + ".packet_bits", "must be positive");
    nonneg(path + ".start", f.start);
    if (!(f.stop > f.start)) bad(path + ".stop", "must be after start");
  }
  pos("end_time", s.end_time);
  return errs;
}

namespace detail {

/// Walks one JSON object, remembering which keys were consumed.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path, std::vector<FieldError>& errs)
      : j_(j), path_(std::move(path)), errs_(errs) {
    if (!j_.is_object()) errs_.push_back({path_.empty() ? "<root>" : path_, "expected an object"});
  }

  ~ObjectReader() = default;

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const nlohmann::json* get(const std::string& key) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  template <class T>
  void number(const std::string& key, T& out) {
    if (auto* v = get(key)) {
      if (!v->is_number()) {
        errs_.push_back({child(key), "expected a number"});
        return;
      }
      if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_integer()) {
          errs_.push_back({child(key), "expected an integer"});
          return;
        }
        if constexpr (std::is_unsigned_v<T>) {
          if (v->get<long long>() < 0) {
            errs_.push_back({child(key), "must be nonnegative"});
            return;
          }
        }
      }
      out = v->get<T>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (auto* v = get(key)) {
      if (!v->is_string()) {
        errs_.push_back({child(key), "expected a string"});
        return;
      }
      out = v->get<std::string>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (auto* v = get(key)) {
      if (!v->is_boolean()) {
        errs_.push_back({child(key), "expected true or false"});
        return;
      }
      out = v->get<bool>();
    }
  }

  void range(const std::string& key, aco::Range& out) {
    if (auto* v = get(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
        errs_.push_back({child(key), "expected [lo, hi]"});
        return;
      }
      out = aco::Range{(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
  }

  void require(const std::string& key) {
    if (!j_.is_object() || !j_.contains(key)) errs_.push_back({child(key), "required field missing"});
  }

  void finish() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) errs_.push_back({child(it.key()), "unknown key"});
    }
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::vector<FieldError>& errs_;
  std::set<std::string> seen_;
};

inline bool node_pair(const nlohmann::json& v, const std::string& path, std::vector<FieldError>& errs,
                      std::pair<NodeId, NodeId>& out) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
    errs.push_back({path, "expected [a, b] with node ids"});
    return false;
  }
  out = {v[0].get<NodeId>(), v[1].get<NodeId>()};
  return true;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& root) {
  using detail::ObjectReader;
  std::vector<FieldError> errs;
  Scenario s;
  ObjectReader top(root, "", errs);
  top.require("nodes");
  top.require("end_time");

  if (auto* nodes = top.get("nodes")) {
    ObjectReader r(*nodes, "nodes", errs);
    r.require("count");
    r.number("count", s.node_count);
    r.number("initial_energy", s.initial_energy);
    if (auto* pd = r.get("processing_delay")) {
      if (pd->is_number()) {
        s.default_processing_delay = pd->get<double>();
      } else if (pd->is_array()) {
        for (std::size_t i = 0; i < pd->size(); ++i) {
          if (!(*pd)[i].is_number()) {
            errs.push_back({"nodes.processing_delay[" + std::to_string(i) + "]", "expected a number"});
          } else {
            s.processing_delay.push_back((*pd)[i].get<double>());
          }
        }
      } else {
        errs.push_back({"nodes.processing_delay", "expected a number or an array"});
      }
    }
    if (auto* ps = r.get("positions")) {
      if (!ps->is_array()) {
        errs.push_back({"nodes.positions", "expected an array"});
      } else {
        for (std::size_t i = 0; i < ps->size(); ++i) {
          const auto& p = (*ps)[i];
          if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            errs.push_back({"nodes.positions[" + std::to_string(i) + "]", "expected [x, y]"});
          } else {
            s.positions.push_back({p[0].get<double>(), p[1].get<double>()});
          }
        }
      }
    }
    r.finish();
  }

  if (auto* topo = top.get("topology")) {
    ObjectReader r(*topo, "topology", errs);
    std::string mode = "static";
    r.string("mode", mode);
    if (mode == "static") {
      s.topology = TopologyMode::kStatic;
    } else if (mode == "mobility") {
      s.topology = TopologyMode::kMobility;
    } else {
      errs.push_back({"topology.mode", "expected 'static' or 'mobility'"});
    }
    if (auto* links = r.get("links")) {
      if (!links->is_array()) {
        errs.push_back({"topology.links", "expected an array"});
      } else {
        for (std::size_t i = 0; i < links->size(); ++i) {
          std::pair<NodeId, NodeId> p;
          if (detail::node_pair((*links)[i], "topology.links[" + std::to_string(i) + "]", errs, p)) {
            s.links.push_back(p);
          }
        }
      }
    }
    if (auto* evs = r.get("events")) {
      if (!evs->is_array()) {
        errs.push_back({"topology.events", "expected an array"});
      } else {
        for (std::size_t i = 0; i < evs->size(); ++i) {
          ObjectReader e((*evs)[i], "topology.events[" + std::to_string(i) + "]", errs);
          LinkEventSpec ev;
          e.require("time");
          e.require("a");
          e.require("b");
          e.number("time", ev.time);
          e.number("a", ev.a);
          e.number("b", ev.b);
          e.boolean("up", ev.up);
          e.finish();
          s.link_events.push_back(ev);
        }
      }
    }
    r.number("width", s.mobility.width);
    r.number("height", s.mobility.height);
    r.number("comm_range", s.mobility.comm_range);
    r.number("min_speed", s.mobility.min_speed);
    r.number("max_speed", s.mobility.max_speed);
    r.number("pause", s.mobility.pause);
    r.number("step", s.mobility.step);
    r.finish();
  }

  if (auto* link = top.get("link")) {
    ObjectReader r(*link, "link", errs);
    r.number("capacity", s.capacity);
    r.number("propagation_delay", s.propagation_delay);
    if (auto* ov = r.get("overrides")) {
      if (!ov->is_array()) {
        errs.push_back({"link.overrides", "expected an array"});
      } else {
        for (std::size_t i = 0; i < ov->size(); ++i) {
          ObjectReader o((*ov)[i], "link.overrides[" + std::to_string(i) + "]", errs);
          LinkOverride lo;
          lo.capacity = s.capacity;
          lo.propagation_delay = s.propagation_delay;
          o.require("a");
          o.require("b");
          o.number("a", lo.a);
          o.number("b", lo.b);
          o.number("capacity", lo.capacity);
          o.number("propagation_delay", lo.propagation_delay);
          o.finish();
          s.link_overrides.push_back(lo);
        }
      }
    }
    r.finish();
  }

  if (auto* q = top.get("qos")) {
    ObjectReader r(*q, "qos", errs);
    r.number("max_delay", s.qos.max_delay);
    r.number("min_bandwidth", s.qos.min_bandwidth);
    r.number("min_energy", s.qos.min_energy);
    r.number("max_drain_rate", s.qos.max_drain_rate);
    r.number("max_hop_count", s.qos.max_hop_count);
    r.finish();
  }

  if (auto* a = top.get("aco")) {
    ObjectReader r(*a, "aco", errs);
    if (auto* d = r.get("deposit")) {
      ObjectReader dr(*d, "aco.deposit", errs);
      dr.number("lambda_bandwidth", s.deposit.lambda_bandwidth);
      dr.number("lambda_energy", s.deposit.lambda_energy);
      dr.number("lambda_delay", s.deposit.lambda_delay);
      dr.number("lambda_hop_count", s.deposit.lambda_hop_count);
      dr.number("lambda_drain_rate", s.deposit.lambda_drain_rate);
      dr.finish();
    }
    if (auto* p = r.get("preference")) {
      ObjectReader pr(*p, "aco.preference", errs);
      if (auto* al = pr.get("alpha")) {
        if (!al->is_array() || al->size() != 6) {
          errs.push_back({"aco.preference.alpha", "expected six numbers"});
        } else {
          for (std::size_t i = 0; i < 6; ++i) {
            if (!(*al)[i].is_number()) {
              errs.push_back({"aco.preference.alpha[" + std::to_string(i) + "]", "expected a number"});
            } else {
              s.preference.alpha[i] = (*al)[i].get<double>();
            }
          }
        }
      }
      pr.number("rho", s.preference.rho);
      pr.number("q", s.preference.q);
      pr.finish();
    }
    r.number("tau0", s.tau0);
    r.number("evaporation_period", s.evaporation_period);
    if (auto* n = r.get("normalization")) {
      ObjectReader nr(*n, "aco.normalization", errs);
      nr.range("bandwidth", s.normalization.bandwidth);
      nr.range("energy", s.normalization.energy);
      nr.range("delay", s.normalization.delay);
      nr.range("hop_count", s.normalization.hop_count);
      nr.range("drain_rate", s.normalization.drain_rate);
      nr.finish();
    }
    r.finish();
  }

  if (auto* e = top.get("energy")) {
    ObjectReader r(*e, "energy", errs);
    r.number("tx_cost_per_bit", s.tx_cost_per_bit);
    r.number("rx_cost_per_bit", s.rx_cost_per_bit);
    r.number("drain_ewma", s.drain_ewma);
    r.finish();
  }

  if (auto* p = top.get("protocol")) {
    ObjectReader r(*p, "protocol", errs);
    r.number("hello_interval", s.hello_interval);
    r.number("hello_bits", s.hello_bits);
    r.number("hello_loss_threshold", s.hello_loss_threshold);
    r.number("route_ttl", s.route_ttl);
    r.number("queue_limit", s.queue_limit);
    r.number("discovery_backoff", s.discovery_backoff);
    r.number("sample_interval", s.sample_interval);
    r.finish();
  }

  if (auto* t = top.get("traffic")) {
    if (!t->is_array()) {
      errs.push_back({"traffic", "expected an array"});
    } else {
      for (std::size_t i = 0; i < t->size(); ++i) {
        ObjectReader r((*t)[i], "traffic[" + std::to_string(i) + "]", errs);
        FlowSpec f;
        r.require("source");
        r.require("destination");
        r.number("source", f.source);
        r.number("destination", f.destination);
        r.number("rate", f.rate);
        r.number("packet_bits", f.packet_bits);
        r.number("start", f.start);
        r.number("stop", f.stop);
        r.finish();
        s.flows.push_back(f);
      }
    }
  }

  top.number("end_time", s.end_time);
  top.number("seed", s.seed);
  std::string mode = to_string(s.mode);
  top.string("mode", mode);
  if (mode == "ant_tora" || mode == "baseline_tora") {
    s.mode = mode_from_string(mode);
  } else {
    errs.push_back({"mode", "expected 'ant_tora' or 'baseline_tora'"});
  }
  top.finish();

  if (errs.empty()) {
    s.normalization.energy.hi = root.contains("aco") && root["aco"].contains("normalization") &&
                                        root["aco"]["normalization"].contains("energy")
                                    ? s.normalization.energy.hi
                                    : std::max(s.initial_energy, 1e-9);
    errs = validate(s);
  }
  if (!errs.empty()) throw ScenarioError(std::move(errs));
  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError({FieldError{"<root>", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_scenario(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({FieldError{"<file>", "cannot open '" + path + "'"}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

}  // namespace anttora
