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

// Run metrics, always derived from trace records so a saved trace replays
// to the same numbers.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "anttora/trace.hpp"

namespace anttora {

struct RunMetrics {
  std::string mode;
  std::uint64_t seed = 0;
  std::uint64_t nodes = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  double pdr = 0.0;
  double mean_end_to_end_delay = 0.0;  // from first transmission
  double mean_total_delay = 0.0;       // from generation, includes queueing
  std::map<std::string, std::uint64_t> control_packets;  // transmissions by type
  std::uint64_t control_total = 0;
  std::uint64_t data_transmissions = 0;
  std::map<std::string, std::uint64_t> drops;  // by reason
  std::vector<double> energy_spent;            // per node, joules
  double energy_total = 0.0;
  std::vector<std::pair<double, std::uint64_t>> cache_size;  // (time, entries)
  std::vector<std::uint64_t> reaction_locality;  // nodes with height changes per link failure
  std::uint64_t link_failures = 0;
};

inline std::uint64_t control_count(const RunMetrics& m, const std::string& type) {
  auto it = m.control_packets.find(type);
  return it == m.control_packets.end() ? 0 : it->second;
}

inline RunMetrics compute_metrics(const std::vector<trace::TraceRecord>& records) {
  using trace::RecordKind;
  RunMetrics m;
  for (const char* t : {"hello", "qry_request", "qry_reply", "upd", "error", "clr"}) {
    m.control_packets[t] = 0;
  }
  std::set<std::pair<std::uint32_t, std::uint64_t>> gen;
  std::set<std::pair<std::uint32_t, std::uint64_t>> got;
  double delay_sum = 0.0;
  double total_sum = 0.0;
  std::set<NodeId> changed;
  bool in_failure = false;
  auto close_failure = [&] {
    if (in_failure) m.reaction_locality.push_back(changed.size());
    changed.clear();
  };

  for (const auto& r : records) {
    switch (r.kind) {
      case RecordKind::kMeta:
        m.mode = r.text;
        m.seed = r.seed;
        m.nodes = r.value;
        m.energy_spent.assign(r.value, 0.0);
        break;
      case RecordKind::kGenerate: {
        const auto& d = std::get<packets::DataPacket>(*r.packet);
        gen.insert({d.flow, d.seq});
        break;
      }
      case RecordKind::kDeliver: {
        const auto& d = std::get<packets::DataPacket>(*r.packet);
        if (got.insert({d.flow, d.seq}).second) {
          delay_sum += r.time - d.sent_at;
          total_sum += r.time - d.created_at;
        }
        break;
      }
      case RecordKind::kTransmit:
        if (packets::is_control(*r.packet)) {
          ++m.control_packets[packets::type_name(*r.packet)];
          ++m.control_total;
        } else {
          ++m.data_transmissions;
        }
        [[fallthrough]];
      case RecordKind::kReceive:
        if (r.node >= m.energy_spent.size()) m.energy_spent.resize(r.node + 1, 0.0);
        m.energy_spent[r.node] += r.cost;
        break;
      case RecordKind::kDrop:
        ++m.drops[r.text];
        break;
      case RecordKind::kLinkDown:
        close_failure();
        in_failure = true;
        ++m.link_failures;
        break;
      case RecordKind::kHeight:
        if (in_failure) changed.insert(r.node);
        break;
      case RecordKind::kSample:
        m.cache_size.emplace_back(r.time, r.value);
        break;
      case RecordKind::kLinkUp:
      case RecordKind::kMaintenance:
        break;
    }
  }
  close_failure();
  m.generated = gen.size();
  m.delivered = got.size();
  m.pdr = m.generated == 0 ? 0.0 : static_cast<double>(m.delivered) / static_cast<double>(m.generated);
  if (m.delivered > 0) {
    m.mean_end_to_end_delay = delay_sum / static_cast<double>(m.delivered);
    m.mean_total_delay = total_sum / static_cast<double>(m.delivered);
  }
  for (double e : m.energy_spent) m.energy_total += e;
  return m;
}

inline RunMetrics compute_metrics(const std::vector<std::string>& lines) {
  std::vector<trace::TraceRecord> recs;
  recs.reserve(lines.size());
  for (const auto& l : lines) recs.push_back(trace::decode_record(l));
  return compute_metrics(recs);
}

inline nlohmann::json to_json(const RunMetrics& m) {
  nlohmann::json j;
  j["mode"] = m.mode;
  j["seed"] = m.seed;
  j["nodes"] = m.nodes;
  j["generated"] = m.generated;
  j["delivered"] = m.delivered;
  j["pdr"] = m.pdr;
  j["mean_end_to_end_delay"] = m.mean_end_to_end_delay;
  j["mean_total_delay"] = m.mean_total_delay;
  j["control_packets"] = m.control_packets;
  j["control_total"] = m.control_total;
  j["data_transmissions"] = m.data_transmissions;
  j["drops"] = nlohmann::json::object();
  for (const auto& [k, v] : m.drops) j["drops"][k] = v;
  j["energy_spent"] = m.energy_spent;
  j["energy_total"] = m.energy_total;
  j["cache_size"] = nlohmann::json::array();
  for (const auto& [t, n] : m.cache_size) j["cache_size"].push_back({t, n});
  j["reaction_locality"] = m.reaction_locality;
  j["link_failures"] = m.link_failures;
  return j;
}

}  // namespace anttora
