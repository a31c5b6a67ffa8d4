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

// Trace file records. Each line starts with `t=<time> seq=<n> ev=<kind>`;
// packet-carrying records append the packet body in its canonical encoding.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "anttora/packets.hpp"

namespace anttora::trace {

enum class RecordKind {
  kMeta,      // run header: node count, mode, seed
  kGenerate,  // application handed a data packet to its source
  kTransmit,
  kReceive,
  kDrop,
  kDeliver,  // data packet reached its destination
  kLinkUp,
  kLinkDown,
  kHeight,
  kMaintenance,
  kSample,
};

inline const char* to_string(RecordKind k) {
  switch (k) {
    case RecordKind::kMeta: return "meta";
    case RecordKind::kGenerate: return "gen";
    case RecordKind::kTransmit: return "tx";
    case RecordKind::kReceive: return "rx";
    case RecordKind::kDrop: return "drop";
    case RecordKind::kDeliver: return "deliver";
    case RecordKind::kLinkUp: return "linkup";
    case RecordKind::kLinkDown: return "linkdown";
    case RecordKind::kHeight: return "height";
    case RecordKind::kMaintenance: return "maint";
    case RecordKind::kSample: return "sample";
  }
  return "?";
}

struct TraceRecord {
  SimTime time = 0.0;
  std::uint64_t seq = 0;
  RecordKind kind = RecordKind::kMeta;
  NodeId node = 0;
  std::optional<NodeId> peer;  // nullopt: broadcast
  NodeId destination = 0;      // height / maint records
  double cost = 0.0;           // tx / rx energy debit
  std::uint64_t value = 0;     // meta: node count, sample: cache entries
  std::uint64_t seed = 0;      // meta
  std::string text;            // meta: mode, drop: reason, maint: case
  std::optional<tora::Height> height;
  std::optional<packets::Packet> packet;

  bool operator==(const TraceRecord&) const = default;
};

namespace detail {

inline void write_peer(packets::detail::LineWriter& w, const std::optional<NodeId>& peer) {
  w.raw("peer", peer ? std::to_string(*peer) : std::string("*"));
}

inline std::optional<NodeId> read_peer(packets::detail::LineReader& r) {
  auto v = r.take("peer");
  if (v == "*") return std::nullopt;
  return packets::detail::LineReader::parse_int<NodeId>("peer", v);
}

inline std::string read_word(packets::detail::LineReader& r, std::string_view key) {
  return std::string(r.take(key));
}

}  // namespace detail

inline std::string encode_record(const TraceRecord& rec) {
  packets::detail::LineWriter w;
  w.real("t", rec.time);
  w.integer("seq", static_cast<std::int64_t>(rec.seq));
  w.raw("ev", to_string(rec.kind));
  switch (rec.kind) {
    case RecordKind::kMeta:
      w.integer("nodes", static_cast<std::int64_t>(rec.value));
      w.raw("mode", rec.text);
      w.integer("seed", static_cast<std::int64_t>(rec.seed));
      return w.take();
    case RecordKind::kSample:
      w.integer("cache", static_cast<std::int64_t>(rec.value));
      return w.take();
    case RecordKind::kLinkUp:
    case RecordKind::kLinkDown:
      w.node("node", rec.node);
      detail::write_peer(w, rec.peer);
      return w.take();
    case RecordKind::kHeight:
      w.node("node", rec.node);
      w.node("dst", rec.destination);
      w.height("h", rec.height.value_or(tora::Height::null(rec.node)));
      return w.take();
    case RecordKind::kMaintenance:
      w.node("node", rec.node);
      w.node("dst", rec.destination);
      w.raw("case", rec.text);
      return w.take();
    case RecordKind::kGenerate:
    case RecordKind::kDeliver:
      w.node("node", rec.node);
      break;
    case RecordKind::kTransmit:
    case RecordKind::kReceive:
      w.node("node", rec.node);
      detail::write_peer(w, rec.peer);
      w.real("cost", rec.cost);
      break;
    case RecordKind::kDrop:
      w.node("node", rec.node);
      detail::write_peer(w, rec.peer);
      w.raw("reason", rec.text);
      break;
  }
  if (!rec.packet) throw PreconditionError("trace record of this kind needs a packet");
  packets::validate(*rec.packet);
  packets::detail::write_body(w, *rec.packet);
  return w.take();
}

inline TraceRecord decode_record(std::string_view line) {
  packets::detail::LineReader r(line);
  TraceRecord rec;
  rec.time = r.real("t");
  rec.seq = packets::detail::LineReader::parse_int<std::uint64_t>("seq", r.take("seq"));
  const std::string ev(r.take("ev"));
  bool needs_packet = false;
  if (ev == "meta") {
    rec.kind = RecordKind::kMeta;
    rec.value = packets::detail::LineReader::parse_int<std::uint64_t>("nodes", r.take("nodes"));
    rec.text = detail::read_word(r, "mode");
    rec.seed = packets::detail::LineReader::parse_int<std::uint64_t>("seed", r.take("seed"));
  } else if (ev == "sample") {
    rec.kind = RecordKind::kSample;
    rec.value = packets::detail::LineReader::parse_int<std::uint64_t>("cache", r.take("cache"));
  } else if (ev == "linkup" || ev == "linkdown") {
    rec.kind = ev == "linkup" ? RecordKind::kLinkUp : RecordKind::kLinkDown;
    rec.node = r.node("node");
    rec.peer = detail::read_peer(r);
  } else if (ev == "height") {
    rec.kind = RecordKind::kHeight;
    rec.node = r.node("node");
    rec.destination = r.node("dst");
    rec.height = r.height("h");
  } else if (ev == "maint") {
    rec.kind = RecordKind::kMaintenance;
    rec.node = r.node("node");
    rec.destination = r.node("dst");
    rec.text = detail::read_word(r, "case");
  } else if (ev == "gen" || ev == "deliver") {
    rec.kind = ev == "gen" ? RecordKind::kGenerate : RecordKind::kDeliver;
    rec.node = r.node("node");
    needs_packet = true;
  } else if (ev == "tx" || ev == "rx") {
    rec.kind = ev == "tx" ? RecordKind::kTransmit : RecordKind::kReceive;
    rec.node = r.node("node");
    rec.peer = detail::read_peer(r);
    rec.cost = r.real("cost");
    needs_packet = true;
  } else if (ev == "drop") {
    rec.kind = RecordKind::kDrop;
    rec.node = r.node("node");
    rec.peer = detail::read_peer(r);
    rec.text = detail::read_word(r, "reason");
    needs_packet = true;
  } else {
    throw packets::TraceParseError("ev", "unknown event kind '" + ev + "'");
  }
  if (needs_packet) rec.packet = packets::detail::read_body(r);
  if (!r.at_end()) {
    throw packets::TraceParseError(std::string(r.peek_key()), "unexpected trailing field");
  }
  return rec;
}

inline void write_trace(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << l << '\n';
}

inline std::vector<TraceRecord> read_trace(std::istream& is) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(decode_record(line));
    } catch (const packets::TraceParseError& e) {
      throw packets::TraceParseError(e.field(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace anttora::trace
