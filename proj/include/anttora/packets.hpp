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

// Protocol packet model and the canonical one-line text encoding used for
// traces and golden-file comparisons.
//
// Encoding rules: `key=value` tokens separated by one space, fixed key order
// per packet type, lowercase keys, reals printed with exactly six fractional
// digits, node lists as comma-separated ids ("-" when empty), heights as
// tau/oid/r/delta/id with "-" for the NULL components.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "anttora/aco.hpp"
#include "anttora/height.hpp"
#include "anttora/types.hpp"

namespace anttora::packets {

struct HelloAnt {
  NodeId sender = 0;
  SimTime send_time = 0.0;
  double residual_energy = 0.0;
  double drain_rate = 0.0;
  std::int64_t size_bits = 512;

  bool operator==(const HelloAnt&) const = default;
};

struct QryRequestAnt {
  SimTime request_start_time = 0.0;
  double min_bandwidth_seen = 0.0;  // 0 until the first link is crossed
  NodeId source = 0;
  NodeId destination = 0;
  std::vector<NodeId> visited;

  bool operator==(const QryRequestAnt&) const = default;
};

struct QryReplyAnt {
  aco::PathMetrics metrics;  // of `route`
  NodeId source = 0;
  NodeId destination = 0;
  std::vector<NodeId> to_visit;  // reverse request path, next hop first
  std::vector<NodeId> route;     // reporter ... destination
  tora::Height reporter_height;

  bool operator==(const QryReplyAnt&) const = default;
};

struct UpdPacket {
  NodeId destination = 0;
  tora::Height height;

  bool operator==(const UpdPacket&) const = default;
};

struct ErrorPacket {
  NodeId source = 0;
  NodeId originator = 0;
  NodeId destination = 0;

  bool operator==(const ErrorPacket&) const = default;
};

struct ClrPacket {
  NodeId destination = 0;
  tora::ReferenceLevel reference_level;

  bool operator==(const ClrPacket&) const = default;
};

/// Application payload carried along a cached source route.
struct DataPacket {
  std::uint32_t flow = 0;
  std::uint64_t seq = 0;
  NodeId source = 0;
  NodeId destination = 0;
  std::int64_t size_bits = 0;
  SimTime created_at = 0.0;
  SimTime sent_at = 0.0;  // when the source put it on the air
  std::uint32_t hop = 0;  // index of the current holder in `route`
  std::vector<NodeId> route;

  bool operator==(const DataPacket&) const = default;
};

using Packet =
    std::variant<HelloAnt, QryRequestAnt, QryReplyAnt, UpdPacket, ErrorPacket, ClrPacket, DataPacket>;

inline const char* type_name(const Packet& p) {
  static constexpr const char* kNames[] = {"hello", "qry_request", "qry_reply", "upd",
                                           "error", "clr",         "data"};
  return kNames[p.index()];
}

inline bool is_control(const Packet& p) { return !std::holds_alternative<DataPacket>(p); }

/// Size on the air. Hello and data packets carry their own size.
inline std::int64_t packet_bits(const Packet& p) {
  constexpr std::int64_t kHeader = 160;
  constexpr std::int64_t kId = 32;
  return std::visit(
      [](const auto& x) -> std::int64_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HelloAnt>) {
          return x.size_bits;
        } else if constexpr (std::is_same_v<T, QryRequestAnt>) {
          return kHeader + 64 + 64 + 2 * kId + kId * static_cast<std::int64_t>(x.visited.size());
        } else if constexpr (std::is_same_v<T, QryReplyAnt>) {
          return kHeader + 4 * 64 + 32 + 2 * kId + 192 +
                 kId * static_cast<std::int64_t>(x.to_visit.size() + x.route.size());
        } else if constexpr (std::is_same_v<T, UpdPacket>) {
          return kHeader + kId + 192;
        } else if constexpr (std::is_same_v<T, ErrorPacket>) {
          return kHeader + 3 * kId;
        } else if constexpr (std::is_same_v<T, ClrPacket>) {
          return kHeader + kId + 128;
        } else {
          return x.size_bits;
        }
      },
      p);
}

/// Checks the per-type invariants; throws PreconditionError.
inline void validate(const Packet& p) {
  std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HelloAnt>) {
          if (x.size_bits <= 0) throw PreconditionError("hello: size_bits must be positive");
          if (x.send_time < 0.0) throw PreconditionError("hello: negative send_time");
        } else if constexpr (std::is_same_v<T, QryRequestAnt>) {
          if (x.visited.empty() || x.visited.front() != x.source) {
            throw PreconditionError("qry_request: visited must begin with the source");
          }
          for (std::size_t i = 0; i < x.visited.size(); ++i) {
            for (std::size_t j = i + 1; j < x.visited.size(); ++j) {
              if (x.visited[i] == x.visited[j]) {
                throw PreconditionError("qry_request: visited repeats a node");
              }
            }
          }
        } else if constexpr (std::is_same_v<T, ClrPacket>) {
          if (x.reference_level.reflected != 1) throw PreconditionError("clr: r bit must be 1");
        } else if constexpr (std::is_same_v<T, ErrorPacket>) {
          if (x.originator == x.destination) {
            throw PreconditionError("error: originator equals destination");
          }
        }
      },
      p);
}

/// Malformed trace text. `field()` names the offending key.
class TraceParseError : public Error {
 public:
  TraceParseError(std::string field, const std::string& what)
      : Error("trace parse error at '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// The `type=` token names no known packet.
class UnknownPacketType : public Error {
 public:
  explicit UnknownPacketType(const std::string& token)
      : Error("unknown packet type '" + token + "'") {}
};

namespace detail {

inline std::string format_real(double x, std::string_view key) {
  if (!std::isfinite(x)) {
    throw PreconditionError("encode: non-finite value in field '" + std::string(key) + "'");
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 6);
  if (ec != std::errc{}) throw PreconditionError("encode: value too large");
  std::string s(buf, end);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

class LineWriter {
 public:
  void raw(std::string_view key, std::string_view value) {
    if (!out_.empty()) out_ += ' ';
    out_ += key;
    out_ += '=';
    out_ += value;
  }
  void real(std::string_view key, double x) { raw(key, format_real(x, key)); }
  void integer(std::string_view key, std::int64_t x) { raw(key, std::to_string(x)); }
  void node(std::string_view key, NodeId x) { raw(key, std::to_string(x)); }
  void nodes(std::string_view key, const std::vector<NodeId>& xs) {
    if (xs.empty()) {
      raw(key, "-");
      return;
    }
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(xs[i]);
    }
    raw(key, s);
  }
  void level(std::string_view key, const tora::ReferenceLevel& l) {
    raw(key, format_real(l.tau, key) + "/" + std::to_string(l.oid) + "/" +
                 std::to_string(static_cast<int>(l.reflected)));
  }
  void height(std::string_view key, const tora::Height& h) {
    if (h.is_null()) {
      raw(key, "-/-/-/-/" + std::to_string(h.id));
      return;
    }
    raw(key, format_real(h.level->tau, key) + "/" + std::to_string(h.level->oid) + "/" +
                 std::to_string(static_cast<int>(h.level->reflected)) + "/" +
                 std::to_string(h.delta) + "/" + std::to_string(h.id));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) tokens_ = split(line, ' ');
  }

  bool at_end() const { return pos_ >= tokens_.size(); }

  std::string_view peek_key() const {
    if (at_end()) return {};
    auto t = tokens_[pos_];
    return t.substr(0, t.find('='));
  }

  std::string_view take(std::string_view key) {
    if (at_end()) throw TraceParseError(std::string(key), "missing (line truncated)");
    auto t = tokens_[pos_];
    auto eq = t.find('=');
    if (eq == std::string_view::npos || t.substr(0, eq) != key) {
      throw TraceParseError(std::string(key), "expected key, found '" + std::string(t) + "'");
    }
    ++pos_;
    auto v = t.substr(eq + 1);
    if (v.empty()) throw TraceParseError(std::string(key), "empty value");
    return v;
  }

  static double parse_real(std::string_view key, std::string_view v) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x)) {
      throw TraceParseError(std::string(key), "bad real '" + std::string(v) + "'");
    }
    return x;
  }

  template <class Int>
  static Int parse_int(std::string_view key, std::string_view v) {
    Int x{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) {
      throw TraceParseError(std::string(key), "bad integer '" + std::string(v) + "'");
    }
    return x;
  }

  double real(std::string_view key) { return parse_real(key, take(key)); }
  std::int64_t integer(std::string_view key) { return parse_int<std::int64_t>(key, take(key)); }
  NodeId node(std::string_view key) { return parse_int<NodeId>(key, take(key)); }

  std::vector<NodeId> nodes(std::string_view key) {
    auto v = take(key);
    std::vector<NodeId> out;
    if (v == "-") return out;
    for (auto part : split(v, ',')) out.push_back(parse_int<NodeId>(key, part));
    return out;
  }

  tora::ReferenceLevel level(std::string_view key) {
    auto parts = split(take(key), '/');
    if (parts.size() != 3) throw TraceParseError(std::string(key), "expected tau/oid/r");
    auto r = parse_int<int>(key, parts[2]);
    if (r != 0 && r != 1) throw TraceParseError(std::string(key), "r bit must be 0 or 1");
    return tora::ReferenceLevel{parse_real(key, parts[0]), parse_int<NodeId>(key, parts[1]),
                                static_cast<std::uint8_t>(r)};
  }

  tora::Height height(std::string_view key) {
    auto parts = split(take(key), '/');
    if (parts.size() != 5) throw TraceParseError(std::string(key), "expected tau/oid/r/delta/id");
    NodeId id = parse_int<NodeId>(key, parts[4]);
    bool nulls = parts[0] == "-" && parts[1] == "-" && parts[2] == "-" && parts[3] == "-";
    if (nulls) return tora::Height::null(id);
    auto r = parse_int<int>(key, parts[2]);
    if (r != 0 && r != 1) throw TraceParseError(std::string(key), "r bit must be 0 or 1");
    return tora::Height::make(parse_real(key, parts[0]), parse_int<NodeId>(key, parts[1]),
                              static_cast<std::uint8_t>(r), parse_int<std::int64_t>(key, parts[3]),
                              id);
  }

 private:
  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
};

inline void write_body(LineWriter& w, const Packet& packet) {
  w.raw("type", type_name(packet));
  std::visit(
      [&w](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HelloAnt>) {
          w.node("sender", x.sender);
          w.real("send_time", x.send_time);
          w.real("energy", x.residual_energy);
          w.real("drain", x.drain_rate);
          w.integer("size", x.size_bits);
        } else if constexpr (std::is_same_v<T, QryRequestAnt>) {
          w.real("start", x.request_start_time);
          w.real("min_bw", x.min_bandwidth_seen);
          w.node("src", x.source);
          w.node("dst", x.destination);
          w.nodes("visited", x.visited);
        } else if constexpr (std::is_same_v<T, QryReplyAnt>) {
          w.integer("hops", x.metrics.hop_count);
          w.real("delay", x.metrics.delay);
          w.real("energy", x.metrics.energy);
          w.real("drain", x.metrics.drain_rate);
          w.real("bw", x.metrics.bandwidth);
          w.node("src", x.source);
          w.node("dst", x.destination);
          w.nodes("to_visit", x.to_visit);
          w.nodes("route", x.route);
          w.height("height", x.reporter_height);
        } else if constexpr (std::is_same_v<T, UpdPacket>) {
          w.node("dst", x.destination);
          w.height("height", x.height);
        } else if constexpr (std::is_same_v<T, ErrorPacket>) {
          w.node("src", x.source);
          w.node("originator", x.originator);
          w.node("dst", x.destination);
        } else if constexpr (std::is_same_v<T, ClrPacket>) {
          w.node("dst", x.destination);
          w.level("level", x.reference_level);
        } else {
          w.integer("flow", x.flow);
          w.integer("seq", static_cast<std::int64_t>(x.seq));
          w.node("src", x.source);
          w.node("dst", x.destination);
          w.integer("size", x.size_bits);
          w.real("created", x.created_at);
          w.real("sent", x.sent_at);
          w.integer("hop", x.hop);
          w.nodes("route", x.route);
        }
      },
      packet);
}

inline Packet read_body(LineReader& r) {
  const std::string type(r.take("type"));
  Packet out;
  if (type == "hello") {
    HelloAnt h;
    h.sender = r.node("sender");
    h.send_time = r.real("send_time");
    h.residual_energy = r.real("energy");
    h.drain_rate = r.real("drain");
    h.size_bits = r.integer("size");
    out = h;
  } else if (type == "qry_request") {
    QryRequestAnt q;
    q.request_start_time = r.real("start");
    q.min_bandwidth_seen = r.real("min_bw");
    q.source = r.node("src");
    q.destination = r.node("dst");
    q.visited = r.nodes("visited");
    out = std::move(q);
  } else if (type == "qry_reply") {
    QryReplyAnt q;
    q.metrics.hop_count = static_cast<int>(r.integer("hops"));
    q.metrics.delay = r.real("delay");
    q.metrics.energy = r.real("energy");
    q.metrics.drain_rate = r.real("drain");
    q.metrics.bandwidth = r.real("bw");
    q.source = r.node("src");
    q.destination = r.node("dst");
    q.to_visit = r.nodes("to_visit");
    q.route = r.nodes("route");
    q.reporter_height = r.height("height");
    out = std::move(q);
  } else if (type == "upd") {
    UpdPacket u;
    u.destination = r.node("dst");
    u.height = r.height("height");
    out = u;
  } else if (type == "error") {
    ErrorPacket e;
    e.source = r.node("src");
    e.originator = r.node("originator");
    e.destination = r.node("dst");
    out = e;
  } else if (type == "clr") {
    ClrPacket c;
    c.destination = r.node("dst");
    c.reference_level = r.level("level");
    out = c;
  } else if (type == "data") {
    DataPacket d;
    d.flow = LineReader::parse_int<std::uint32_t>("flow", r.take("flow"));
    d.seq = LineReader::parse_int<std::uint64_t>("seq", r.take("seq"));
    d.source = r.node("src");
    d.destination = r.node("dst");
    d.size_bits = r.integer("size");
    d.created_at = r.real("created");
    d.sent_at = r.real("sent");
    d.hop = LineReader::parse_int<std::uint32_t>("hop", r.take("hop"));
    d.route = r.nodes("route");
    out = std::move(d);
  } else {
    throw UnknownPacketType(type);
  }
  return out;
}

}  // namespace detail

inline std::string encode_trace(const Packet& packet, SimTime timestamp) {
  validate(packet);
  detail::LineWriter w;
  w.real("t", timestamp);
  detail::write_body(w, packet);
  return w.take();
}

inline std::pair<Packet, SimTime> decode_trace(std::string_view line) {
  detail::LineReader r(line);
  const double t = r.real("t");
  Packet p = detail::read_body(r);
  if (!r.at_end()) throw TraceParseError(std::string(r.peek_key()), "unexpected trailing field");
  return {std::move(p), t};
}

}  // namespace anttora::packets
