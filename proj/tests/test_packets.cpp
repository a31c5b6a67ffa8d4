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

#include <random>
#include <sstream>
#include <string>

#include "anttora/packets.hpp"
#include "anttora/trace.hpp"

namespace {

using namespace anttora;
using namespace anttora::packets;

std::vector<Packet> samples() {
  QryReplyAnt rep;
  rep.metrics = aco::PathMetrics{0.0125, 1e6, 40.5, 0.25, 3};
  rep.source = 0;
  rep.destination = 3;
  rep.to_visit = {1, 0};
  rep.route = {2, 3};
  rep.reporter_height = tora::Height::make(0, 0, 0, 1, 2);
  DataPacket data{1, 42, 0, 3, 4096, 2.5, 2.75, 1, {0, 1, 3}};
  return {HelloAnt{3, 1.0, 50, 0.25, 512},
          QryRequestAnt{2.0, 0.0, 0, 3, {0, 1}},
          rep,
          UpdPacket{3, tora::Height::make(7.5, 2, 1, -3, 4)},
          UpdPacket{3, tora::Height::null(4)},
          ErrorPacket{0, 5, 3},
          ClrPacket{3, tora::ReferenceLevel{7.5, 2, 1}},
          data};
}

TEST(EncodeTrace, HelloLineIsCanonical) {
  const Packet p = HelloAnt{3, 1.0, 50, 0.25, 512};
  const std::string line = encode_trace(p, 1.0);
  EXPECT_EQ(line,
            "t=1.000000 type=hello sender=3 send_time=1.000000 energy=50.000000 drain=0.250000 "
            "size=512");
  EXPECT_EQ(encode_trace(p, 1.0), line);
}

TEST(EncodeTrace, SixDigitPrecisionSeparatesValues) {
  EXPECT_NE(encode_trace(HelloAnt{3, 1.0, 50, 0.25, 512}, 1.0),
            encode_trace(HelloAnt{3, 1.0, 50, 0.250001, 512}, 1.0));
}

TEST(EncodeTrace, RejectsNonFiniteAndInvalid) {
  EXPECT_THROW(encode_trace(HelloAnt{3, 1.0, std::nan(""), 0.25, 512}, 1.0), PreconditionError);
  EXPECT_THROW(encode_trace(HelloAnt{3, 1.0, 50, 0.25, 0}, 1.0), PreconditionError);
  EXPECT_THROW(encode_trace(ClrPacket{3, tora::ReferenceLevel{1, 2, 0}}, 1.0), PreconditionError);
  EXPECT_THROW(encode_trace(QryRequestAnt{0, 0, 0, 3, {1, 0}}, 1.0), PreconditionError);
  EXPECT_THROW(encode_trace(QryRequestAnt{0, 0, 0, 3, {0, 1, 0}}, 1.0), PreconditionError);
  EXPECT_THROW(encode_trace(ErrorPacket{0, 3, 3}, 1.0), PreconditionError);
}

TEST(DecodeTrace, RoundTripsEveryType) {
  for (const auto& p : samples()) {
    auto [q, t] = decode_trace(encode_trace(p, 12.5));
    EXPECT_EQ(q, p) << type_name(p);
    EXPECT_EQ(t, 12.5);
  }
}

TEST(DecodeTrace, TruncatedLineNamesTheMissingField) {
  const std::string line = encode_trace(HelloAnt{3, 1.0, 50, 0.25, 512}, 1.0);
  const std::string cut = line.substr(0, line.find(" drain="));
  try {
    decode_trace(cut);
    FAIL() << "expected a parse error";
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.field(), "drain");
  }
}

TEST(DecodeTrace, BadNumberNamesTheField) {
  try {
    decode_trace("t=1.000000 type=upd dst=x height=-/-/-/-/4");
    FAIL();
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.field(), "dst");
  }
}

TEST(DecodeTrace, UnknownTypeIsItsOwnError) {
  EXPECT_THROW(decode_trace("t=1.000000 type=bogus a=1"), UnknownPacketType);
  try {
    decode_trace("t=1.000000 type=bogus a=1");
  } catch (const TraceParseError&) {
    FAIL() << "unknown type reported as a field error";
  } catch (const UnknownPacketType&) {
  }
}

TEST(DecodeTrace, RandomPacketsRoundTrip) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::uniform_int_distribution<NodeId> node(0, 40);
  for (int i = 0; i < 500; ++i) {
    Packet p;
    switch (i % 7) {
      case 0: p = HelloAnt{node(rng), u(rng), u(rng), u(rng), 1 + static_cast<std::int64_t>(node(rng))}; break;
      case 1: p = QryRequestAnt{u(rng), u(rng), 1, 2, {1, 5, 9}}; break;
      case 2: {
        QryReplyAnt r;
        r.metrics = aco::PathMetrics{u(rng), u(rng), u(rng), u(rng), 4};
        r.source = 1;
        r.destination = 2;
        r.route = {7, 2};
        r.reporter_height = tora::Height::make(u(rng), node(rng), 1, -4, 7);
        p = r;
        break;
      }
      case 3: p = UpdPacket{2, tora::Height::make(u(rng), node(rng), 0, 17, 4)}; break;
      case 4: p = ErrorPacket{node(rng), 41, 42}; break;
      case 5: p = ClrPacket{2, tora::ReferenceLevel{u(rng), node(rng), 1}}; break;
      default: p = DataPacket{3, 9, 1, 2, 800, u(rng), u(rng), 0, {1, 2}}; break;
    }
    // Reals are only kept to six digits, so canonicalize once first.
    const std::string line = encode_trace(p, u(rng));
    auto [q, t] = decode_trace(line);
    EXPECT_EQ(encode_trace(q, t), line);
    auto [q2, t2] = decode_trace(encode_trace(q, t));
    EXPECT_EQ(q2, q);
    EXPECT_EQ(t2, t);
  }
}

TEST(TraceRecord, RoundTripsAndRejectsGarbage) {
  trace::TraceRecord tx;
  tx.time = 3.5;
  tx.seq = 17;
  tx.kind = trace::RecordKind::kTransmit;
  tx.node = 2;
  tx.cost = 0.000256;
  tx.packet = UpdPacket{3, tora::Height::make(3.5, 2, 0, 0, 2)};
  trace::TraceRecord h;
  h.time = 3.5;
  h.seq = 18;
  h.kind = trace::RecordKind::kHeight;
  h.node = 2;
  h.destination = 3;
  h.height = tora::Height::null(2);
  trace::TraceRecord meta;
  meta.kind = trace::RecordKind::kMeta;
  meta.value = 8;
  meta.text = "ant_tora";
  meta.seed = 5;
  for (const auto& r : {tx, h, meta}) EXPECT_EQ(trace::decode_record(trace::encode_record(r)), r);

  std::istringstream bad("t=0.000000 seq=0 ev=meta nodes=1 mode=ant_tora seed=1\nt=1.0 seq=1 ev=nope\n");
  try {
    trace::read_trace(bad);
    FAIL();
  } catch (const TraceParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

}  // namespace
