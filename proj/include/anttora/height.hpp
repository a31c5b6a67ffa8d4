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

// Height algebra and link-reversal logic for one destination.
//
// A height is the quintuple (tau, oid, r, delta, id). The first three
// components form the reference level; a NULL height has no reference level
// and no delta, only the owner id. Links point from the higher node to the
// lower one, and the destination sits at the all-zero height.
//
// Everything here is a pure function of value-semantic state.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "anttora/types.hpp"

namespace anttora::tora {

struct ReferenceLevel {
  SimTime tau = 0.0;
  NodeId oid = 0;
  std::uint8_t reflected = 0;  // the r bit

  bool operator==(const ReferenceLevel&) const = default;
};

enum class Ordering { kLess, kEqual, kGreater };

inline Ordering compare_levels(const ReferenceLevel& a, const ReferenceLevel& b) {
  if (a.tau != b.tau) return a.tau < b.tau ? Ordering::kLess : Ordering::kGreater;
  if (a.oid != b.oid) return a.oid < b.oid ? Ordering::kLess : Ordering::kGreater;
  if (a.reflected != b.reflected) {
    return a.reflected < b.reflected ? Ordering::kLess : Ordering::kGreater;
  }
  return Ordering::kEqual;
}

struct Height {
  std::optional<ReferenceLevel> level;  // nullopt: NULL height
  std::int64_t delta = 0;
  NodeId id = 0;

  static Height null(NodeId owner) { return Height{std::nullopt, 0, owner}; }

  static Height zero(NodeId destination) {
    return Height{ReferenceLevel{0.0, 0, 0}, 0, destination};
  }

  static Height make(SimTime tau, NodeId oid, std::uint8_t r, std::int64_t delta,
                     NodeId owner) {
    return Height{ReferenceLevel{tau, oid, r}, delta, owner};
  }

  bool is_null() const { return !level.has_value(); }

  bool operator==(const Height&) const = default;
};

/// Lexicographic on (tau, oid, r, delta, id). NULL is above every non-NULL
/// height and two NULL heights compare equal.
inline Ordering compare_heights(const Height& a, const Height& b) {
  if (a.is_null() || b.is_null()) {
    if (a.is_null() && b.is_null()) return Ordering::kEqual;
    return a.is_null() ? Ordering::kGreater : Ordering::kLess;
  }
  if (auto c = compare_levels(*a.level, *b.level); c != Ordering::kEqual) return c;
  if (a.delta != b.delta) return a.delta < b.delta ? Ordering::kLess : Ordering::kGreater;
  if (a.id != b.id) return a.id < b.id ? Ordering::kLess : Ordering::kGreater;
  return Ordering::kEqual;
}

inline bool height_less(const Height& a, const Height& b) {
  return compare_heights(a, b) == Ordering::kLess;
}

enum class LinkDirection { kUpstream, kDownstream, kUndirected };

inline const char* to_string(LinkDirection d) {
  switch (d) {
    case LinkDirection::kUpstream: return "UP";
    case LinkDirection::kDownstream: return "DN";
    case LinkDirection::kUndirected: return "UN";
  }
  return "?";
}

inline LinkDirection classify_link(const Height& own, const Height& neighbor) {
  if (neighbor.is_null()) return LinkDirection::kUndirected;
  if (own.is_null()) return LinkDirection::kDownstream;
  switch (compare_heights(neighbor, own)) {
    case Ordering::kLess: return LinkDirection::kDownstream;
    case Ordering::kGreater: return LinkDirection::kUpstream;
    case Ordering::kEqual: break;
  }
  // Equal non-NULL heights only arise for a node compared with itself.
  return LinkDirection::kUndirected;
}

struct LinkState {
  NodeId neighbor = 0;
  Height mirrored;
  LinkDirection direction = LinkDirection::kUndirected;
};

/// TORA state one node keeps for a single destination.
class NodeToraState {
 public:
  NodeToraState() = default;

  NodeToraState(NodeId self, NodeId destination)
      : self_(self),
        destination_(destination),
        own_(self == destination ? Height::zero(destination) : Height::null(self)) {}

  NodeId self() const { return self_; }
  NodeId destination() const { return destination_; }
  bool is_destination() const { return self_ == destination_; }

  const Height& own_height() const { return own_; }
  const std::map<NodeId, LinkState>& links() const { return links_; }
  bool route_required() const { return route_required_; }

  bool has_neighbor(NodeId j) const { return links_.contains(j); }

  const Height* neighbor_height(NodeId j) const {
    auto it = links_.find(j);
    return it == links_.end() ? nullptr : &it->second.mirrored;
  }

  void set_route_required(bool rr) { route_required_ = rr; }

  void set_own_height(const Height& h) {
    if (is_destination()) throw PreconditionError("destination height is fixed at zero");
    own_ = h;
    own_.id = self_;
    for (auto& [j, ls] : links_) ls.direction = classify_link(own_, ls.mirrored);
  }

  /// A new neighbor starts NULL, or at zero when it is the destination.
  void add_neighbor(NodeId j) {
    if (links_.contains(j)) return;
    Height h = j == destination_ ? Height::zero(j) : Height::null(j);
    links_[j] = LinkState{j, h, classify_link(own_, h)};
  }

  void remove_neighbor(NodeId j) { links_.erase(j); }

  void set_neighbor_height(NodeId j, Height h) {
    h.id = j;
    if (j == destination_) h = Height::zero(j);
    links_[j] = LinkState{j, h, classify_link(own_, h)};
  }

 private:
  NodeId self_ = 0;
  NodeId destination_ = 0;
  Height own_ = Height::null(0);
  std::map<NodeId, LinkState> links_;
  bool route_required_ = false;
};

inline bool has_downstream(const NodeToraState& state) {
  const Height& own = state.own_height();
  return std::ranges::any_of(state.links(), [&](const auto& kv) {
    const Height& h = kv.second.mirrored;
    return !h.is_null() && height_less(h, own);
  });
}

inline bool has_upstream(const NodeToraState& state) {
  const Height& own = state.own_height();
  if (own.is_null()) return false;
  return std::ranges::any_of(state.links(), [&](const auto& kv) {
    const Height& h = kv.second.mirrored;
    return !h.is_null() && height_less(own, h);
  });
}

/// Height adopted on answering or relaying a query reply: the minimum
/// non-NULL neighbor height with delta + 1, re-owned by `own_id`.
inline Height new_height_on_reply(std::span<const Height> neighbor_heights, NodeId own_id) {
  const Height* best = nullptr;
  for (const Height& h : neighbor_heights) {
    if (h.is_null()) continue;
    if (best == nullptr || height_less(h, *best)) best = &h;
  }
  if (best == nullptr) throw PreconditionError("new_height_on_reply: all neighbor heights are NULL");
  Height out = *best;
  out.delta += 1;
  out.id = own_id;
  return out;
}

inline Height new_height_on_reply(const NodeToraState& state) {
  std::vector<Height> hs;
  hs.reserve(state.links().size());
  for (const auto& [j, ls] : state.links()) hs.push_back(ls.mirrored);
  return new_height_on_reply(hs, state.self());
}

enum class MaintenanceTrigger { kLinkFailure, kUpdReversal };

enum class MaintenanceCase {
  kGenerate,
  kPropagate,
  kReflect,
  kDetectPartition,
  kGenerateNoReaction,
};

inline const char* to_string(MaintenanceCase c) {
  switch (c) {
    case MaintenanceCase::kGenerate: return "generate";
    case MaintenanceCase::kPropagate: return "propagate";
    case MaintenanceCase::kReflect: return "reflect";
    case MaintenanceCase::kDetectPartition: return "detect_partition";
    case MaintenanceCase::kGenerateNoReaction: return "generate_no_reaction";
  }
  return "?";
}

enum class Broadcast { kUpd, kClr, kNone };

struct MaintenanceOutcome {
  MaintenanceCase kind = MaintenanceCase::kGenerate;
  Height new_height;
  Broadcast broadcast = Broadcast::kNone;
};

/// Chooses the reaction of a node that has just lost its last downstream link.
///
/// The trigger says whether the loss came from a link failure or from a
/// neighbor's height update. Only non-NULL neighbor heights take part in the
/// reference-level comparisons. A NULL outcome under GENERATE carries no
/// broadcast; DETECT_PARTITION always carries CLR.
inline MaintenanceOutcome maintenance_case(const NodeToraState& state, MaintenanceTrigger trigger,
                                           SimTime now) {
  if (has_downstream(state)) {
    throw PreconditionError("maintenance_case called while a downstream link exists");
  }
  const NodeId k = state.self();

  std::vector<const LinkState*> live;
  for (const auto& [j, ls] : state.links()) {
    if (!ls.mirrored.is_null()) live.push_back(&ls);
  }

  auto generate = [&](MaintenanceCase kind) {
    return MaintenanceOutcome{kind, Height::make(now, k, 0, 0, k), Broadcast::kUpd};
  };

  if (trigger == MaintenanceTrigger::kLinkFailure || live.empty()) {
    if (!has_upstream(state)) {
      return MaintenanceOutcome{MaintenanceCase::kGenerate, Height::null(k), Broadcast::kNone};
    }
    return generate(MaintenanceCase::kGenerate);
  }

  const ReferenceLevel first = *live.front()->mirrored.level;
  const bool all_equal = std::ranges::all_of(
      live, [&](const LinkState* ls) { return *ls->mirrored.level == first; });

  if (!all_equal) {
    // Highest neighbor reference level; within it the lowest delta (ties by
    // neighbor id, which the map iteration order already gives).
    const LinkState* pick = nullptr;
    for (const LinkState* ls : live) {
      if (pick == nullptr) { pick = ls; continue; }
      auto c = compare_levels(*ls->mirrored.level, *pick->mirrored.level);
      if (c == Ordering::kGreater ||
          (c == Ordering::kEqual && ls->mirrored.delta < pick->mirrored.delta)) {
        pick = ls;
      }
    }
    Height h{*pick->mirrored.level, pick->mirrored.delta - 1, k};
    return MaintenanceOutcome{MaintenanceCase::kPropagate, h, Broadcast::kUpd};
  }

  if (first.reflected == 0) {
    Height h = Height::make(first.tau, first.oid, 1, 0, k);
    return MaintenanceOutcome{MaintenanceCase::kReflect, h, Broadcast::kUpd};
  }
  if (first.oid == k) {
    return MaintenanceOutcome{MaintenanceCase::kDetectPartition, Height::null(k), Broadcast::kClr};
  }
  return generate(MaintenanceCase::kGenerateNoReaction);
}

/// Sets the own height and every neighbor mirror to NULL, keeping the
/// destination's mirror at zero.
inline void erase_heights(NodeToraState& state) {
  if (!state.is_destination()) state.set_own_height(Height::null(state.self()));
  std::vector<NodeId> ids;
  for (const auto& [j, ls] : state.links()) ids.push_back(j);
  for (NodeId j : ids) state.set_neighbor_height(j, Height::null(j));
}

struct ClrOutcome {
  NodeToraState state;
  bool rebroadcast = false;
  std::vector<NodeId> cleared;  // neighbors whose mirror went to NULL
};

inline ClrOutcome apply_clr(NodeToraState state, const ReferenceLevel& clr_level) {
  ClrOutcome out;
  const Height& own = state.own_height();
  if (!state.is_destination() && !own.is_null() && *own.level == clr_level) {
    for (const auto& [j, ls] : state.links()) {
      if (j != state.destination()) out.cleared.push_back(j);
    }
    erase_heights(state);
    out.rebroadcast = true;
  } else {
    std::vector<NodeId> hit;
    for (const auto& [j, ls] : state.links()) {
      if (!ls.mirrored.is_null() && *ls.mirrored.level == clr_level &&
          j != state.destination()) {
        hit.push_back(j);
      }
    }
    for (NodeId j : hit) state.set_neighbor_height(j, Height::null(j));
    out.cleared = std::move(hit);
  }
  out.state = std::move(state);
  return out;
}

}  // namespace anttora::tora
