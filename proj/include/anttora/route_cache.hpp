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

#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "anttora/aco.hpp"
#include "anttora/types.hpp"

namespace anttora {

struct RouteCacheEntry {
  std::vector<NodeId> path;  // this node first, destination last
  aco::PathMetrics metrics;
  double preference = 0.0;
  SimTime created_at = 0.0;
  SimTime expires_at = 0.0;

  NodeId next_hop() const { return path.size() > 1 ? path[1] : path.front(); }
  bool expired(SimTime now) const { return now >= expires_at; }
};

inline bool loop_free(const std::vector<NodeId>& path) {
  std::set<NodeId> seen(path.begin(), path.end());
  return seen.size() == path.size();
}

/// Known paths from one node to one destination.
class RouteCache {
 public:
  /// Adds a path, or refreshes metrics and expiry of an identical one.
  /// Returns true when the path was not cached before.
  bool insert(RouteCacheEntry e) {
    if (e.path.size() < 2 || !loop_free(e.path)) {
      throw PreconditionError("route cache: path must be loop-free with at least two nodes");
    }
    if (!(e.expires_at > e.created_at)) throw PreconditionError("route cache: expiry before creation");
    for (auto& old : entries_) {
      if (old.path == e.path) {
        old.metrics = e.metrics;
        old.expires_at = e.expires_at;
        return false;
      }
    }
    entries_.push_back(std::move(e));
    return true;
  }

  std::size_t purge_if(const std::function<bool(const RouteCacheEntry&)>& pred) {
    auto n = std::erase_if(entries_, pred);
    return static_cast<std::size_t>(n);
  }

  std::size_t purge_expired(SimTime now) {
    return purge_if([now](const RouteCacheEntry& e) { return e.expired(now); });
  }

  std::size_t purge_containing(NodeId node) {
    return purge_if([node](const RouteCacheEntry& e) {
      return std::ranges::find(e.path, node) != e.path.end();
    });
  }

  std::size_t purge_next_hop(NodeId hop) {
    return purge_if([hop](const RouteCacheEntry& e) { return e.next_hop() == hop; });
  }

  /// Highest preference; ties go to the older entry, then the
  /// lexicographically smaller path.
  const RouteCacheEntry* best(SimTime now) const {
    const RouteCacheEntry* pick = nullptr;
    for (const auto& e : entries_) {
      if (e.expired(now)) continue;
      if (pick == nullptr || e.preference > pick->preference ||
          (e.preference == pick->preference &&
           (e.created_at < pick->created_at ||
            (e.created_at == pick->created_at && e.path < pick->path)))) {
        pick = &e;
      }
    }
    return pick;
  }

  void refresh(const std::vector<NodeId>& path, SimTime expires_at) {
    for (auto& e : entries_) {
      if (e.path == path) e.expires_at = std::max(e.expires_at, expires_at);
    }
  }

  bool has_unexpired(SimTime now) const { return best(now) != nullptr; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<RouteCacheEntry>& entries() { return entries_; }
  const std::vector<RouteCacheEntry>& entries() const { return entries_; }

 private:
  std::vector<RouteCacheEntry> entries_;
};

}  // namespace anttora
