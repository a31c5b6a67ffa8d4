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

// Independent reference computations used by the tests. Nothing here calls
// into the library's decision logic; only plain data types are shared.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "anttora/aco.hpp"
#include "anttora/energy.hpp"
#include "anttora/height.hpp"

namespace oracle {

using anttora::NodeId;
using anttora::tora::Height;

// ---- heights ------------------------------------------------------------

/// -1, 0, +1 by plain tuple comparison; NULL sorts above everything.
inline int compare(const Height& a, const Height& b) {
  if (!a.level && !b.level) return 0;
  if (!a.level) return 1;
  if (!b.level) return -1;
  auto ta = std::make_tuple(a.level->tau, a.level->oid, int{a.level->reflected}, a.delta, a.id);
  auto tb = std::make_tuple(b.level->tau, b.level->oid, int{b.level->reflected}, b.delta, b.id);
  if (ta < tb) return -1;
  if (tb < ta) return 1;
  return 0;
}

enum class Case { kGenerate, kGenerateNull, kPropagate, kReflect, kDetect, kNoReaction };

/// The maintenance decision written as a flat table over
/// (trigger, all levels equal, r, oid == self, any upstream).
inline Case decide(bool link_failure, bool levels_equal, int r, bool oid_is_self, bool upstream,
                   bool any_live) {
  if (link_failure || !any_live) return upstream ? Case::kGenerate : Case::kGenerateNull;
  if (!levels_equal) return Case::kPropagate;
  if (r == 0) return Case::kReflect;
  return oid_is_self ? Case::kDetect : Case::kNoReaction;
}

// ---- metrics ------------------------------------------------------------

struct Metrics {
  double delay;
  double bandwidth;
  double energy;
  double drain;
  int hops;
};

inline Metrics fold(const std::vector<double>& link_delays, const std::vector<double>& node_delays,
                    const std::vector<double>& bws, const std::vector<double>& energies,
                    const std::vector<double>& drains) {
  Metrics m{};
  m.delay = std::accumulate(link_delays.begin(), link_delays.end(), 0.0) +
            std::accumulate(node_delays.begin(), node_delays.end(), 0.0);
  m.bandwidth = *std::min_element(bws.begin(), bws.end());
  m.energy = *std::min_element(energies.begin(), energies.end());
  m.drain = *std::max_element(drains.begin(), drains.end());
  m.hops = static_cast<int>(node_delays.size());
  return m;
}

/// Preference product evaluated term by term, then divided by the sum.
inline std::vector<double> product_normalize(const std::vector<anttora::aco::CandidateEntry>& cs,
                                             const std::array<double, 6>& a) {
  std::vector<double> w;
  for (const auto& c : cs) {
    double x = std::pow(c.tau, a[0]);
    x *= std::pow(1.0 / c.metrics.delay, a[1]);
    x *= std::pow(1.0 / static_cast<double>(c.metrics.hop_count), a[2]);
    x *= std::pow(c.metrics.bandwidth, a[3]);
    x *= std::pow(c.metrics.energy, a[4]);
    x *= std::pow(1.0 / c.metrics.drain_rate, a[5]);
    w.push_back(x);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

// ---- graphs -------------------------------------------------------------

using Edge = std::pair<NodeId, NodeId>;

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  std::vector<std::vector<NodeId>> adjacency() const {
    std::vector<std::vector<NodeId>> adj(n);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
  }

  bool has_edge(NodeId a, NodeId b) const {
    return std::find(edges.begin(), edges.end(), Edge{std::min(a, b), std::max(a, b)}) != edges.end();
  }
};

inline bool connected(const Graph& g) {
  if (g.n == 0) return true;
  auto adj = g.adjacency();
  std::vector<bool> seen(g.n, false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

/// Erdos-Renyi draws with edge probability p, retried until connected.
inline Graph random_connected(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  while (true) {
    Graph g;
    g.n = n;
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (coin(rng)) g.edges.push_back({a, b});
      }
    }
    if (connected(g)) return g;
  }
}

/// Directed graph u -> v; true if any cycle exists.
inline bool has_cycle(std::size_t n, const std::vector<Edge>& arcs) {
  std::vector<std::vector<NodeId>> out(n);
  for (auto [u, v] : arcs) out[u].push_back(v);
  std::vector<int> color(n, 0);
  std::function<bool(NodeId)> dfs = [&](NodeId u) {
    color[u] = 1;
    for (NodeId v : out[u]) {
      if (color[v] == 1) return true;
      if (color[v] == 0 && dfs(v)) return true;
    }
    color[u] = 2;
    return false;
  };
  for (NodeId u = 0; u < n; ++u) {
    if (color[u] == 0 && dfs(u)) return true;
  }
  return false;
}

/// Nodes that can reach `target` along directed arcs.
inline std::set<NodeId> reaches(std::size_t n, const std::vector<Edge>& arcs, NodeId target) {
  std::vector<std::vector<NodeId>> in(n);
  for (auto [u, v] : arcs) in[v].push_back(u);
  std::set<NodeId> seen{target};
  std::vector<NodeId> stack{target};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : in[v]) {
      if (seen.insert(u).second) stack.push_back(u);
    }
  }
  return seen;
}

/// Every simple path from `from` to `to`.
inline std::vector<std::vector<NodeId>> simple_paths(const Graph& g, NodeId from, NodeId to) {
  auto adj = g.adjacency();
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> path{from};
  std::vector<bool> on(g.n, false);
  on[from] = true;
  std::function<void(NodeId)> walk = [&](NodeId u) {
    if (u == to) {
      out.push_back(path);
      return;
    }
    for (NodeId v : adj[u]) {
      if (on[v]) continue;
      on[v] = true;
      path.push_back(v);
      walk(v);
      path.pop_back();
      on[v] = false;
    }
  };
  walk(from);
  return out;
}

/// Per-link quantities a node derives from a HELLO on an idle static link.
struct LinkEstimate {
  double delay;      // HELLO latency minus the receiver's processing delay
  double bandwidth;  // HELLO bits over HELLO latency
};

inline LinkEstimate hello_estimate(double hello_bits, double capacity, double propagation,
                                   double receiver_processing) {
  const double latency = hello_bits / capacity + propagation + receiver_processing;
  return {latency - receiver_processing, hello_bits / latency};
}

/// QoS check on the delay / bandwidth / hop-count part of the constraints.
inline bool static_feasible(const Metrics& m, const anttora::QosConstraints& q) {
  return m.delay <= q.max_delay && m.bandwidth >= q.min_bandwidth && m.hops <= q.max_hop_count;
}

/// Analytic end-to-end time of a data packet along `path`.
inline double path_delay(const std::vector<NodeId>& path, double bits,
                         const std::function<std::pair<double, double>(NodeId, NodeId)>& link,
                         const std::function<double(NodeId)>& processing) {
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto [capacity, prop] = link(path[i], path[i + 1]);
    t += bits / capacity + prop + processing(path[i + 1]);
  }
  return t;
}

}  // namespace oracle
