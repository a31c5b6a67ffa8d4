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

// Ant-colony arithmetic: path metric aggregation, pheromone deposit,
// reinforcement, evaporation, and the path preference probability.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "anttora/types.hpp"

namespace anttora::aco {

/// QoS quantities of a path. hop_count counts nodes, endpoints included.
///
/// A single-node path has no links; its bandwidth is stored as 0 and is
/// ignored by extend().
struct PathMetrics {
  double delay = 0.0;       // s
  double bandwidth = 0.0;   // bit/s
  double energy = 0.0;      // J
  double drain_rate = 0.0;  // J/s
  int hop_count = 0;

  bool operator==(const PathMetrics&) const = default;
};

inline PathMetrics aggregate_metrics(std::span<const double> link_delays,
                                     std::span<const double> node_delays,
                                     std::span<const double> link_bandwidths,
                                     std::span<const double> node_energies,
                                     std::span<const double> node_drain_rates, int node_count) {
  if (link_delays.empty() || node_delays.empty() || link_bandwidths.empty() ||
      node_energies.empty() || node_drain_rates.empty()) {
    throw PreconditionError("aggregate_metrics: empty metric list");
  }
  const auto nodes = static_cast<std::size_t>(node_count);
  if (node_count < 2 || link_delays.size() != nodes - 1 || link_bandwidths.size() != nodes - 1 ||
      node_delays.size() != nodes || node_energies.size() != nodes ||
      node_drain_rates.size() != nodes) {
    throw PreconditionError("aggregate_metrics: list lengths disagree with node_count");
  }
  auto finite = [](std::span<const double> xs) {
    return std::ranges::all_of(xs, [](double x) { return std::isfinite(x); });
  };
  if (!finite(link_delays) || !finite(node_delays) || !finite(link_bandwidths) ||
      !finite(node_energies) || !finite(node_drain_rates)) {
    throw PreconditionError("aggregate_metrics: non-finite value");
  }
  if (std::ranges::any_of(link_bandwidths, [](double b) { return b <= 0.0; })) {
    throw PreconditionError("aggregate_metrics: nonpositive bandwidth");
  }
  PathMetrics m;
  for (double d : link_delays) m.delay += d;
  for (double d : node_delays) m.delay += d;
  m.bandwidth = std::ranges::min(link_bandwidths);
  m.energy = std::ranges::min(node_energies);
  m.drain_rate = std::ranges::max(node_drain_rates);
  m.hop_count = node_count;
  return m;
}

/// Metrics of the one-node path consisting of `node` alone.
inline PathMetrics seed_metrics(double node_delay, double energy, double drain_rate) {
  return PathMetrics{node_delay, 0.0, energy, drain_rate, 1};
}

/// Prepends a node to `downstream`, joined by one link.
inline PathMetrics extend(const PathMetrics& downstream, double link_delay, double link_bandwidth,
                          double node_delay, double energy, double drain_rate) {
  PathMetrics m;
  m.delay = downstream.delay + link_delay + node_delay;
  m.bandwidth =
      downstream.hop_count <= 1 ? link_bandwidth : std::min(downstream.bandwidth, link_bandwidth);
  m.energy = std::min(downstream.energy, energy);
  m.drain_rate = std::max(downstream.drain_rate, drain_rate);
  m.hop_count = downstream.hop_count + 1;
  return m;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

/// Reference bounds used to bring every metric onto [kNormFloor, 1].
struct NormalizationBounds {
  Range bandwidth{0.0, 1e7};
  Range energy{0.0, 100.0};
  Range delay{0.0, 1.0};
  Range hop_count{2.0, 16.0};
  Range drain_rate{0.0, 1.0};
};

inline constexpr double kNormFloor = 1e-6;

struct NormalizedMetrics {
  double bandwidth = 1.0;
  double energy = 1.0;
  double delay = 1.0;
  double hop_count = 1.0;
  double drain_rate = 1.0;
};

inline double normalize_value(double x, const Range& r) {
  if (!(r.hi > r.lo)) throw PreconditionError("normalization range must have hi > lo");
  const double u = std::clamp((x - r.lo) / (r.hi - r.lo), 0.0, 1.0);
  return kNormFloor + (1.0 - kNormFloor) * u;
}

inline NormalizedMetrics normalize(const PathMetrics& m, const NormalizationBounds& b) {
  return NormalizedMetrics{normalize_value(m.bandwidth, b.bandwidth),
                           normalize_value(m.energy, b.energy), normalize_value(m.delay, b.delay),
                           normalize_value(static_cast<double>(m.hop_count), b.hop_count),
                           normalize_value(m.drain_rate, b.drain_rate)};
}

struct DepositWeights {
  double lambda_bandwidth = 1.0;
  double lambda_energy = 1.0;
  double lambda_delay = 1.0;
  double lambda_hop_count = 1.0;
  double lambda_drain_rate = 1.0;
};

/// (B^lB + E^lE) / (D^lD + HC^lHC + DR^lDR) over normalized metrics.
inline double pheromone_deposit(const NormalizedMetrics& m, const DepositWeights& w) {
  const double num = std::pow(m.bandwidth, w.lambda_bandwidth) + std::pow(m.energy, w.lambda_energy);
  const double den = std::pow(m.delay, w.lambda_delay) + std::pow(m.hop_count, w.lambda_hop_count) +
                     std::pow(m.drain_rate, w.lambda_drain_rate);
  if (!(den > 0.0) || !std::isfinite(den)) {
    throw PreconditionError("pheromone_deposit: denominator is not positive");
  }
  const double d = num / den;
  if (!std::isfinite(d)) throw PreconditionError("pheromone_deposit: non-finite result");
  return d;
}

inline double pheromone_update(double tau, double rho, double delta_tau) {
  if (!(rho > 0.0 && rho < 1.0) || tau < 0.0 || delta_tau < 0.0) {
    throw PreconditionError("pheromone_update: requires 0<rho<1, tau>=0, delta>=0");
  }
  return rho * tau + delta_tau;
}

inline double evaporate(double tau, double q) {
  if (!(q > 0.0 && q <= 1.0) || tau < 0.0) {
    throw PreconditionError("evaporate: requires 0<q<=1, tau>=0");
  }
  return (1.0 - q) * tau;
}

struct PreferenceWeights {
  // pheromone, 1/delay, 1/hop_count, bandwidth, energy, 1/drain_rate
  std::array<double, 6> alpha{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  double rho = 0.7;
  double q = 0.1;
};

/// Pheromone per neighbor link, owned by one node for one destination.
class PheromoneTable {
 public:
  bool contains(NodeId j) const { return tau_.contains(j); }

  double get(NodeId j) const {
    auto it = tau_.find(j);
    return it == tau_.end() ? 0.0 : it->second;
  }

  /// Reinforcement rho*tau + delta; a link seen for the first time starts at tau0.
  double reinforce(NodeId j, double delta_tau, double rho, double tau0) {
    auto [it, fresh] = tau_.try_emplace(j, tau0);
    it->second = pheromone_update(it->second, rho, delta_tau);
    return it->second;
  }

  void evaporate_all(double q) {
    for (auto& [j, t] : tau_) t = evaporate(t, q);
  }

  void erase(NodeId j) { tau_.erase(j); }

  const std::map<NodeId, double>& entries() const { return tau_; }

 private:
  std::map<NodeId, double> tau_;
};

struct CandidateEntry {
  NodeId next_hop = 0;
  double tau = 0.0;
  PathMetrics metrics;
};

struct Preference {
  NodeId next_hop = 0;
  double probability = 0.0;
};

class NoPreferablePath : public Error {
 public:
  NoPreferablePath() : Error("path_preference: every candidate scores zero") {}
};

inline double preference_score(const CandidateEntry& c, const PreferenceWeights& w) {
  const PathMetrics& m = c.metrics;
  const std::array<double, 6> terms{c.tau,       1.0 / m.delay, 1.0 / m.hop_count,
                                    m.bandwidth, m.energy,      1.0 / m.drain_rate};
  double s = 1.0;
  for (std::size_t i = 0; i < terms.size(); ++i) s *= std::pow(terms[i], w.alpha[i]);
  return s;
}

inline std::vector<Preference> path_preference(std::span<const CandidateEntry> candidates,
                                               const PreferenceWeights& w) {
  if (candidates.empty()) throw PreconditionError("path_preference: no candidates");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const CandidateEntry& c : candidates) {
    if (!(c.metrics.delay > 0.0) || c.metrics.hop_count <= 0 || !(c.metrics.drain_rate > 0.0)) {
      throw PreconditionError("path_preference: delay, hop_count and drain_rate must be positive");
    }
    if (!(c.tau > 0.0) && w.alpha[0] != 0.0) {
      throw PreconditionError("path_preference: zero pheromone with nonzero alpha_1");
    }
    scores.push_back(preference_score(c, w));
  }
  double total = 0.0;
  for (double s : scores) total += s;
  if (!(total > 0.0) || !std::isfinite(total)) throw NoPreferablePath();
  std::vector<Preference> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out.push_back(Preference{candidates[i].next_hop, scores[i] / total});
  }
  return out;
}

}  // namespace anttora::aco
