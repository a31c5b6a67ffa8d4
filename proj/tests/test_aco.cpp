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
#include <vector>

#include "anttora/aco.hpp"
#include "oracles.hpp"

namespace {

using namespace anttora;
using namespace anttora::aco;

TEST(AggregateMetrics, SingleLinkExample) {
  std::vector<double> ld{0.01}, nd{0.001, 0.001}, bw{2e6}, en{50, 40}, dr{0.2, 0.5};
  auto m = aggregate_metrics(ld, nd, bw, en, dr, 2);
  EXPECT_DOUBLE_EQ(m.delay, 0.012);
  EXPECT_EQ(m.bandwidth, 2e6);
  EXPECT_EQ(m.energy, 40);
  EXPECT_EQ(m.drain_rate, 0.5);
  EXPECT_EQ(m.hop_count, 2);
}

TEST(AggregateMetrics, EqualEnergies) {
  std::vector<double> ld{0.1, 0.1}, nd{0, 0, 0}, bw{1, 1}, en{7, 7, 7}, dr{0, 0, 0};
  EXPECT_EQ(aggregate_metrics(ld, nd, bw, en, dr, 3).energy, 7);
}

TEST(AggregateMetrics, Errors) {
  std::vector<double> empty, one{1.0}, two{1.0, 1.0}, zero{0.0};
  EXPECT_THROW(aggregate_metrics(empty, two, one, two, two, 2), PreconditionError);
  EXPECT_THROW(aggregate_metrics(one, two, zero, two, two, 2), PreconditionError);
  EXPECT_THROW(aggregate_metrics(one, two, one, two, two, 3), PreconditionError);
}

TEST(AggregateMetrics, MatchesFoldOracleAndIsPermutationInvariant) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.001, 10.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> ld(5), nd(6), bw(5), en(6), dr(6);
    for (auto* v : {&ld, &nd, &bw, &en, &dr}) {
      for (double& x : *v) x = u(rng);
    }
    auto m = aggregate_metrics(ld, nd, bw, en, dr, 6);
    auto o = oracle::fold(ld, nd, bw, en, dr);
    EXPECT_NEAR(m.delay, o.delay, 1e-12);
    EXPECT_EQ(m.bandwidth, o.bandwidth);
    EXPECT_EQ(m.energy, o.energy);
    EXPECT_EQ(m.drain_rate, o.drain);
    EXPECT_EQ(m.hop_count, o.hops);
    for (auto* v : {&ld, &nd, &bw, &en, &dr}) std::shuffle(v->begin(), v->end(), rng);
    auto p = aggregate_metrics(ld, nd, bw, en, dr, 6);
    EXPECT_NEAR(p.delay, m.delay, 1e-12);
    EXPECT_EQ(p.bandwidth, m.bandwidth);
    EXPECT_EQ(p.energy, m.energy);
    EXPECT_EQ(p.drain_rate, m.drain_rate);
  }
}

TEST(Extend, AgreesWithAggregation) {
  // Path a - b - c built back to front from c's seed.
  auto m = seed_metrics(0.001, 30, 0.4);
  m = extend(m, 0.01, 5e5, 0.002, 50, 0.1);
  m = extend(m, 0.02, 2e6, 0.003, 20, 0.3);
  std::vector<double> ld{0.02, 0.01}, nd{0.003, 0.002, 0.001}, bw{2e6, 5e5}, en{20, 50, 30},
      dr{0.3, 0.1, 0.4};
  auto a = aggregate_metrics(ld, nd, bw, en, dr, 3);
  EXPECT_NEAR(m.delay, a.delay, 1e-15);
  EXPECT_EQ(m.bandwidth, a.bandwidth);
  EXPECT_EQ(m.energy, a.energy);
  EXPECT_EQ(m.drain_rate, a.drain_rate);
  EXPECT_EQ(m.hop_count, a.hop_count);
}

TEST(Normalize, MapsOntoFloorToOne) {
  Range r{0.0, 10.0};
  EXPECT_EQ(normalize_value(-5, r), kNormFloor);
  EXPECT_EQ(normalize_value(10, r), 1.0);
  EXPECT_EQ(normalize_value(20, r), 1.0);
  EXPECT_NEAR(normalize_value(5, r), kNormFloor + (1 - kNormFloor) * 0.5, 1e-15);
  EXPECT_THROW(normalize_value(1, Range{1, 1}), PreconditionError);
}

TEST(PheromoneDeposit, HandEvaluation) {
  NormalizedMetrics m{4, 10, 2, 3, 1};
  EXPECT_NEAR(pheromone_deposit(m, DepositWeights{}), 14.0 / 6.0, 1e-15);
  EXPECT_NEAR(pheromone_deposit(m, DepositWeights{0, 0, 0, 0, 0}), 2.0 / 3.0, 1e-15);
}

TEST(PheromoneDeposit, MonotoneInEachMetric) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    DepositWeights dw{w(rng), w(rng), w(rng), w(rng), w(rng)};
    NormalizedMetrics a{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double base = pheromone_deposit(a, dw);
    auto bump = [&](double NormalizedMetrics::*f) {
      NormalizedMetrics b = a;
      b.*f *= 1.5;
      return pheromone_deposit(b, dw);
    };
    EXPECT_GT(bump(&NormalizedMetrics::bandwidth), base);
    EXPECT_GT(bump(&NormalizedMetrics::energy), base);
    EXPECT_LT(bump(&NormalizedMetrics::delay), base);
    EXPECT_LT(bump(&NormalizedMetrics::hop_count), base);
    EXPECT_LT(bump(&NormalizedMetrics::drain_rate), base);
  }
}

TEST(PheromoneDeposit, BandwidthFourBeatsTwo) {
  NormalizedMetrics a{2, 1, 1, 1, 1}, b{4, 1, 1, 1, 1};
  EXPECT_GT(pheromone_deposit(b, {}), pheromone_deposit(a, {}));
}

TEST(PheromoneUpdate, Examples) {
  EXPECT_EQ(pheromone_update(2.0, 0.5, 1.0), 2.0);
  EXPECT_EQ(pheromone_update(3.0, 0.5, 0.0), 1.5);
  EXPECT_THROW(pheromone_update(1.0, 1.0, 1.0), PreconditionError);
  EXPECT_THROW(pheromone_update(-1.0, 0.5, 1.0), PreconditionError);
}

TEST(PheromoneUpdate, ConvergesToGeometricLimit) {
  double tau = 0.0;
  for (int i = 0; i < 1000; ++i) tau = pheromone_update(tau, 0.5, 1.0);
  EXPECT_NEAR(tau, 1.0 / (1.0 - 0.5), 1e-9);
}

TEST(Evaporate, Examples) {
  EXPECT_EQ(evaporate(5.0, 1.0), 0.0);
  EXPECT_NEAR(evaporate(10.0, 0.1), 9.0, 1e-15);
  double tau = 3.0;
  for (int i = 0; i < 100; ++i) {
    const double next = evaporate(tau, 0.3);
    EXPECT_LE(next, tau);
    EXPECT_GE(next, 0.0);
    tau = next;
  }
  EXPECT_THROW(evaporate(1.0, 0.0), PreconditionError);
}

TEST(PheromoneTable, FirstReinforcementStartsFromTau0) {
  PheromoneTable t;
  EXPECT_EQ(t.get(4), 0.0);
  EXPECT_NEAR(t.reinforce(4, 1.0, 0.7, 0.1), 0.7 * 0.1 + 1.0, 1e-15);
  EXPECT_NEAR(t.reinforce(4, 1.0, 0.7, 0.1), 0.7 * 1.07 + 1.0, 1e-15);
  t.evaporate_all(0.1);
  EXPECT_NEAR(t.get(4), 0.9 * (0.7 * 1.07 + 1.0), 1e-15);
  t.erase(4);
  EXPECT_FALSE(t.contains(4));
}

CandidateEntry cand(NodeId hop, double tau, double delay, int hops, double bw, double e, double dr) {
  return CandidateEntry{hop, tau, PathMetrics{delay, bw, e, dr, hops}};
}

TEST(PathPreference, SingleCandidateIsCertain) {
  std::vector<CandidateEntry> cs{cand(1, 0.3, 0.1, 3, 1e6, 50, 0.1)};
  auto p = path_preference(cs, PreferenceWeights{});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].probability, 1.0);
}

TEST(PathPreference, IdenticalCandidatesSplitEvenly) {
  std::vector<CandidateEntry> cs{cand(1, 0.3, 0.1, 3, 1e6, 50, 0.1), cand(2, 0.3, 0.1, 3, 1e6, 50, 0.1)};
  auto p = path_preference(cs, PreferenceWeights{});
  EXPECT_EQ(p[0].probability, 0.5);
  EXPECT_EQ(p[1].probability, 0.5);
}

TEST(PathPreference, MatchesProductNormalizeOracle) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<CandidateEntry> cs;
    for (NodeId k = 0; k < 3; ++k) {
      cs.push_back(cand(k, u(rng), u(rng), 2 + static_cast<int>(k), u(rng), u(rng), u(rng)));
    }
    auto p = path_preference(cs, PreferenceWeights{});
    auto o = oracle::product_normalize(cs, PreferenceWeights{}.alpha);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(p[k].probability, o[k], 1e-12);
  }
}

TEST(PathPreference, CommonPheromoneScaleDoesNotMatter) {
  std::vector<CandidateEntry> cs{cand(1, 0.3, 0.1, 3, 1e6, 50, 0.1), cand(2, 0.9, 0.2, 4, 2e6, 20, 0.3)};
  auto p = path_preference(cs, PreferenceWeights{});
  for (auto& c : cs) c.tau *= 17.0;
  auto q = path_preference(cs, PreferenceWeights{});
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(p[k].probability, q[k].probability, 1e-12);
}

TEST(PathPreference, Errors) {
  std::vector<CandidateEntry> none;
  EXPECT_THROW(path_preference(none, {}), PreconditionError);
  std::vector<CandidateEntry> zero_tau{cand(1, 0.0, 0.1, 3, 1e6, 50, 0.1)};
  EXPECT_THROW(path_preference(zero_tau, {}), PreconditionError);
  std::vector<CandidateEntry> dead{cand(1, 0.3, 0.1, 3, 1e6, 0.0, 0.1)};
  EXPECT_THROW(path_preference(dead, {}), NoPreferablePath);
}

}  // namespace
