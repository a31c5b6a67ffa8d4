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
#include <vector>

#include "anttora/aco.hpp"
#include "anttora/types.hpp"

namespace anttora {

/// Residual energy with an exponentially weighted drain-rate estimate.
///
/// Consumption is accumulated per window; close_window() folds the window's
/// average rate into the estimate: drain = (1 - w) * drain + w * rate.
class NodeEnergy {
 public:
  explicit NodeEnergy(double initial = 100.0) : residual_(std::max(0.0, initial)) {}

  double residual() const { return residual_; }
  double drain_rate() const { return drain_; }
  double total_spent() const { return total_; }
  bool depleted() const { return residual_ <= 0.0; }

  /// Debits up to `joules`; returns what was actually taken.
  double debit(double joules) {
    if (joules < 0.0) throw PreconditionError("energy debit must be nonnegative");
    const double taken = std::min(joules, residual_);
    residual_ -= taken;
    window_ += taken;
    total_ += taken;
    return taken;
  }

  void close_window(double window_seconds, double ewma) {
    if (!(window_seconds > 0.0)) throw PreconditionError("window must be positive");
    drain_ = (1.0 - ewma) * drain_ + ewma * (window_ / window_seconds);
    window_ = 0.0;
  }

 private:
  double residual_;
  double drain_ = 0.0;
  double window_ = 0.0;
  double total_ = 0.0;
};

struct QosConstraints {
  double max_delay = 1.0;
  double min_bandwidth = 1.0;
  double min_energy = 1e-3;
  double max_drain_rate = 1e3;
  int max_hop_count = 64;

  bool satisfied_by(const aco::PathMetrics& m) const {
    return m.delay <= max_delay && m.bandwidth >= min_bandwidth && m.energy >= min_energy &&
           m.drain_rate <= max_drain_rate && m.hop_count <= max_hop_count;
  }
};

}  // namespace anttora
