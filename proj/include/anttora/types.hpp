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

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace anttora {

using NodeId = std::uint32_t;

// Simulation time in seconds.
using SimTime = double;

inline constexpr SimTime kNever = -std::numeric_limits<double>::infinity();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

enum class Mode { kAntTora, kBaselineTora };

inline const char* to_string(Mode m) {
  return m == Mode::kAntTora ? "ant_tora" : "baseline_tora";
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "ant_tora") return Mode::kAntTora;
  if (s == "baseline_tora") return Mode::kBaselineTora;
  throw Error("unknown mode '" + s + "'");
}

}  // namespace anttora
