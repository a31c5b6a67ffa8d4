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

#include "anttora/aco.hpp"
#include "anttora/energy.hpp"
#include "anttora/experiment.hpp"
#include "anttora/height.hpp"
#include "anttora/metrics.hpp"
#include "anttora/mobility.hpp"
#include "anttora/node_agent.hpp"
#include "anttora/packets.hpp"
#include "anttora/route_cache.hpp"
#include "anttora/scenario.hpp"
#include "anttora/simulator.hpp"
#include "anttora/trace.hpp"
#include "anttora/types.hpp"
