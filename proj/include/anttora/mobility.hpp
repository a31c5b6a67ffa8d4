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

// Random-waypoint mobility with exact range-crossing detection.
//
// Within one step every node moves piecewise linearly (it may reach its
// waypoint, pause and pick a new one). Between breakpoints the squared
// distance of a pair is quadratic in time, so crossings of the
// communication range are solved for directly.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "anttora/types.hpp"

namespace anttora::mobility {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct NodeMotion {
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0;
  double pause_left = 0.0;
};

struct MobilityState {
  std::vector<NodeMotion> nodes;
  double width = 1000.0;
  double height = 1000.0;
  double comm_range = 250.0;
  double min_speed = 0.0;
  double max_speed = 0.0;
  double pause = 0.0;
  std::vector<std::vector<bool>> connected;  // symmetric

  bool in_range(NodeId a, NodeId b) const {
    return distance(nodes[a].position, nodes[b].position) <= comm_range;
  }
};

struct LinkChange {
  double offset = 0.0;  // seconds into the step, in (0, dt]
  NodeId a = 0;
  NodeId b = 0;
  bool up = false;
};

namespace detail {

struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  Vec2 p0;
  Vec2 v;
};

inline Vec2 at(const Segment& s, double t) {
  return {s.p0.x + s.v.x * (t - s.t0), s.p0.y + s.v.y * (t - s.t0)};
}

template <class Rng>
void new_leg(MobilityState& st, NodeMotion& n, Rng& rng) {
  std::uniform_real_distribution<double> ux(0.0, st.width);
  std::uniform_real_distribution<double> uy(0.0, st.height);
  n.waypoint = {ux(rng), uy(rng)};
  if (st.max_speed > st.min_speed) {
    n.speed = std::uniform_real_distribution<double>(st.min_speed, st.max_speed)(rng);
  } else {
    n.speed = st.min_speed;
  }
}

/// Advances one node by dt, returning its motion as linear segments.
template <class Rng>
std::vector<Segment> advance(MobilityState& st, NodeMotion& n, double dt, Rng& rng) {
  std::vector<Segment> segs;
  double t = 0.0;
  int guard = 0;
  while (t < dt && guard++ < 10000) {
    if (n.speed <= 0.0) {
      segs.push_back({t, dt, n.position, {0.0, 0.0}});
      break;
    }
    if (n.pause_left > 0.0) {
      const double p = std::min(n.pause_left, dt - t);
      segs.push_back({t, t + p, n.position, {0.0, 0.0}});
      n.pause_left -= p;
      t += p;
      if (n.pause_left <= 0.0) new_leg(st, n, rng);
      continue;
    }
    const double dist = distance(n.position, n.waypoint);
    const double need = dist / n.speed;
    const Vec2 v = dist > 0.0 ? Vec2{(n.waypoint.x - n.position.x) / need,
                                     (n.waypoint.y - n.position.y) / need}
                              : Vec2{0.0, 0.0};
    if (need > dt - t) {
      segs.push_back({t, dt, n.position, v});
      n.position = at(segs.back(), dt);
      t = dt;
    } else {
      segs.push_back({t, t + need, n.position, v});
      n.position = n.waypoint;
      t += need;
      n.pause_left = st.pause;
      if (st.pause <= 0.0) new_leg(st, n, rng);
    }
  }
  return segs;
}

}  // namespace detail

/// Builds a state with nodes at `positions`, each heading to a fresh waypoint.
template <class Rng>
MobilityState make_state(const std::vector<Vec2>& positions, double width, double height,
                         double comm_range, double min_speed, double max_speed, double pause,
                         Rng& rng) {
  MobilityState st;
  st.width = width;
  st.height = height;
  st.comm_range = comm_range;
  st.min_speed = min_speed;
  st.max_speed = max_speed;
  st.pause = pause;
  for (const auto& p : positions) {
    NodeMotion n;
    n.position = p;
    n.waypoint = p;
    st.nodes.push_back(n);
  }
  for (auto& n : st.nodes) detail::new_leg(st, n, rng);
  const std::size_t count = st.nodes.size();
  st.connected.assign(count, std::vector<bool>(count, false));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      const bool c = st.in_range(static_cast<NodeId>(a), static_cast<NodeId>(b));
      st.connected[a][b] = st.connected[b][a] = c;
    }
  }
  return st;
}

/// Advances all nodes by dt and reports every range crossing, ordered by
/// time offset (ties by node pair).
template <class Rng>
std::vector<LinkChange> step_mobility(MobilityState& st, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw PreconditionError("step_mobility: dt must be positive");
  const std::size_t count = st.nodes.size();
  std::vector<std::vector<detail::Segment>> segs(count);
  for (std::size_t i = 0; i < count; ++i) segs[i] = detail::advance(st, st.nodes[i], dt, rng);

  const double r2 = st.comm_range * st.comm_range;
  std::vector<LinkChange> out;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      std::vector<double> cuts{0.0, dt};
      for (const auto& s : segs[a]) cuts.push_back(s.t1);
      for (const auto& s : segs[b]) cuts.push_back(s.t1);
      std::ranges::sort(cuts);
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      bool up = st.connected[a][b];
      auto seg_at = [](const std::vector<detail::Segment>& ss, double t) -> const detail::Segment& {
        for (const auto& s : ss) {
          if (t < s.t1) return s;
        }
        return ss.back();
      };
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        if (!(hi > lo)) continue;
        const auto& sa = seg_at(segs[a], lo);
        const auto& sb = seg_at(segs[b], lo);
        const Vec2 pa = detail::at(sa, lo);
        const Vec2 pb = detail::at(sb, lo);
        const double rx = pa.x - pb.x;
        const double ry = pa.y - pb.y;
        const double wx = sa.v.x - sb.v.x;
        const double wy = sa.v.y - sb.v.y;
        // f(s) = A s^2 + B s + C, s = t - lo; in range where f <= 0.
        const double A = wx * wx + wy * wy;
        const double B = 2.0 * (rx * wx + ry * wy);
        const double C = rx * rx + ry * ry - r2;
        if (A > 0.0) {
          const double disc = B * B - 4.0 * A * C;
          if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            const double s1 = (-B - sq) / (2.0 * A);
            const double s2 = (-B + sq) / (2.0 * A);
            if (s1 > 0.0 && s1 <= hi - lo && !up) {
              out.push_back({lo + s1, static_cast<NodeId>(a), static_cast<NodeId>(b), true});
              up = true;
            }
            if (s2 > 0.0 && s2 <= hi - lo && up) {
              out.push_back({lo + s2, static_cast<NodeId>(a), static_cast<NodeId>(b), false});
              up = false;
            }
          }
        }
        // Resynchronize against the true end state to absorb rounding.
        const Vec2 ea = detail::at(sa, hi);
        const Vec2 eb = detail::at(sb, hi);
        const bool end_up = distance(ea, eb) <= st.comm_range;
        if (end_up != up) {
          out.push_back({hi, static_cast<NodeId>(a), static_cast<NodeId>(b), end_up});
          up = end_up;
        }
      }
      st.connected[a][b] = st.connected[b][a] = up;
    }
  }
  std::ranges::stable_sort(out, [](const LinkChange& x, const LinkChange& y) {
    return x.offset < y.offset;
  });
  return out;
}

}  // namespace anttora::mobility
