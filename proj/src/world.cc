// Copyright 2026 The oacbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oacbench/world.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oacbench {

std::vector<Obstacle> active_obstacles(const ObstacleSet& set) {
  std::vector<Obstacle> out;
  for (const Obstacle& o : set) {
    if (!o.dropped) out.push_back(o);
  }
  return out;
}

void validate_script(const ObstacleScript& script) {
  std::ostringstream id;
  id << "obstacle " << script.id << ": ";
  if (script.waypoints.empty()) throw ConfigError(id.str() + "no waypoints");
  if (!(script.speed > 0.0) || !std::isfinite(script.speed)) {
    throw ConfigError(id.str() + "speed must be positive");
  }
  for (const Waypoint& w : script.waypoints) {
    if (!std::isfinite(w.t) || !w.position.allFinite()) {
      throw ConfigError(id.str() + "non-finite waypoint");
    }
  }
  for (size_t i = 1; i < script.waypoints.size(); ++i) {
    const Waypoint& a = script.waypoints[i - 1];
    const Waypoint& b = script.waypoints[i];
    if (!(b.t > a.t)) {
      throw ConfigError(id.str() + "waypoint times must strictly increase");
    }
    const double implied = (b.position - a.position).norm() / (b.t - a.t);
    if (std::abs(implied - script.speed) > 1e-6 * script.speed) {
      std::ostringstream msg;
      msg << id.str() << "segment " << i - 1 << " implies speed " << implied
          << " m/s, script declares " << script.speed << " m/s";
      throw ConfigError(msg.str());
    }
  }
}

DistanceQuery make_query(const ControlPoint& cp, const Obstacle& obstacle) {
  DistanceQuery q;
  q.control_point = cp;
  q.obstacle_id = obstacle.id;
  q.d_vec = obstacle.position - cp.world_point;
  q.d_norm = q.d_vec.norm();
  if (q.d_norm > 0.0) q.d_hat = q.d_vec / q.d_norm;
  return q;
}

SurveillanceResult query_surveillance(const ControlPoint& cp,
                                      const std::vector<Obstacle>& obstacles,
                                      double radius) {
  SurveillanceResult result;
  for (const Obstacle& o : obstacles) {
    if (o.dropped) continue;
    DistanceQuery q = make_query(cp, o);
    if (q.d_norm <= radius) result.queries.push_back(q);
  }
  std::stable_sort(result.queries.begin(), result.queries.end(),
                   [](const DistanceQuery& a, const DistanceQuery& b) {
                     return a.d_norm < b.d_norm;
                   });
  return result;
}

double closest_segment_param(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len_sq = ab.squaredNorm();
  if (len_sq == 0.0) return 0.0;
  return std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
}

ControlPoint closest_point_on_chain(const KinematicChain& chain,
                                    const ForwardKinematics& fk,
                                    const Vec3& point) {
  ControlPoint best;
  best.kind = ControlPoint::Kind::kDynamic;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int link = 0; link < chain.dof(); ++link) {
    const LinkSegment& seg = chain.segments()[link];
    const Vec3 a = fk.point(link, seg.a);
    const Vec3 b = fk.point(link, seg.b);
    const double t = closest_segment_param(a, b, point);
    const Vec3 world = a + t * (b - a);
    const double dist = (point - world).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best.link_index = link;
      best.segment_param = t;
      best.local_point = seg.a + t * (seg.b - seg.a);
      best.world_point = world;
    }
  }
  return best;
}

ControlPoint closest_point_on_chain(const KinematicChain& chain, const VecX& q,
                                    const Obstacle& obstacle) {
  return closest_point_on_chain(chain, forward_kinematics(chain, q),
                                obstacle.position);
}

double chain_distance(const KinematicChain& chain, const ForwardKinematics& fk,
                      const Vec3& point) {
  return (point - closest_point_on_chain(chain, fk, point).world_point).norm();
}

Obstacle begin_decay(const Obstacle& obstacle, const Vec3& anchor) {
  Obstacle out = obstacle;
  DecayState state;
  state.anchor = anchor;
  const Vec3 offset = obstacle.position - anchor;
  state.distance = offset.norm();
  if (state.distance > 0.0) state.direction = offset / state.distance;
  out.decay = state;
  out.velocity.setZero();
  return out;
}

Obstacle decay_obstacle(const Obstacle& obstacle, double dt, double decay_rate) {
  if (!obstacle.decay) {
    throw InputError("decay_obstacle: obstacle is not decaying");
  }
  Obstacle out = obstacle;
  DecayState& s = *out.decay;
  s.distance += decay_rate * dt;
  out.position = s.anchor + s.distance * s.direction;
  out.velocity = decay_rate * s.direction;
  return out;
}

bool decayed_out(const Obstacle& obstacle, double d_max) {
  return obstacle.decay && obstacle.decay->distance >= d_max;
}

ObstacleSet advance_obstacles(const ObstacleSet& current, double t,
                              const std::vector<ObstacleScript>& script) {
  ObstacleSet next;
  next.reserve(script.size());
  for (const ObstacleScript& s : script) {
    auto it = std::find_if(current.begin(), current.end(),
                           [&s](const Obstacle& o) { return o.id == s.id; });
    if (it != current.end() && (it->decay || it->dropped)) {
      next.push_back(*it);
      continue;
    }
    if (s.waypoints.empty()) throw ConfigError("obstacle script has no waypoints");
    Obstacle o;
    o.id = s.id;
    const auto& wp = s.waypoints;
    if (t <= wp.front().t) {
      o.position = wp.front().position;
    } else if (t >= wp.back().t) {
      o.position = wp.back().position;
    } else {
      size_t i = 1;
      while (wp[i].t < t) ++i;
      const Waypoint& a = wp[i - 1];
      const Waypoint& b = wp[i];
      const double frac = (t - a.t) / (b.t - a.t);
      o.position = a.position + frac * (b.position - a.position);
      o.velocity = (b.position - a.position) / (b.t - a.t);
    }
    next.push_back(o);
  }
  return next;
}

}  // namespace oacbench
