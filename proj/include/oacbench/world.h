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

#ifndef OACBENCH_WORLD_H_
#define OACBENCH_WORLD_H_

#include <optional>
#include <vector>

#include "oacbench/kinchain.h"

namespace oacbench {

// Receding virtual position of an obstacle that left sensor range.
struct DecayState {
  Vec3 anchor = Vec3::Zero();     // last closest control point
  Vec3 direction = Vec3::UnitX();  // unit, anchor -> obstacle
  double distance = 0.0;
};

struct Obstacle {
  int id = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  std::optional<DecayState> decay;
  bool dropped = false;
};

using ObstacleSet = std::vector<Obstacle>;

// Obstacles that currently influence controllers.
std::vector<Obstacle> active_obstacles(const ObstacleSet& set);

struct Waypoint {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
};

// Piecewise-linear motion of one obstacle. Every segment must be traversed
// at `speed`.
struct ObstacleScript {
  int id = 0;
  std::vector<Waypoint> waypoints;
  double speed = 0.0;
  // Time at which the obstacle leaves sensor range and starts decaying.
  std::optional<double> vanish_at;
};

// Throws ConfigError for an empty or non-monotone script, or a script whose
// segments disagree with its speed.
void validate_script(const ObstacleScript& script);

struct DistanceQuery {
  ControlPoint control_point;
  int obstacle_id = 0;
  Vec3 d_vec = Vec3::Zero();  // control point -> obstacle
  double d_norm = 0.0;
  Vec3 d_hat = Vec3::Zero();  // zero when d_norm == 0
};

DistanceQuery make_query(const ControlPoint& cp, const Obstacle& obstacle);

struct SurveillanceResult {
  std::vector<DistanceQuery> queries;  // ascending d_norm
  bool empty() const { return queries.empty(); }
  const DistanceQuery& nearest() const { return queries.front(); }
};

// Obstacles within `radius` of the control point, nearest first.
SurveillanceResult query_surveillance(const ControlPoint& cp,
                                      const std::vector<Obstacle>& obstacles,
                                      double radius);

// Closest point of segment [a, b] to p, as a parameter in [0, 1].
double closest_segment_param(const Vec3& a, const Vec3& b, const Vec3& p);

// Dynamic control point minimizing the distance from the link segments to
// the point. Ties go to the lowest link index.
ControlPoint closest_point_on_chain(const KinematicChain& chain,
                                    const ForwardKinematics& fk,
                                    const Vec3& point);
ControlPoint closest_point_on_chain(const KinematicChain& chain, const VecX& q,
                                    const Obstacle& obstacle);

// Shortest distance from the point to any link segment.
double chain_distance(const KinematicChain& chain, const ForwardKinematics& fk,
                      const Vec3& point);

// Starts decay of an obstacle receding from `anchor`.
Obstacle begin_decay(const Obstacle& obstacle, const Vec3& anchor);

// Moves the virtual position decay_rate * dt further from its anchor.
// Requires obstacle.decay.
Obstacle decay_obstacle(const Obstacle& obstacle, double dt, double decay_rate);

// True once a decaying obstacle has receded to `d_max` or beyond.
bool decayed_out(const Obstacle& obstacle, double d_max);

// Scripted positions at time t. Obstacles already decaying or dropped in
// `current` keep their state.
ObstacleSet advance_obstacles(const ObstacleSet& current, double t,
                              const std::vector<ObstacleScript>& script);

}  // namespace oacbench

#endif  // OACBENCH_WORLD_H_
