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

#ifndef OACBENCH_SCENARIO_H_
#define OACBENCH_SCENARIO_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oacbench/controllers.h"
#include "oacbench/kinchain.h"
#include "oacbench/world.h"

namespace oacbench {

struct StaticTarget {
  Vec3 position = Vec3::Zero();
};

// Counter-clockwise (for positive angular_speed) circle in the x-y plane.
struct CircleReference {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  double angular_speed = 0.0;  // rad/s
  double phase = 0.0;          // rad at t = 0
};

struct Scenario {
  std::string name;
  std::variant<StaticTarget, CircleReference> reference;
  std::vector<ObstacleScript> obstacles;
  double duration = 10.0;
  std::string chain = "panda7";
  // Overrides the chain's home posture.
  std::optional<VecX> initial_q;

  void validate() const;
};

// Static end-effector target, obstacle sweeping past the robot body.
Scenario make_srdo();
// Circle tracking, obstacle sweeping past the end-effector.
Scenario make_drdo();

std::vector<std::string> scenario_ids();
// Built-in id or path to a scenario JSON file.
Scenario resolve_scenario(const std::string& id_or_path);

std::string serialize_scenario(const Scenario& scenario);
Scenario parse_scenario(const std::string& json_text);

struct ReferenceSample {
  Vec3 position;
  Vec3 velocity;
};
ReferenceSample reference_at(const Scenario& scenario, double t);

// clamp_norm(kp (x_ref(t) - ee) + xd_ref(t), nominal_speed)
Vec3 task_velocity(const Scenario& scenario, double t, const Vec3& ee_pos,
                   double kp, double nominal_speed);

struct SimConfig {
  double dt = 0.01;
  ControllerId controller = ControllerId::kBaseline;
  ControllerParams params;
  double kp = 2.0;  // 1/s

  void validate() const;
};

struct ControlPointSample {
  Vec3 position = Vec3::Zero();
  double d_min = 0.0;  // +inf when no obstacle is present
  double repulse_mag = 0.0;
  double w = 0.0;
  double lambda_min = 0.0;
  double proj_raw = 0.0;
  double proj_norm = 0.0;
  bool degenerate = false;
};

struct TraceRecord {
  double t = 0.0;
  VecX q;
  VecX qd;
  Vec3 ee = Vec3::Zero();
  Vec3 xd = Vec3::Zero();
  QPStatus status = QPStatus::kOptimal;
  int active_rows = 0;
  // cp0: end-effector; cp1: body point closest to the nearest obstacle;
  // cp2..: static control points.
  std::vector<ControlPointSample> control_points;
  std::vector<Vec3> obstacles;
  // Minimum distance from any link segment to any obstacle.
  double robot_distance = 0.0;
  std::vector<ConstraintRow> rows;
  VecX lower;
  VecX upper;
};

struct Trace {
  int dof = 0;
  int num_control_points = 0;
  int num_obstacles = 0;
  std::vector<TraceRecord> records;
  bool aborted = false;
  std::string abort_reason;
};

// Fixed-step kinematic simulation. Deterministic.
Trace run(const Scenario& scenario, const SimConfig& config);

// CSV with 17 significant digits; see README for the column layout.
void write_trace_csv(const Trace& trace, std::ostream& out);
std::string trace_header(const Trace& trace);

}  // namespace oacbench

#endif  // OACBENCH_SCENARIO_H_
