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

#ifndef OACBENCH_CONTROLLERS_H_
#define OACBENCH_CONTROLLERS_H_

#include <optional>
#include <string>
#include <vector>

#include "oacbench/kinchain.h"
#include "oacbench/qp.h"
#include "oacbench/world.h"

namespace oacbench {

enum class ControllerId { kBaseline, kFlacco, kDing, kEscobedo };

const char* to_string(ControllerId id);
// Throws ConfigError naming the valid ids.
ControllerId parse_controller_id(const std::string& name);
std::vector<std::string> controller_ids();

struct ControllerParams {
  double v_max = 0.3;       // m/s
  double rho = 0.3;         // m, repulsion becomes negligible
  double alpha = 6.0;       // sigmoid shape factor
  double d_crit = 0.1;      // m
  double d_repulse = 0.2;   // m
  double d_notice = 0.3;    // m
  double d_max = 0.4;       // m
  double k = 0.1;           // mid-joint weight
  double mu_max = 0.1;
  double w0 = 0.05;
  double nominal_speed = 0.3;   // m/s
  double kappa_mid = 0.5;       // rad/s
  double surveillance_radius = 0.4;  // m
  double decay_rate = 0.4;      // m/s
  // -1 pushes control points away from obstacles; +1 reproduces the
  // literal direction d_hat(p, o).
  double repulsion_sign = -1.0;
  // Flacco's static control points. Empty means the chain's defaults.
  std::vector<ControlPoint> static_control_points;

  // Throws InputError when the distance ordering or signs are violated.
  void validate() const;
};

// A generated inequality row a' qd <= b, kept for diagnostics.
struct ConstraintRow {
  enum class Kind { kApproachVelocity, kDistanceGradient };
  Kind kind;
  VecX a;
  double b = 0.0;
  int link_index = 0;
};

struct ControlCommand {
  VecX qd_cmd;
  QPStatus status = QPStatus::kOptimal;
  QPSolution solution;

  // Task velocity handed to the QP (after repulsion or scaling).
  Vec3 task_velocity = Vec3::Zero();
  std::vector<ConstraintRow> rows;
  VecX lower;
  VecX upper;
  // Repulsive (or equivalent restriction) vectors.
  Vec3 ee_repulsion = Vec3::Zero();
  Vec3 body_repulsion = Vec3::Zero();
  std::vector<Vec3> static_repulsion;
};

// Joint velocity bounds that stop a joint from moving further past a
// position limit.
void joint_velocity_bounds(const KinematicChain& chain, const VecX& q,
                           VecX* lower, VecX* upper);

// Damping of the singularity-robust task term from the manipulability w.
double singularity_damping(double w, const ControllerParams& params);

// Sigmoid repulsion magnitude v(p, o) for a distance.
double repulsive_magnitude(double distance, const ControllerParams& params);

Vec3 flacco_repulsive(const SurveillanceResult& surveillance,
                      const ControllerParams& params);

struct JointBoundsResult {
  VecX lower;
  VecX upper;
};

// Restricts joint velocities that would move a control point towards its
// nearest obstacle. `surveillance` holds one result per control point.
JointBoundsResult flacco_joint_bounds(
    const std::vector<ControlPoint>& control_points,
    const std::vector<SurveillanceResult>& surveillance,
    const ControllerParams& params, const KinematicChain& chain,
    const ForwardKinematics& fk, const VecX& base_lower, const VecX& base_upper);

// Maximum approach velocity; nullopt drops the restriction.
std::optional<double> approach_velocity(double d, const ControllerParams& params);

// Velocity-scaling factor ||d_lowest|| / d_max clamped to [0, 1]; 1 without
// an obstacle.
double velocity_scale(std::optional<double> d_lowest, const ControllerParams& params);

struct DistanceGradient {
  VecX gradient;
  bool contact = false;
};

// Gradient of ||d|| w.r.t. q with the obstacle held fixed.
DistanceGradient distance_gradient(const KinematicChain& chain,
                                   const ForwardKinematics& fk,
                                   const DistanceQuery& query);

// Joint-space velocity towards the middle of the joint range.
VecX mid_joint_velocity(const KinematicChain& chain, const VecX& q,
                        const ControllerParams& params);

ControlCommand baseline_step(const KinematicChain& chain, const JointState& state,
                             const Vec3& xd, const ControllerParams& params);
ControlCommand flacco_step(const KinematicChain& chain, const JointState& state,
                           const Vec3& xd, const ObstacleSet& world,
                           const ControllerParams& params);
ControlCommand ding_step(const KinematicChain& chain, const JointState& state,
                         const Vec3& xd, const ObstacleSet& world,
                         const ControllerParams& params);
ControlCommand escobedo_step(const KinematicChain& chain, const JointState& state,
                             const Vec3& xd, const ObstacleSet& world,
                             const ControllerParams& params);

ControlCommand controller_step(ControllerId id, const KinematicChain& chain,
                               const JointState& state, const Vec3& xd,
                               const ObstacleSet& world,
                               const ControllerParams& params);

// Static control points in effect for the chain.
std::vector<ControlPoint> static_control_points(const KinematicChain& chain,
                                                const ControllerParams& params);

}  // namespace oacbench

#endif  // OACBENCH_CONTROLLERS_H_
