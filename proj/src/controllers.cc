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

#include "oacbench/controllers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oacbench {

const char* to_string(ControllerId id) {
  switch (id) {
    case ControllerId::kBaseline:
      return "baseline";
    case ControllerId::kFlacco:
      return "flacco";
    case ControllerId::kDing:
      return "ding";
    case ControllerId::kEscobedo:
      return "escobedo";
  }
  return "unknown";
}

std::vector<std::string> controller_ids() {
  return {"baseline", "flacco", "ding", "escobedo"};
}

ControllerId parse_controller_id(const std::string& name) {
  for (ControllerId id : {ControllerId::kBaseline, ControllerId::kFlacco,
                          ControllerId::kDing, ControllerId::kEscobedo}) {
    if (name == to_string(id)) return id;
  }
  throw ConfigError("unknown controller '" + name +
                    "' (valid: baseline, flacco, ding, escobedo)");
}

void ControllerParams::validate() const {
  auto fail = [](const std::string& msg) {
    throw InputError("controller params: " + msg);
  };
  if (!(0.0 < d_crit && d_crit <= d_repulse && d_repulse <= d_notice &&
        d_notice <= d_max)) {
    fail("require 0 < d_crit <= d_repulse <= d_notice <= d_max");
  }
  if (!(v_max > 0.0)) fail("v_max must be positive");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(rho > 0.0)) fail("rho must be positive");
  if (!(k >= 0.0)) fail("k must be non-negative");
  if (!(mu_max >= 0.0)) fail("mu_max must be non-negative");
  if (!(w0 > 0.0)) fail("w0 must be positive");
  if (!(nominal_speed > 0.0)) fail("nominal_speed must be positive");
  if (!(surveillance_radius > 0.0)) fail("surveillance_radius must be positive");
  if (!(decay_rate >= 0.0)) fail("decay_rate must be non-negative");
  if (repulsion_sign != 1.0 && repulsion_sign != -1.0) {
    fail("repulsion_sign must be +1 or -1");
  }
}

void joint_velocity_bounds(const KinematicChain& chain, const VecX& q,
                           VecX* lower, VecX* upper) {
  const int n = chain.dof();
  lower->resize(n);
  upper->resize(n);
  for (int i = 0; i < n; ++i) {
    const JointSpec& j = chain.joint(i);
    (*lower)[i] = q[i] <= j.q_lower ? 0.0 : j.qd_lower;
    (*upper)[i] = q[i] >= j.q_upper ? 0.0 : j.qd_upper;
  }
}

double singularity_damping(double w, const ControllerParams& params) {
  if (w >= params.w0) return 0.0;
  const double deficit = 1.0 - w / params.w0;
  return params.mu_max * deficit * deficit;
}

double repulsive_magnitude(double distance, const ControllerParams& params) {
  return params.v_max /
         (1.0 + std::exp((2.0 * distance / params.rho - 1.0) * params.alpha));
}

Vec3 flacco_repulsive(const SurveillanceResult& surveillance,
                      const ControllerParams& params) {
  if (surveillance.empty()) return Vec3::Zero();
  Vec3 sum = Vec3::Zero();
  for (const DistanceQuery& q : surveillance.queries) {
    sum += repulsive_magnitude(q.d_norm, params) * params.repulsion_sign * q.d_hat;
  }
  const double norm = sum.norm();
  if (norm <= 1e-15) return Vec3::Zero();
  return repulsive_magnitude(surveillance.nearest().d_norm, params) * sum / norm;
}

JointBoundsResult flacco_joint_bounds(
    const std::vector<ControlPoint>& control_points,
    const std::vector<SurveillanceResult>& surveillance,
    const ControllerParams& params, const KinematicChain& chain,
    const ForwardKinematics& fk, const VecX& base_lower,
    const VecX& base_upper) {
  if (control_points.size() != surveillance.size()) {
    throw InputError("flacco_joint_bounds: one surveillance result per control point");
  }
  JointBoundsResult out{base_lower, base_upper};
  for (size_t c = 0; c < control_points.size(); ++c) {
    if (surveillance[c].empty()) continue;
    const DistanceQuery& nearest = surveillance[c].nearest();
    const double r = repulsive_magnitude(nearest.d_norm, params) / params.v_max;
    const Mat3X jp = point_jacobian(chain, fk, control_points[c]);
    const VecX s = jp.transpose() * nearest.d_hat * r;
    for (int i = 0; i < chain.dof(); ++i) {
      const JointSpec& j = chain.joint(i);
      if (s[i] >= 0.0) {
        out.upper[i] = std::min(out.upper[i], j.qd_upper * (1.0 - r));
      } else {
        out.lower[i] = std::max(out.lower[i], j.qd_lower * (1.0 - r));
      }
    }
  }
  return out;
}

std::optional<double> approach_velocity(double d, const ControllerParams& params) {
  if (d < params.d_notice && d < params.d_repulse) {
    const double v_a =
        params.v_max /
        (1.0 + std::exp(params.alpha * (2.0 * d / params.d_crit - 1.0)));
    return v_a - params.v_max;
  }
  if (d < params.d_notice) {
    const double v_b =
        params.v_max /
        (1.0 + std::exp(params.alpha * (2.0 * (d - params.d_crit) /
                                            (params.d_notice - params.d_crit) -
                                        1.0)));
    return v_b;
  }
  return std::nullopt;
}

double velocity_scale(std::optional<double> d_lowest,
                      const ControllerParams& params) {
  if (!d_lowest) return 1.0;
  return std::clamp(*d_lowest / params.d_max, 0.0, 1.0);
}

DistanceGradient distance_gradient(const KinematicChain& chain,
                                   const ForwardKinematics& fk,
                                   const DistanceQuery& query) {
  DistanceGradient g;
  if (query.d_norm == 0.0) {
    g.gradient = VecX::Zero(chain.dof());
    g.contact = true;
    return g;
  }
  g.gradient = -(point_jacobian(chain, fk, query.control_point).transpose() *
                 query.d_hat);
  return g;
}

VecX mid_joint_velocity(const KinematicChain& chain, const VecX& q,
                        const ControllerParams& params) {
  VecX out(chain.dof());
  for (int i = 0; i < chain.dof(); ++i) {
    const JointSpec& j = chain.joint(i);
    const double mid = 0.5 * (j.q_lower + j.q_upper);
    out[i] = params.kappa_mid * (mid - q[i]) / (j.q_upper - j.q_lower);
  }
  return out;
}

std::vector<ControlPoint> static_control_points(const KinematicChain& chain,
                                                const ControllerParams& params) {
  return params.static_control_points.empty() ? chain.default_static_points
                                              : params.static_control_points;
}

namespace {

struct TickContext {
  ForwardKinematics fk;
  Mat3X jacobian;
  double mu = 0.0;
  VecX lower;
  VecX upper;
};

TickContext prepare(const KinematicChain& chain, const JointState& state,
                    const ControllerParams& params) {
  if (state.q.size() != chain.dof()) {
    throw InputError("controller: joint state does not match chain");
  }
  TickContext ctx;
  ctx.fk = forward_kinematics(chain, state.q);
  ctx.jacobian = ee_jacobian(chain, ctx.fk);
  ctx.mu = singularity_damping(manipulability_scalar(ctx.jacobian), params);
  joint_velocity_bounds(chain, state.q, &ctx.lower, &ctx.upper);
  return ctx;
}

// Singularity-robust main task shared by every controller.
QpBuilder main_task(const TickContext& ctx, const Vec3& xd) {
  QpBuilder builder(static_cast<int>(ctx.jacobian.cols()));
  builder.add_task(ctx.jacobian, xd);
  builder.add_damping(ctx.mu);
  return builder;
}

ControlCommand finish(const QpBuilder& builder, ControlCommand cmd) {
  const QuadraticProgram qp = builder.build();
  cmd.solution = solve(qp);
  cmd.status = cmd.solution.status;
  cmd.lower = qp.lower;
  cmd.upper = qp.upper;
  if (cmd.solution.optimal()) {
    cmd.qd_cmd = cmd.solution.x;
  } else {
    cmd.qd_cmd = VecX::Zero(qp.num_variables());
  }
  return cmd;
}

// Repulsion-equivalent of an approach restriction: the minimum speed at
// which the point must retreat, directed away from the obstacle.
Vec3 restriction_vector(const DistanceQuery& q, double xa) {
  return std::max(0.0, -xa) * -q.d_hat;
}

// Adds the approach-velocity row of `query` when the restriction is in force.
std::optional<double> add_approach_row(const KinematicChain& chain,
                                       const TickContext& ctx,
                                       const DistanceQuery& query,
                                       const ControllerParams& params,
                                       QpBuilder* builder, ControlCommand* cmd) {
  const std::optional<double> xa = approach_velocity(query.d_norm, params);
  if (!xa) return std::nullopt;
  const Mat3X jc = point_jacobian(chain, ctx.fk, query.control_point);
  const VecX a = jc.transpose() * query.d_hat;
  builder->add_row(a, *xa);
  cmd->rows.push_back({ConstraintRow::Kind::kApproachVelocity, a, *xa,
                       query.control_point.link_index});
  return xa;
}

struct BodyPoint {
  ControlPoint cp;
  SurveillanceResult surveillance;
};

// One dynamic control point per obstacle, with its own surveillance set.
std::vector<BodyPoint> dynamic_points(const KinematicChain& chain,
                                      const TickContext& ctx,
                                      const std::vector<Obstacle>& obstacles,
                                      const ControllerParams& params) {
  std::vector<BodyPoint> out;
  for (const Obstacle& o : obstacles) {
    BodyPoint bp;
    bp.cp = closest_point_on_chain(chain, ctx.fk, o.position);
    bp.surveillance =
        query_surveillance(bp.cp, obstacles, params.surveillance_radius);
    if (!bp.surveillance.empty()) out.push_back(std::move(bp));
  }
  return out;
}

// Index of the body point nearest to its obstacle, -1 if none.
int nearest_body_point(const std::vector<BodyPoint>& points) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (best < 0 || points[i].surveillance.nearest().d_norm <
                        points[best].surveillance.nearest().d_norm) {
      best = i;
    }
  }
  return best;
}

}  // namespace

ControlCommand baseline_step(const KinematicChain& chain, const JointState& state,
                             const Vec3& xd, const ControllerParams& params) {
  const TickContext ctx = prepare(chain, state, params);
  QpBuilder builder = main_task(ctx, xd);
  builder.set_bounds(ctx.lower, ctx.upper);
  ControlCommand cmd;
  cmd.task_velocity = xd;
  return finish(builder, std::move(cmd));
}

ControlCommand flacco_step(const KinematicChain& chain, const JointState& state,
                           const Vec3& xd, const ObstacleSet& world,
                           const ControllerParams& params) {
  const TickContext ctx = prepare(chain, state, params);
  const std::vector<Obstacle> obstacles = active_obstacles(world);
  ControlCommand cmd;

  const ControlPoint ee = ee_control_point(chain, ctx.fk);
  const SurveillanceResult ee_view =
      query_surveillance(ee, obstacles, params.surveillance_radius);
  Vec3 task = xd;
  if (!ee_view.empty()) {
    cmd.ee_repulsion = flacco_repulsive(ee_view, params);
    task = xd + cmd.ee_repulsion;
  }

  std::vector<ControlPoint> cps = static_control_points(chain, params);
  std::vector<SurveillanceResult> views;
  for (ControlPoint& cp : cps) {
    cp = locate(cp, ctx.fk);
    views.push_back(query_surveillance(cp, obstacles, params.surveillance_radius));
    cmd.static_repulsion.push_back(flacco_repulsive(views.back(), params));
  }
  const JointBoundsResult bounds =
      flacco_joint_bounds(cps, views, params, chain, ctx.fk, ctx.lower, ctx.upper);

  QpBuilder builder = main_task(ctx, task);
  builder.set_bounds(bounds.lower, bounds.upper);
  cmd.task_velocity = task;
  return finish(builder, std::move(cmd));
}

ControlCommand ding_step(const KinematicChain& chain, const JointState& state,
                         const Vec3& xd, const ObstacleSet& world,
                         const ControllerParams& params) {
  const TickContext ctx = prepare(chain, state, params);
  const std::vector<Obstacle> obstacles = active_obstacles(world);
  ControlCommand cmd;
  cmd.task_velocity = xd;
  QpBuilder builder = main_task(ctx, xd);

  const std::vector<BodyPoint> points = dynamic_points(chain, ctx, obstacles, params);
  const int nearest = nearest_body_point(points);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const BodyPoint& bp = points[i];
    const DistanceQuery& q = bp.surveillance.nearest();
    const std::optional<double> xa =
        add_approach_row(chain, ctx, q, params, &builder, &cmd);
    if (i == nearest && xa) cmd.body_repulsion = restriction_vector(q, *xa);

    VecX weighted = VecX::Zero(chain.dof());
    for (const DistanceQuery& other : bp.surveillance.queries) {
      weighted += repulsive_magnitude(other.d_norm, params) *
                  distance_gradient(chain, ctx.fk, other).gradient;
    }
    builder.add_row(-weighted, 0.0);
    cmd.rows.push_back({ConstraintRow::Kind::kDistanceGradient, -weighted, 0.0,
                        bp.cp.link_index});
  }
  builder.set_bounds(ctx.lower, ctx.upper);
  return finish(builder, std::move(cmd));
}

ControlCommand escobedo_step(const KinematicChain& chain, const JointState& state,
                             const Vec3& xd, const ObstacleSet& world,
                             const ControllerParams& params) {
  const TickContext ctx = prepare(chain, state, params);
  const std::vector<Obstacle> obstacles = active_obstacles(world);
  ControlCommand cmd;

  std::optional<double> d_lowest;
  for (const Obstacle& o : obstacles) {
    const double d = chain_distance(chain, ctx.fk, o.position);
    if (d <= params.d_max && (!d_lowest || d < *d_lowest)) d_lowest = d;
  }
  Vec3 task = xd;
  if (d_lowest) task = velocity_scale(d_lowest, params) * xd;
  cmd.task_velocity = task;

  QpBuilder builder = main_task(ctx, task);
  builder.add_joint_velocity_target(params.k,
                                    mid_joint_velocity(chain, state.q, params));

  const std::vector<BodyPoint> points = dynamic_points(chain, ctx, obstacles, params);
  const int nearest = nearest_body_point(points);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const DistanceQuery& q = points[i].surveillance.nearest();
    const std::optional<double> xa =
        add_approach_row(chain, ctx, q, params, &builder, &cmd);
    if (i == nearest && xa) cmd.body_repulsion = restriction_vector(q, *xa);
  }

  const SurveillanceResult ee_view = query_surveillance(
      ee_control_point(chain, ctx.fk), obstacles, params.surveillance_radius);
  if (!ee_view.empty()) {
    const DistanceQuery& q = ee_view.nearest();
    const std::optional<double> xa =
        add_approach_row(chain, ctx, q, params, &builder, &cmd);
    if (xa) cmd.ee_repulsion = restriction_vector(q, *xa);
  }
  builder.set_bounds(ctx.lower, ctx.upper);
  return finish(builder, std::move(cmd));
}

ControlCommand controller_step(ControllerId id, const KinematicChain& chain,
                               const JointState& state, const Vec3& xd,
                               const ObstacleSet& world,
                               const ControllerParams& params) {
  switch (id) {
    case ControllerId::kBaseline:
      return baseline_step(chain, state, xd, params);
    case ControllerId::kFlacco:
      return flacco_step(chain, state, xd, world, params);
    case ControllerId::kDing:
      return ding_step(chain, state, xd, world, params);
    case ControllerId::kEscobedo:
      return escobedo_step(chain, state, xd, world, params);
  }
  throw InputError("controller_step: unknown controller");
}

}  // namespace oacbench
