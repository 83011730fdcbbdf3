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

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "oacbench/chain_io.h"
#include "oacbench/scenario.h"

namespace oacbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ControlPointSample sample_point(const KinematicChain& chain,
                                const ForwardKinematics& fk,
                                const ControlPoint& cp,
                                const std::vector<Obstacle>& obstacles,
                                const Vec3& repulsion) {
  ControlPointSample s;
  s.position = cp.world_point;
  s.d_min = kInf;
  for (const Obstacle& o : obstacles) {
    s.d_min = std::min(s.d_min, (o.position - cp.world_point).norm());
  }
  s.repulse_mag = repulsion.norm();
  const ManipulabilityEllipsoid ell =
      manipulability_ellipsoid(point_jacobian(chain, fk, cp));
  s.w = ell.w;
  s.lambda_min = ell.eigenvalues[2];
  s.degenerate = ell.degenerate;
  const Projection p = projection_metric(repulsion, ell);
  s.proj_raw = p.raw;
  s.proj_norm = p.normalized;
  return s;
}

// Advances scripted motion and the decay of vanished obstacles.
ObstacleSet step_world(const ObstacleSet& current, double t, double dt,
                       const Scenario& scenario, const KinematicChain& chain,
                       const ForwardKinematics& fk,
                       const ControllerParams& params) {
  ObstacleSet next = advance_obstacles(current, t, scenario.obstacles);
  for (size_t i = 0; i < next.size(); ++i) {
    Obstacle& o = next[i];
    const ObstacleScript& script = scenario.obstacles[i];
    if (o.dropped) continue;
    if (o.decay) {
      o = decay_obstacle(o, dt, params.decay_rate);
      if (decayed_out(o, params.d_max)) o.dropped = true;
    } else if (script.vanish_at && t >= *script.vanish_at) {
      o = begin_decay(o, closest_point_on_chain(chain, fk, o.position).world_point);
      if (decayed_out(o, params.d_max)) o.dropped = true;
    }
  }
  return next;
}

}  // namespace

Trace run(const Scenario& scenario, const SimConfig& config) {
  scenario.validate();
  config.validate();
  const KinematicChain chain = resolve_chain(scenario.chain);
  const VecX q0 = scenario.initial_q ? *scenario.initial_q : chain.home;
  if (q0.size() != chain.dof()) {
    throw ConfigError("initial posture does not match the chain's joint count");
  }
  const std::vector<ControlPoint> statics = static_control_points(chain, config.params);

  Trace trace;
  trace.dof = chain.dof();
  trace.num_control_points = 2 + static_cast<int>(statics.size());
  trace.num_obstacles = static_cast<int>(scenario.obstacles.size());

  JointState state{q0.cwiseMax(chain.lower_limits()).cwiseMin(chain.upper_limits()),
                   VecX::Zero(chain.dof())};
  const VecX q_lower = chain.lower_limits();
  const VecX q_upper = chain.upper_limits();
  const long steps = std::lround(scenario.duration / config.dt);
  trace.records.reserve(steps + 1);

  ObstacleSet world;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    TraceRecord rec;
    try {
      const ForwardKinematics fk = forward_kinematics(chain, state.q);
      world = step_world(world, t, config.dt, scenario, chain, fk, config.params);
      const Vec3 ee = fk.ee_position();
      const Vec3 xd = task_velocity(scenario, t, ee, config.kp,
                                    config.params.nominal_speed);
      const ControlCommand cmd = controller_step(config.controller, chain, state,
                                                 xd, world, config.params);
      if (!cmd.qd_cmd.allFinite()) {
        throw InputError("controller produced a non-finite command");
      }

      const std::vector<Obstacle> active = active_obstacles(world);
      rec.t = t;
      rec.q = state.q;
      rec.qd = cmd.qd_cmd;
      rec.ee = ee;
      rec.xd = cmd.task_velocity;
      rec.status = cmd.status;
      rec.active_rows = cmd.solution.active_count;
      rec.rows = cmd.rows;
      rec.lower = cmd.lower;
      rec.upper = cmd.upper;

      const ControlPoint ee_cp = ee_control_point(chain, fk);
      rec.control_points.push_back(
          sample_point(chain, fk, ee_cp, active, cmd.ee_repulsion));

      ControlPoint body = ee_cp;
      rec.robot_distance = kInf;
      for (const Obstacle& o : active) {
        const ControlPoint cp = closest_point_on_chain(chain, fk, o.position);
        const double d = (o.position - cp.world_point).norm();
        if (d < rec.robot_distance) {
          rec.robot_distance = d;
          body = cp;
        }
      }
      rec.control_points.push_back(
          sample_point(chain, fk, body, active, cmd.body_repulsion));

      for (size_t i = 0; i < statics.size(); ++i) {
        const Vec3 rep = i < cmd.static_repulsion.size() ? cmd.static_repulsion[i]
                                                         : Vec3::Zero();
        rec.control_points.push_back(
            sample_point(chain, fk, locate(statics[i], fk), active, rep));
      }
      for (const Obstacle& o : world) rec.obstacles.push_back(o.position);

      trace.records.push_back(std::move(rec));

      state.qd = cmd.qd_cmd;
      state.q = (state.q + cmd.qd_cmd * config.dt).cwiseMax(q_lower).cwiseMin(q_upper);
    } catch (const std::exception& e) {
      trace.aborted = true;
      std::ostringstream msg;
      msg << "aborted at t=" << t << ": " << e.what();
      trace.abort_reason = msg.str();
      break;
    }
  }
  return trace;
}

std::string trace_header(const Trace& trace) {
  std::ostringstream h;
  h << "t";
  for (int i = 0; i < trace.dof; ++i) h << ",q" << i;
  for (int i = 0; i < trace.dof; ++i) h << ",qd" << i;
  h << ",ee_x,ee_y,ee_z,xd_x,xd_y,xd_z,solver_status,n_active_rows";
  for (int i = 0; i < trace.num_control_points; ++i) {
    for (const char* field : {"x", "y", "z", "dmin", "repulse_mag", "w", "lmin",
                              "proj_raw", "proj_norm"}) {
      h << ",cp" << i << "_" << field;
    }
  }
  for (int j = 0; j < trace.num_obstacles; ++j) {
    h << ",obs" << j << "_x,obs" << j << "_y,obs" << j << "_z";
  }
  return h.str();
}

namespace {

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), ",%.17g", v);
  out << buf;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << trace_header(trace) << "\n";
  for (const TraceRecord& r : trace.records) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", r.t);
    out << buf;
    for (int i = 0; i < r.q.size(); ++i) put(out, r.q[i]);
    for (int i = 0; i < r.qd.size(); ++i) put(out, r.qd[i]);
    for (int i = 0; i < 3; ++i) put(out, r.ee[i]);
    for (int i = 0; i < 3; ++i) put(out, r.xd[i]);
    out << "," << to_string(r.status) << "," << r.active_rows;
    for (const ControlPointSample& s : r.control_points) {
      for (int i = 0; i < 3; ++i) put(out, s.position[i]);
      put(out, s.d_min);
      put(out, s.repulse_mag);
      put(out, s.w);
      put(out, s.lambda_min);
      put(out, s.proj_raw);
      put(out, s.proj_norm);
    }
    for (const Vec3& o : r.obstacles) {
      for (int i = 0; i < 3; ++i) put(out, o[i]);
    }
    out << "\n";
  }
}

}  // namespace oacbench
