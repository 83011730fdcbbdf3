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

// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
// any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oacbench/chain_io.h"
#include "oacbench/controllers.h"
#include "oacbench/metrics.h"
#include "oacbench/scenario.h"
#include "oracles.h"

namespace {

using namespace oacbench;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Outcome jacobian_oracle() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<KinematicChain> fixed = {builtin_chain("panda7"), builtin_chain("planar2")};
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const KinematicChain chain =
        trial % 3 == 2 ? testing::random_chain(rng, 2 + trial % 7) : fixed[trial % 2];
    VecX q(chain.dof());
    for (int i = 0; i < chain.dof(); ++i) {
      const JointSpec& j = chain.joint(i);
      q[i] = j.q_lower + unit(rng) * (j.q_upper - j.q_lower);
    }
    ControlPoint cp;
    cp.link_index = static_cast<int>(rng() % chain.dof());
    cp.local_point = Vec3(u(rng), u(rng), u(rng));
    const Mat3X analytic = point_jacobian(chain, q, cp);
    const Mat3X fd = testing::fd_point_jacobian(chain, q, cp);
    worst = std::max(worst, (analytic - fd).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-6 && elapsed < 10.0,
          fmt("max |J - J_fd| = %.3g (tol 1e-6), %.2f s (limit 10 s)", worst, elapsed)};
}

Outcome qp_oracle() {
  std::mt19937_64 rng(20260202);
  double worst_obj = 0.0;
  double worst_kkt = 0.0;
  int not_optimal = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int m = static_cast<int>(rng() % 7);
    const QuadraticProgram qp = testing::random_qp(rng, n, m);
    const QPSolution sol = solve(qp);
    if (!sol.optimal()) {
      ++not_optimal;
      continue;
    }
    const VecX ref = testing::projected_gradient_reference(qp);
    worst_obj = std::max(worst_obj, std::abs(qp.objective(sol.x) - qp.objective(ref)));
    worst_kkt = std::max(worst_kkt, testing::max_of(testing::kkt_residuals(qp, sol)));
  }
  return {not_optimal == 0 && worst_obj <= 1e-6 && worst_kkt <= 1e-6,
          fmt("500 problems, %d non-optimal, max objective gap %.3g, max KKT residual %.3g "
              "(tol 1e-6)",
              not_optimal, worst_obj, worst_kkt)};
}

Outcome repulsion_sigmoid() {
  const ControllerParams p;
  const double mid = repulsive_magnitude(p.rho / 2, p);
  bool decreasing = true;
  double prev = repulsive_magnitude(0.0, p);
  for (int i = 1; i < 1000; ++i) {
    const double v = repulsive_magnitude(i * (2.0 * p.rho) / 999.0, p);
    decreasing = decreasing && v < prev;
    prev = v;
  }
  const double err = std::abs(mid - p.v_max / 2);
  return {err <= 1e-12 && decreasing,
          fmt("|v(rho/2) - V_max/2| = %.3g, strictly decreasing on 1000 points: %s", err,
              decreasing ? "yes" : "no")};
}

Outcome approach_sigmoids() {
  const ControllerParams p;
  // Inner sigmoid evaluated directly: V_a = approach + V_max below d_repulse.
  const double va = *approach_velocity(p.d_crit / 2, p) + p.v_max;
  const double d_mid = (p.d_notice + p.d_crit) / 2;
  const double vb = *approach_velocity(d_mid, p);
  const double ea = std::abs(va - p.v_max / 2);
  const double eb = std::abs(vb - p.v_max / 2);
  return {ea <= 1e-12 && eb <= 1e-12 && d_mid >= p.d_repulse,
          fmt("|V_a(d_crit/2) - V_max/2| = %.3g, |V_b(mid) - V_max/2| = %.3g", ea, eb)};
}

Outcome velocity_scaling() {
  const ControllerParams p;
  const double at_max = velocity_scale(p.d_max, p);
  const double at_zero = velocity_scale(0.0, p);
  bool monotone = true;
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = velocity_scale(i * 1.5 * p.d_max / 1000, p);
    monotone = monotone && s >= prev && s >= 0.0 && s <= 1.0;
    prev = s;
  }
  return {at_max == 1.0 && at_zero == 0.0 && monotone,
          fmt("factor(d_max) = %.17g, factor(0) = %.17g, monotone: %s", at_max, at_zero,
              monotone ? "yes" : "no")};
}

std::vector<VecX> commands(const Trace& trace) {
  std::vector<VecX> out;
  for (const TraceRecord& r : trace.records) out.push_back(r.qd);
  return out;
}

Trace run_with(const Scenario& s, ControllerId id, const ControllerParams& params = {}) {
  SimConfig c;
  c.controller = id;
  c.params = params;
  return run(s, c);
}

Outcome obstacle_free_equivalence() {
  Scenario s = make_srdo();
  s.obstacles.clear();
  const auto base = commands(run_with(s, ControllerId::kBaseline));
  const bool flacco = commands(run_with(s, ControllerId::kFlacco)) == base;
  const bool ding = commands(run_with(s, ControllerId::kDing)) == base;
  ControllerParams k0;
  k0.k = 0.0;
  const bool escobedo = commands(run_with(s, ControllerId::kEscobedo, k0)) == base;
  return {flacco && ding && escobedo,
          fmt("bit-identical to baseline: flacco %s, ding %s, escobedo(k=0) %s",
              flacco ? "yes" : "no", ding ? "yes" : "no", escobedo ? "yes" : "no")};
}

Outcome constraint_satisfaction() {
  long rows = 0;
  long violations = 0;
  long optimal = 0;
  double worst = -1e300;
  for (const Scenario& s : {make_srdo(), make_drdo()}) {
    for (ControllerId id : {ControllerId::kDing, ControllerId::kEscobedo}) {
      const Trace trace = run_with(s, id);
      for (const TraceRecord& r : trace.records) {
        if (r.status != QPStatus::kOptimal) continue;
        ++optimal;
        for (const ConstraintRow& row : r.rows) {
          const double excess = row.a.dot(r.qd) - row.b;
          worst = std::max(worst, excess);
          ++rows;
          if (excess > 1e-6) ++violations;
        }
      }
    }
  }
  return {violations == 0 && rows > 0,
          fmt("%ld rows on %ld optimal ticks, %ld violations, max excess %.3g (tol 1e-6)", rows,
              optimal, violations, worst)};
}

double min_distance(const Trace& trace) {
  double d = std::numeric_limits<double>::infinity();
  for (const TraceRecord& r : trace.records) d = std::min(d, r.robot_distance);
  return d;
}

std::vector<Outcome> avoidance_efficacy() {
  std::vector<Outcome> out;
  for (const Scenario& s : {make_srdo(), make_drdo()}) {
    const double baseline = min_distance(run_with(s, ControllerId::kBaseline));
    for (ControllerId id : {ControllerId::kFlacco, ControllerId::kDing, ControllerId::kEscobedo}) {
      const auto start = Clock::now();
      const Trace trace = run_with(s, id);
      const double elapsed = seconds_since(start);
      const double d = min_distance(trace);
      out.push_back({!trace.aborted && d > baseline && d > 0.0 && elapsed < 30.0,
                     fmt("%s/%s: min distance %.6f m vs baseline %.6f m, %.2f s (limit 30 s)",
                         s.name.c_str(), to_string(id), d, baseline, elapsed)});
    }
  }
  return out;
}

Outcome jerk_pipeline() {
  const double dt = 0.01;
  SignalSeries cubic;
  SignalSeries flat;
  cubic.values.resize(1001, 1);
  flat.values.resize(1001, 1);
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * dt;
    cubic.t.push_back(t);
    flat.t.push_back(t);
    cubic.values(i, 0) = 3.0 * t * t;
    flat.values(i, 0) = -0.42;
  }
  const JerkProfile a = jerk_profile(cubic, dt);
  const JerkProfile b = jerk_profile(flat, dt);
  double err = 0.0;
  for (int i = 2; i < 999; ++i) err = std::max(err, std::abs(a.jerk.values(i, 0) - 6.0));
  const double zero = b.jerk.values.cwiseAbs().maxCoeff();
  return {err <= 1e-3 && zero <= 1e-9,
          fmt("max |jerk - 6| = %.3g (tol 1e-3), constant-velocity max |jerk| = %.3g (tol 1e-9)",
              err, zero)};
}

Outcome projection_metric_check() {
  std::mt19937_64 rng(20260303);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto ell = manipulability_ellipsoid(Mat3X::NullaryExpr(3, 7, [&] { return g(rng); }));
    const Vec3 v(g(rng), g(rng), g(rng));
    const double base = projection_metric(v, ell).normalized;
    for (double a : {1e-3, 1.0, 1e3}) {
      worst = std::max(worst, std::abs(projection_metric(a * v, ell).normalized - base));
    }
  }
  Mat3X j = Mat3X::Zero(3, 2);
  j(0, 0) = 2;
  j(1, 1) = 1;
  const auto ell = manipulability_ellipsoid(j);
  const double parallel = projection_metric(Vec3(0, 0, 0.3), ell).normalized;
  const double orthogonal = projection_metric(Vec3(0.3, 0.1, 0), ell).normalized;
  return {worst <= 1e-12 && parallel == 1.0 && orthogonal == 0.0,
          fmt("scale drift %.3g (tol 1e-12), parallel %.17g, orthogonal %.17g", worst, parallel,
              orthogonal)};
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(OACBENCH_FIXTURE_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome scenario_fidelity() {
  const bool srdo = serialize_scenario(make_srdo()) == read_fixture("srdo.json");
  const bool drdo = serialize_scenario(make_drdo()) == read_fixture("drdo.json");
  return {srdo && drdo, fmt("srdo fixture %s, drdo fixture %s", srdo ? "matches" : "differs",
                            drdo ? "matches" : "differs")};
}

Outcome determinism() {
  int identical = 0;
  int total = 0;
  for (const Scenario& s : {make_srdo(), make_drdo()}) {
    for (ControllerId id : {ControllerId::kBaseline, ControllerId::kFlacco, ControllerId::kDing,
                            ControllerId::kEscobedo}) {
      std::ostringstream a, b;
      write_trace_csv(run_with(s, id), a);
      write_trace_csv(run_with(s, id), b);
      identical += a.str() == b.str();
      ++total;
    }
  }
  return {identical == total, fmt("%d of %d scenario/controller traces byte-identical", identical,
                                  total)};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](const std::string& name, const Outcome& o) {
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report("jacobian_oracle", jacobian_oracle());
  report("qp_oracle", qp_oracle());
  report("repulsion_sigmoid_anchor", repulsion_sigmoid());
  report("approach_sigmoid_anchors", approach_sigmoids());
  report("velocity_scaling_anchors", velocity_scaling());
  report("obstacle_free_equivalence", obstacle_free_equivalence());
  report("constraint_satisfaction", constraint_satisfaction());
  for (const Outcome& o : avoidance_efficacy()) report("avoidance_efficacy", o);
  report("jerk_pipeline", jerk_pipeline());
  report("projection_metric", projection_metric_check());
  report("scenario_fidelity", scenario_fidelity());
  report("determinism", determinism());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
