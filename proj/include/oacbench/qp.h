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

#ifndef OACBENCH_QP_H_
#define OACBENCH_QP_H_

#include <string>
#include <vector>

#include "oacbench/common.h"

namespace oacbench {

// min 1/2 x'Hx + f'x  s.t.  A x <= b,  lower <= x <= upper.
// Infinite bounds are allowed and mean "unbounded".
struct QuadraticProgram {
  MatX H;
  VecX f;
  MatX A;  // m x n, m may be zero
  VecX b;
  VecX lower;
  VecX upper;

  int num_variables() const { return static_cast<int>(f.size()); }
  int num_rows() const { return static_cast<int>(A.rows()); }
  double objective(const VecX& x) const { return 0.5 * x.dot(H * x) + f.dot(x); }
};

enum class QPStatus { kOptimal, kInfeasible, kMaxIterations };

const char* to_string(QPStatus status);

struct QPOptions {
  double tolerance = 1e-8;
  int max_iterations = 200;
  // Added to the diagonal of H so that positive semi-definite tasks become
  // strictly convex.
  double regularization = 1e-9;
};

struct QPSolution {
  VecX x;
  QPStatus status = QPStatus::kInfeasible;
  int iterations = 0;
  // Largest constraint violation at x.
  double primal_residual = 0.0;
  // Infinity norm of the KKT stationarity residual (of the regularized H).
  double dual_residual = 0.0;
  // Lagrange multipliers, all non-negative.
  VecX row_multipliers;
  VecX lower_multipliers;
  VecX upper_multipliers;
  int active_count = 0;

  bool optimal() const { return status == QPStatus::kOptimal; }
};

// Dense dual active-set solver (Goldfarb-Idnani) for small strictly convex
// problems. Box bounds are handled as ordinary inequality rows. Throws
// InputError on dimension mismatches or non-finite data.
QPSolution solve(const QuadraticProgram& qp, const QPOptions& opts = {});

// Accumulates the per-tick control problem. The least-squares task
// 1/2 |xd - J qd|^2 contributes J'J to H and -J'xd to f.
class QpBuilder {
 public:
  explicit QpBuilder(int num_variables);

  QpBuilder& add_task(const MatX& jacobian, const VecX& desired_velocity);
  // mu/2 |qd|^2
  QpBuilder& add_damping(double mu);
  // k/2 |target - qd|^2
  QpBuilder& add_joint_velocity_target(double k, const VecX& target);
  // a' qd <= b
  QpBuilder& add_row(const VecX& a, double b);
  QpBuilder& set_bounds(const VecX& lower, const VecX& upper);

  QuadraticProgram build() const;

 private:
  int n_;
  MatX H_;
  VecX f_;
  std::vector<VecX> rows_;
  std::vector<double> rhs_;
  VecX lower_;
  VecX upper_;
};

}  // namespace oacbench

#endif  // OACBENCH_QP_H_
