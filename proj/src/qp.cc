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

#include "oacbench/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

namespace oacbench {

const char* to_string(QPStatus status) {
  switch (status) {
    case QPStatus::kOptimal:
      return "optimal";
    case QPStatus::kInfeasible:
      return "infeasible";
    case QPStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Origin { kRow, kUpper, kLower };

// Constraint normal' x >= rhs.
struct Constraint {
  Origin origin;
  int index;
  double rhs;
};

void validate(const QuadraticProgram& qp) {
  const int n = qp.num_variables();
  auto fail = [](const std::string& msg) { throw InputError("qp: " + msg); };
  if (n == 0) fail("no decision variables");
  if (qp.H.rows() != n || qp.H.cols() != n) fail("H must be n x n");
  if (qp.A.cols() != n && qp.A.rows() > 0) fail("A must have n columns");
  if (qp.b.size() != qp.A.rows()) fail("b must have one entry per row of A");
  if (qp.lower.size() != n || qp.upper.size() != n) fail("bounds must be n-vectors");
  if (!qp.H.allFinite() || !qp.f.allFinite() || !qp.A.allFinite() ||
      !qp.b.allFinite()) {
    fail("non-finite entries");
  }
  for (int i = 0; i < n; ++i) {
    if (std::isnan(qp.lower[i]) || std::isnan(qp.upper[i])) fail("NaN bound");
    if (qp.lower[i] > qp.upper[i]) fail("lower bound exceeds upper bound");
  }
  const double scale = std::max(1.0, qp.H.cwiseAbs().maxCoeff());
  if ((qp.H - qp.H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail("H is not symmetric");
  }
}

// Working state of the Goldfarb-Idnani iteration. J holds L^-T rotated so
// that its first `iq` columns span the normals of the active set, and R is
// the upper triangular factor with N_active' J = [R 0].
class DualActiveSet {
 public:
  DualActiveSet(const MatX& G, const MatX& normals, const VecX& rhs)
      : n_(static_cast<int>(G.rows())), N_(normals), e_(rhs) {
    Eigen::LLT<MatX> llt(G);
    if (llt.info() != Eigen::Success) {
      throw InputError("qp: H is not positive definite after regularization");
    }
    const MatX L = llt.matrixL();
    J_ = L.transpose().triangularView<Eigen::Upper>().solve(MatX::Identity(n_, n_));
    R_ = MatX::Zero(n_, n_);
    r_norm_ = 1.0;
    d_.resize(n_);
  }

  const MatX& J() const { return J_; }
  int iq() const { return iq_; }
  const std::vector<int>& active() const { return active_; }
  const std::vector<double>& multipliers() const { return u_; }

  // d = J' np; returns the primal step z and fills the dual step r.
  VecX step_directions(int p, VecX* r) {
    d_ = J_.transpose() * N_.col(p);
    VecX z = J_.rightCols(n_ - iq_) * d_.tail(n_ - iq_);
    r->resize(iq_);
    for (int i = iq_ - 1; i >= 0; --i) {
      double sum = 0.0;
      for (int j = i + 1; j < iq_; ++j) sum += R_(i, j) * (*r)[j];
      (*r)[i] = (d_[i] - sum) / R_(i, i);
    }
    return z;
  }

  void update_multipliers(const VecX& r, double t) {
    for (int k = 0; k < iq_; ++k) u_[k] -= t * r[k];
  }

  bool add(int p, double u_p) {
    for (int j = n_ - 1; j >= iq_ + 1; --j) {
      double cc = d_[j - 1];
      double ss = d_[j];
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      d_[j] = 0.0;
      ss /= h;
      cc /= h;
      if (cc < 0.0) {
        cc = -cc;
        ss = -ss;
        d_[j - 1] = -h;
      } else {
        d_[j - 1] = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = 0; k < n_; ++k) {
        const double t1 = J_(k, j - 1);
        const double t2 = J_(k, j);
        J_(k, j - 1) = t1 * cc + t2 * ss;
        J_(k, j) = xny * (t1 + J_(k, j - 1)) - t2;
      }
    }
    ++iq_;
    for (int i = 0; i < iq_; ++i) R_(i, iq_ - 1) = d_[i];
    active_.push_back(p);
    u_.push_back(u_p);
    if (std::abs(d_[iq_ - 1]) <= std::numeric_limits<double>::epsilon() * r_norm_) {
      return false;  // normal is linearly dependent on the active set
    }
    r_norm_ = std::max(r_norm_, std::abs(d_[iq_ - 1]));
    return true;
  }

  void remove(int l) {
    active_.erase(active_.begin() + l);
    u_.erase(u_.begin() + l);
    for (int j = l; j < iq_ - 1; ++j) R_.col(j).head(n_) = R_.col(j + 1);
    R_.col(iq_ - 1).setZero();
    --iq_;
    for (int j = l; j < iq_; ++j) {
      double cc = R_(j, j);
      double ss = R_(j + 1, j);
      const double h = std::hypot(cc, ss);
      if (h == 0.0) continue;
      cc /= h;
      ss /= h;
      R_(j + 1, j) = 0.0;
      if (cc < 0.0) {
        R_(j, j) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        R_(j, j) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = j + 1; k < iq_; ++k) {
        const double t1 = R_(j, k);
        const double t2 = R_(j + 1, k);
        R_(j, k) = t1 * cc + t2 * ss;
        R_(j + 1, k) = xny * (t1 + R_(j, k)) - t2;
      }
      for (int k = 0; k < n_; ++k) {
        const double t1 = J_(k, j);
        const double t2 = J_(k, j + 1);
        J_(k, j) = t1 * cc + t2 * ss;
        J_(k, j + 1) = xny * (J_(k, j) + t1) - t2;
      }
    }
  }

 private:
  int n_;
  const MatX& N_;
  const VecX& e_;
  MatX J_;
  MatX R_;
  VecX d_;
  double r_norm_;
  int iq_ = 0;
  std::vector<int> active_;
  std::vector<double> u_;
};

}  // namespace

QPSolution solve(const QuadraticProgram& qp, const QPOptions& opts) {
  validate(qp);
  const int n = qp.num_variables();
  const int m = qp.num_rows();

  std::vector<Constraint> cons;
  for (int i = 0; i < m; ++i) cons.push_back({Origin::kRow, i, -qp.b[i]});
  for (int j = 0; j < n; ++j) {
    if (qp.upper[j] < kInf) cons.push_back({Origin::kUpper, j, -qp.upper[j]});
    if (qp.lower[j] > -kInf) cons.push_back({Origin::kLower, j, qp.lower[j]});
  }
  const int p_total = static_cast<int>(cons.size());
  MatX normals = MatX::Zero(n, p_total);
  VecX rhs(p_total);
  for (int c = 0; c < p_total; ++c) {
    switch (cons[c].origin) {
      case Origin::kRow:
        normals.col(c) = -qp.A.row(cons[c].index).transpose();
        break;
      case Origin::kUpper:
        normals(cons[c].index, c) = -1.0;
        break;
      case Origin::kLower:
        normals(cons[c].index, c) = 1.0;
        break;
    }
    rhs[c] = cons[c].rhs;
  }
  VecX normal_norms(p_total);
  for (int c = 0; c < p_total; ++c) normal_norms[c] = std::max(1.0, normals.col(c).norm());

  const MatX G = qp.H + opts.regularization * MatX::Identity(n, n);
  DualActiveSet ws(G, normals, rhs);

  QPSolution sol;
  // Unconstrained minimum.
  VecX x = -(ws.J() * (ws.J().transpose() * qp.f));
  std::vector<char> is_active(p_total, 0);
  const double eps = std::numeric_limits<double>::epsilon();

  auto slack = [&](int c) { return normals.col(c).dot(x) - rhs[c]; };

  sol.status = QPStatus::kMaxIterations;
  int iterations = 0;
  bool done = false;
  while (!done) {
    // Step 1: most violated inactive constraint.
    int p = -1;
    double worst = 0.0;
    for (int c = 0; c < p_total; ++c) {
      if (is_active[c]) continue;
      const double s = slack(c);
      if (s < -opts.tolerance * normal_norms[c] && s < worst) {
        worst = s;
        p = c;
      }
    }
    if (p < 0) {
      sol.status = QPStatus::kOptimal;
      break;
    }
    double u_p = 0.0;

    // Step 2: move towards satisfying constraint p, dropping blocking
    // active constraints along the way.
    while (true) {
      if (++iterations > opts.max_iterations) {
        done = true;
        break;
      }
      VecX r;
      const VecX z = ws.step_directions(p, &r);
      const VecX np = normals.col(p);

      double t1 = kInf;
      int l = -1;
      for (int k = 0; k < ws.iq(); ++k) {
        if (r[k] > 0.0) {
          const double ratio = ws.multipliers()[k] / r[k];
          if (ratio < t1) {
            t1 = ratio;
            l = k;
          }
        }
      }
      const double znp = z.dot(np);
      const double t2 = (z.norm() > eps * 1e3 && znp > 0.0) ? -slack(p) / znp : kInf;

      if (t1 == kInf && t2 == kInf) {
        sol.status = QPStatus::kInfeasible;
        done = true;
        break;
      }
      if (t2 == kInf) {
        // Dual step only.
        ws.update_multipliers(r, t1);
        u_p += t1;
        is_active[ws.active()[l]] = 0;
        ws.remove(l);
        continue;
      }
      const double t = std::min(t1, t2);
      x += t * z;
      ws.update_multipliers(r, t);
      u_p += t;
      if (t2 <= t1) {
        if (!ws.add(p, u_p)) {
          sol.status = QPStatus::kInfeasible;
          done = true;
        } else {
          is_active[p] = 1;
        }
        break;
      }
      is_active[ws.active()[l]] = 0;
      ws.remove(l);
    }
  }

  sol.x = x;
  sol.iterations = iterations;
  sol.row_multipliers = VecX::Zero(m);
  sol.upper_multipliers = VecX::Zero(n);
  sol.lower_multipliers = VecX::Zero(n);
  VecX stationarity = G * x + qp.f;
  for (int k = 0; k < ws.iq(); ++k) {
    const int c = ws.active()[k];
    const double u = std::max(0.0, ws.multipliers()[k]);
    stationarity -= u * normals.col(c);
    switch (cons[c].origin) {
      case Origin::kRow:
        sol.row_multipliers[cons[c].index] = u;
        break;
      case Origin::kUpper:
        sol.upper_multipliers[cons[c].index] = u;
        break;
      case Origin::kLower:
        sol.lower_multipliers[cons[c].index] = u;
        break;
    }
  }
  sol.active_count = ws.iq();
  sol.dual_residual = stationarity.cwiseAbs().maxCoeff();
  double violation = 0.0;
  for (int c = 0; c < p_total; ++c) violation = std::max(violation, -slack(c));
  sol.primal_residual = violation;
  return sol;
}

QpBuilder::QpBuilder(int num_variables)
    : n_(num_variables),
      H_(MatX::Zero(num_variables, num_variables)),
      f_(VecX::Zero(num_variables)),
      lower_(VecX::Constant(num_variables, -kInf)),
      upper_(VecX::Constant(num_variables, kInf)) {}

QpBuilder& QpBuilder::add_task(const MatX& jacobian, const VecX& desired_velocity) {
  if (jacobian.cols() != n_ || jacobian.rows() != desired_velocity.size()) {
    throw InputError("QpBuilder::add_task: dimension mismatch");
  }
  H_.noalias() += jacobian.transpose() * jacobian;
  f_.noalias() -= jacobian.transpose() * desired_velocity;
  return *this;
}

QpBuilder& QpBuilder::add_damping(double mu) {
  if (mu == 0.0) return *this;
  H_.diagonal().array() += mu;
  return *this;
}

QpBuilder& QpBuilder::add_joint_velocity_target(double k, const VecX& target) {
  if (target.size() != n_) {
    throw InputError("QpBuilder::add_joint_velocity_target: dimension mismatch");
  }
  if (k == 0.0) return *this;
  H_.diagonal().array() += k;
  f_ -= k * target;
  return *this;
}

QpBuilder& QpBuilder::add_row(const VecX& a, double b) {
  if (a.size() != n_) throw InputError("QpBuilder::add_row: dimension mismatch");
  rows_.push_back(a);
  rhs_.push_back(b);
  return *this;
}

QpBuilder& QpBuilder::set_bounds(const VecX& lower, const VecX& upper) {
  if (lower.size() != n_ || upper.size() != n_) {
    throw InputError("QpBuilder::set_bounds: dimension mismatch");
  }
  lower_ = lower;
  upper_ = upper;
  return *this;
}

QuadraticProgram QpBuilder::build() const {
  QuadraticProgram qp;
  qp.H = H_;
  qp.f = f_;
  qp.A.resize(static_cast<Eigen::Index>(rows_.size()), n_);
  qp.b.resize(static_cast<Eigen::Index>(rows_.size()));
  for (size_t i = 0; i < rows_.size(); ++i) {
    qp.A.row(static_cast<Eigen::Index>(i)) = rows_[i].transpose();
    qp.b[static_cast<Eigen::Index>(i)] = rhs_[i];
  }
  qp.lower = lower_;
  qp.upper = upper_;
  return qp;
}

}  // namespace oacbench
