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

#include "oacbench/kinchain.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace oacbench {

Mat3 rpy_to_matrix(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

namespace {

Transform make_transform(const Vec3& xyz, const Vec3& rpy) {
  Transform t = Transform::Identity();
  t.linear() = rpy_to_matrix(rpy);
  t.translation() = xyz;
  return t;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

}  // namespace

Transform JointSpec::origin() const {
  return make_transform(origin_xyz, origin_rpy);
}

Transform RigidOffset::transform() const { return make_transform(xyz, rpy); }

KinematicChain::KinematicChain(std::string name, std::vector<JointSpec> joints,
                               std::vector<LinkSegment> segments,
                               RigidOffset ee_offset)
    : name_(std::move(name)),
      joints_(std::move(joints)),
      segments_(std::move(segments)),
      ee_offset_(std::move(ee_offset)) {
  require(joints_.size() >= 2, "chain needs at least two joints");
  require(segments_.size() == joints_.size(),
          "chain needs exactly one segment per link");
  for (size_t i = 0; i < joints_.size(); ++i) {
    const JointSpec& j = joints_[i];
    std::ostringstream id;
    id << "joint " << i << ": ";
    require(j.axis.allFinite() && std::abs(j.axis.norm() - 1.0) <= 1e-12,
            id.str() + "axis must have unit norm");
    require(j.origin_xyz.allFinite() && j.origin_rpy.allFinite(),
            id.str() + "origin must be finite");
    require(j.q_lower < j.q_upper, id.str() + "requires q_lower < q_upper");
    require(j.qd_lower < 0.0 && 0.0 < j.qd_upper,
            id.str() + "requires qd_lower < 0 < qd_upper");
    require(segments_[i].a.allFinite() && segments_[i].b.allFinite(),
            id.str() + "segment endpoints must be finite");
    origins_.push_back(j.origin());
  }
  require(ee_offset_.xyz.allFinite() && ee_offset_.rpy.allFinite(),
          "ee_offset must be finite");
  ee_transform_ = ee_offset_.transform();
  home = VecX::Zero(dof());
}

VecX KinematicChain::lower_limits() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].q_lower;
  return v;
}

VecX KinematicChain::upper_limits() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].q_upper;
  return v;
}

VecX KinematicChain::velocity_lower_limits() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].qd_lower;
  return v;
}

VecX KinematicChain::velocity_upper_limits() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints_[i].qd_upper;
  return v;
}

ForwardKinematics forward_kinematics(const KinematicChain& chain,
                                     const VecX& q) {
  if (q.size() != chain.dof()) {
    std::ostringstream msg;
    msg << "forward_kinematics: q has " << q.size() << " entries, chain has "
        << chain.dof() << " joints";
    throw InputError(msg.str());
  }
  if (!q.allFinite()) throw InputError("forward_kinematics: non-finite q");

  ForwardKinematics fk;
  fk.frames.reserve(chain.dof());
  Transform parent = Transform::Identity();
  for (int i = 0; i < chain.dof(); ++i) {
    Transform frame = parent * chain.joint_origin(i);
    frame.rotate(Eigen::AngleAxisd(q[i], chain.joint(i).axis));
    fk.frames.push_back(frame);
    parent = frame;
  }
  fk.ee = parent * chain.ee_transform();
  return fk;
}

ControlPoint ee_control_point(const KinematicChain& chain,
                              const ForwardKinematics& fk) {
  ControlPoint cp;
  cp.kind = ControlPoint::Kind::kStatic;
  cp.link_index = chain.dof() - 1;
  cp.local_point = chain.ee_offset().xyz;
  cp.world_point = fk.ee_position();
  return cp;
}

ControlPoint locate(const ControlPoint& cp, const ForwardKinematics& fk) {
  ControlPoint out = cp;
  out.world_point = fk.point(cp.link_index, cp.local_point);
  return out;
}

Mat3X point_jacobian(const KinematicChain& chain, const ForwardKinematics& fk,
                     const ControlPoint& cp) {
  if (cp.link_index < 0 || cp.link_index >= chain.dof()) {
    throw InputError("point_jacobian: control point link index out of range");
  }
  Mat3X jac = Mat3X::Zero(3, chain.dof());
  const Vec3 p = fk.point(cp.link_index, cp.local_point);
  for (int j = 0; j <= cp.link_index; ++j) {
    const Vec3 axis = fk.frames[j].linear() * chain.joint(j).axis;
    jac.col(j) = axis.cross(p - fk.frames[j].translation());
  }
  return jac;
}

Mat3X point_jacobian(const KinematicChain& chain, const VecX& q,
                     const ControlPoint& cp) {
  return point_jacobian(chain, forward_kinematics(chain, q), cp);
}

Mat3X ee_jacobian(const KinematicChain& chain, const ForwardKinematics& fk) {
  return point_jacobian(chain, fk, ee_control_point(chain, fk));
}

Mat3X ee_jacobian(const KinematicChain& chain, const VecX& q) {
  return ee_jacobian(chain, forward_kinematics(chain, q));
}

double manipulability_scalar(const MatX& jacobian) {
  if (jacobian.rows() > jacobian.cols()) return 0.0;
  const Eigen::JacobiSVD<MatX> svd(jacobian);
  return svd.singularValues().prod();
}

void symmetric_eigen3(const Mat3& a, Vec3* eigenvalues, Mat3* eigenvectors) {
  constexpr double kOffDiagonalTolerance = 1e-12;
  constexpr int kMaxSweeps = 64;

  Mat3 m = 0.5 * (a + a.transpose());
  Mat3 v = Mat3::Identity();
  const double scale = m.norm();
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    const double off = std::sqrt(m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) +
                                 m(1, 2) * m(1, 2));
    if (off <= kOffDiagonalTolerance * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (m(p, q) == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Mat3 rot = Mat3::Identity();
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = s;
        rot(q, p) = -s;
        m = rot.transpose() * m * rot;
        m(p, q) = m(q, p) = 0.0;
        v = v * rot;
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&m](int i, int j) { return m(i, i) > m(j, j); });
  for (int k = 0; k < 3; ++k) {
    (*eigenvalues)[k] = m(order[k], order[k]);
    Vec3 col = v.col(order[k]);
    // Sign convention: largest-magnitude component positive.
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col[imax] < 0.0) col = -col;
    eigenvectors->col(k) = col;
  }
}

ManipulabilityEllipsoid manipulability_ellipsoid(const Mat3X& jacobian) {
  if (!jacobian.allFinite()) {
    throw InputError("manipulability_ellipsoid: non-finite Jacobian");
  }
  ManipulabilityEllipsoid ell;
  const Mat3 jjt = jacobian * jacobian.transpose();
  symmetric_eigen3(jjt, &ell.eigenvalues, &ell.eigenvectors);
  ell.eigenvalues = ell.eigenvalues.cwiseMax(0.0);
  ell.w = manipulability_scalar(jacobian);
  ell.degenerate = ell.eigenvalues[0] <= 0.0 ||
                   ell.eigenvalues[2] <= 1e-12 * ell.eigenvalues[0];
  return ell;
}

Projection projection_metric(const Vec3& v, const ManipulabilityEllipsoid& ell) {
  const Vec3 v_min = ell.v_min();
  const double dot = v.dot(v_min);
  const double vmin_sq = v_min.squaredNorm();
  Projection p;
  if (vmin_sq > 0.0) p.raw = dot / vmin_sq;
  const double denom = v.norm() * std::sqrt(vmin_sq);
  if (denom > 0.0) p.normalized = std::min(1.0, std::abs(dot) / denom);
  return p;
}

}  // namespace oacbench
