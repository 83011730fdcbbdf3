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

#ifndef OACBENCH_KINCHAIN_H_
#define OACBENCH_KINCHAIN_H_

#include <string>
#include <vector>

#include "oacbench/common.h"

namespace oacbench {

// A revolute joint. The joint frame is reached from the parent frame by the
// fixed `origin` transform followed by a rotation of q about `axis`.
struct JointSpec {
  Vec3 axis = Vec3::UnitZ();
  Vec3 origin_xyz = Vec3::Zero();
  Vec3 origin_rpy = Vec3::Zero();
  double q_lower = -M_PI;
  double q_upper = M_PI;
  double qd_lower = -1.0;
  double qd_upper = 1.0;

  Transform origin() const;
};

// Line segment in a link frame approximating the link's geometry.
struct LinkSegment {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

struct RigidOffset {
  Vec3 xyz = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();

  Transform transform() const;
};

// Control point attached to a link. Static points are placed by the
// controller designer; dynamic points are recomputed every tick as the
// closest point on the body to an obstacle.
struct ControlPoint {
  enum class Kind { kStatic, kDynamic };

  Kind kind = Kind::kStatic;
  int link_index = 0;
  Vec3 local_point = Vec3::Zero();
  Vec3 world_point = Vec3::Zero();
  // Barycentric coordinate along the link segment, dynamic points only.
  double segment_param = 0.0;
};

class KinematicChain {
 public:
  KinematicChain() = default;
  // Validates the joint and segment invariants; throws InputError.
  KinematicChain(std::string name, std::vector<JointSpec> joints,
                 std::vector<LinkSegment> segments, RigidOffset ee_offset);

  const std::string& name() const { return name_; }
  int dof() const { return static_cast<int>(joints_.size()); }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const JointSpec& joint(int i) const { return joints_.at(i); }
  const std::vector<LinkSegment>& segments() const { return segments_; }
  const RigidOffset& ee_offset() const { return ee_offset_; }

  VecX lower_limits() const;
  VecX upper_limits() const;
  VecX velocity_lower_limits() const;
  VecX velocity_upper_limits() const;

  // Optional chain-specific data carried by the description file.
  VecX home;
  std::vector<ControlPoint> default_static_points;

 private:
  std::string name_;
  std::vector<JointSpec> joints_;
  std::vector<LinkSegment> segments_;
  RigidOffset ee_offset_;
  std::vector<Transform> origins_;
  Transform ee_transform_ = Transform::Identity();

 public:
  const Transform& joint_origin(int i) const { return origins_[i]; }
  const Transform& ee_transform() const { return ee_transform_; }
};

struct JointState {
  VecX q;
  VecX qd;
};

struct ForwardKinematics {
  // World transform of every joint frame, after the joint rotation.
  std::vector<Transform> frames;
  Transform ee;

  Vec3 ee_position() const { return ee.translation(); }
  // World position of a point given in link `link` coordinates.
  Vec3 point(int link, const Vec3& local) const { return frames[link] * local; }
};

ForwardKinematics forward_kinematics(const KinematicChain& chain,
                                     const VecX& q);

// The control point sitting at the end-effector, with world point filled in.
ControlPoint ee_control_point(const KinematicChain& chain,
                              const ForwardKinematics& fk);

// Fills cp.world_point from the forward kinematics.
ControlPoint locate(const ControlPoint& cp, const ForwardKinematics& fk);

// Translational 3xn Jacobian of the control point. Columns of joints distal
// to cp.link_index are zero.
Mat3X point_jacobian(const KinematicChain& chain, const ForwardKinematics& fk,
                     const ControlPoint& cp);
Mat3X point_jacobian(const KinematicChain& chain, const VecX& q,
                     const ControlPoint& cp);

Mat3X ee_jacobian(const KinematicChain& chain, const VecX& q);
Mat3X ee_jacobian(const KinematicChain& chain, const ForwardKinematics& fk);

// sqrt(det(J J^T)); zero for rank-deficient J.
double manipulability_scalar(const MatX& jacobian);

struct ManipulabilityEllipsoid {
  // Eigenvalues of J J^T in descending order, clipped at zero.
  Vec3 eigenvalues = Vec3::Zero();
  // Column i is the unit eigenvector of eigenvalues(i).
  Mat3 eigenvectors = Mat3::Identity();
  double w = 0.0;
  bool degenerate = false;

  Vec3 v_min() const { return eigenvectors.col(2); }
  Vec3 axis_lengths() const { return eigenvalues.cwiseSqrt(); }
};

ManipulabilityEllipsoid manipulability_ellipsoid(const Mat3X& jacobian);

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
// Returns eigenvalues descending; eigenvectors as columns.
void symmetric_eigen3(const Mat3& a, Vec3* eigenvalues, Mat3* eigenvectors);

struct Projection {
  double raw = 0.0;         // (V . v_min) / |v_min|^2
  double normalized = 0.0;  // |V . v_min| / (|V| |v_min|), in [0, 1]
};

// Alignment of a repulsive vector with the direction of least manipulability.
Projection projection_metric(const Vec3& v, const ManipulabilityEllipsoid& ell);

Mat3 rpy_to_matrix(const Vec3& rpy);

}  // namespace oacbench

#endif  // OACBENCH_KINCHAIN_H_
