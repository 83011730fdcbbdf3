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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oacbench/chain_io.h"
#include "oracles.h"

namespace oacbench {
namespace {

KinematicChain planar() { return builtin_chain("planar2"); }

VecX vec(std::initializer_list<double> v) {
  VecX out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(ForwardKinematics, PlanarStretched) {
  const auto fk = forward_kinematics(planar(), vec({0.0, 0.0}));
  EXPECT_NEAR((fk.ee_position() - Vec3(2, 0, 0)).norm(), 0.0, 1e-15);
}

TEST(ForwardKinematics, PlanarRightAngle) {
  const auto fk = forward_kinematics(planar(), vec({0.0, M_PI / 2}));
  EXPECT_NEAR((fk.ee_position() - Vec3(1, 1, 0)).norm(), 0.0, 1e-15);
}

TEST(ForwardKinematics, PandaZeroPosture) {
  const KinematicChain panda = builtin_chain("panda7");
  const auto fk = forward_kinematics(panda, VecX::Zero(7));
  // Elbow and wrist frames checked by hand from the joint offsets.
  EXPECT_NEAR((fk.frames[3].translation() - Vec3(0.0825, 0.0, 0.649)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((fk.frames[5].translation() - Vec3(0.0, 0.0, 1.033)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((fk.ee_position() - Vec3(0.088, 0.0, 0.8226)).norm(), 0.0, 1e-12);
}

TEST(ForwardKinematics, RejectsWrongDimension) {
  EXPECT_THROW(forward_kinematics(planar(), VecX::Zero(3)), InputError);
  EXPECT_THROW(forward_kinematics(planar(), vec({0.0, NAN})), InputError);
}

TEST(ForwardKinematics, RotationsAreProper) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const KinematicChain chain = testing::random_chain(rng, 6);
    const VecX q = VecX::Random(6) * 2.5;
    const auto fk = forward_kinematics(chain, q);
    for (const Transform& t : fk.frames) {
      const Mat3 r = t.linear();
      EXPECT_LT((r.transpose() * r - Mat3::Identity()).norm(), 1e-10);
      EXPECT_NEAR(r.determinant(), 1.0, 1e-10);
    }
    EXPECT_LT((fk.ee.matrix() - (fk.frames.back() * chain.ee_transform()).matrix()).norm(),
              1e-15);
  }
}

TEST(PointJacobian, PlanarClosedForm) {
  const KinematicChain chain = planar();
  const VecX q = vec({0.0, M_PI / 2});
  const Mat3X j = ee_jacobian(chain, q);
  Mat3X expected(3, 2);
  expected << -1, -1, 1, 0, 0, 0;
  EXPECT_LT((j - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PointJacobian, DistalColumnsVanish) {
  const KinematicChain chain = planar();
  ControlPoint cp;
  cp.link_index = 0;
  cp.local_point = Vec3(0.5, 0, 0);
  const Mat3X j = point_jacobian(chain, vec({0.3, -0.7}), cp);
  EXPECT_EQ(j.col(1), Vec3::Zero());
  EXPECT_NE(j.col(0), Vec3::Zero());
}

TEST(PointJacobian, EeJacobianIsPointJacobianAtEe) {
  const KinematicChain chain = builtin_chain("panda7");
  const VecX q = chain.home;
  const auto fk = forward_kinematics(chain, q);
  EXPECT_EQ(ee_jacobian(chain, q), point_jacobian(chain, fk, ee_control_point(chain, fk)));
}

TEST(PointJacobian, StretchedPlanarIsRankOne) {
  const Mat3X j = ee_jacobian(planar(), vec({0.0, 0.0}));
  Eigen::JacobiSVD<MatX> svd(j);
  EXPECT_GT(svd.singularValues()[0], 0.5);
  EXPECT_LT(svd.singularValues()[1], 1e-15);
}

TEST(PointJacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const int dof = 2 + trial % 6;
    const KinematicChain chain = testing::random_chain(rng, dof);
    const VecX q = VecX::Random(dof) * 2.5;
    ControlPoint cp;
    cp.link_index = trial % dof;
    cp.local_point = Vec3(u(rng), u(rng), u(rng));
    const Mat3X analytic = point_jacobian(chain, q, cp);
    const Mat3X fd = testing::fd_point_jacobian(chain, q, cp);
    EXPECT_LT((analytic - fd).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
  }
}

TEST(Manipulability, PlanarMatchesSineLaw) {
  const KinematicChain chain = planar();
  for (double q2 : {M_PI / 2, 0.3, -1.2, 0.0}) {
    const MatX j = ee_jacobian(chain, vec({0.4, q2})).topRows(2);
    EXPECT_NEAR(manipulability_scalar(j), std::abs(std::sin(q2)), 1e-12);
  }
}

TEST(Manipulability, DiagonalProduct) {
  Mat3 j;
  j << 2, 0, 0, 0, 1, 0, 0, 0, 3;
  EXPECT_NEAR(manipulability_scalar(j), 6.0, 1e-12);
}

TEST(Manipulability, ProductOfSingularValues) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const MatX j = MatX::NullaryExpr(3, 7, [&] { return g(rng); });
    const VecX s = Eigen::JacobiSVD<MatX>(j).singularValues();
    const double w = manipulability_scalar(j);
    EXPECT_NEAR(w, s.prod(), 1e-9 * s.prod());
    const auto ell = manipulability_ellipsoid(j);
    EXPECT_NEAR(ell.w, std::sqrt(ell.eigenvalues.prod()), 1e-9 * ell.w);
  }
}

TEST(Ellipsoid, DiagonalDegenerate) {
  Mat3X j = Mat3X::Zero(3, 2);
  j(0, 0) = 2;
  j(1, 1) = 1;
  const auto ell = manipulability_ellipsoid(j);
  EXPECT_NEAR(ell.eigenvalues[0], 4.0, 1e-15);
  EXPECT_NEAR(ell.eigenvalues[1], 1.0, 1e-15);
  EXPECT_EQ(ell.eigenvalues[2], 0.0);
  EXPECT_NEAR(std::abs(ell.v_min().dot(Vec3::UnitZ())), 1.0, 1e-15);
  EXPECT_TRUE(ell.degenerate);
}

TEST(Ellipsoid, IsotropicSphere) {
  const auto ell = manipulability_ellipsoid(Mat3::Identity() * 0.5);
  EXPECT_NEAR(ell.eigenvalues[0], 0.25, 1e-15);
  EXPECT_NEAR(ell.eigenvalues[2], 0.25, 1e-15);
  EXPECT_LT((ell.eigenvectors.transpose() * ell.eigenvectors - Mat3::Identity()).norm(), 1e-12);
  EXPECT_FALSE(ell.degenerate);
}

TEST(Ellipsoid, ReconstructsRandomJjt) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    Mat3X j = Mat3X::NullaryExpr(3, 7, [&] { return g(rng); });
    const Mat3 jjt = j * j.transpose();
    const auto ell = manipulability_ellipsoid(j);
    Mat3 rebuilt = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
      rebuilt += ell.eigenvalues[i] * ell.eigenvectors.col(i) * ell.eigenvectors.col(i).transpose();
    }
    EXPECT_LE((jjt - rebuilt).norm(), 1e-9 * jjt.norm());
    EXPECT_LT((ell.eigenvectors.transpose() * ell.eigenvectors - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GE(ell.eigenvalues[0], ell.eigenvalues[1]);
    EXPECT_GE(ell.eigenvalues[1], ell.eigenvalues[2]);
    EXPECT_GE(ell.eigenvalues[2], 0.0);
  }
}

TEST(Ellipsoid, RejectsNonFinite) {
  Mat3 j = Mat3::Identity();
  j(1, 2) = NAN;
  EXPECT_THROW(manipulability_ellipsoid(j), InputError);
}

TEST(Projection, Anchors) {
  Mat3X j = Mat3X::Zero(3, 2);
  j(0, 0) = 2;
  j(1, 1) = 1;
  const auto ell = manipulability_ellipsoid(j);
  EXPECT_EQ(projection_metric(Vec3(0, 0, 0.3), ell).normalized, 1.0);
  EXPECT_EQ(projection_metric(Vec3(0.3, -0.2, 0), ell).normalized, 0.0);
  EXPECT_NEAR(projection_metric(Vec3(0, 1, 1), ell).normalized, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(projection_metric(Vec3::Zero(), ell).normalized, 0.0);
  EXPECT_NEAR(std::abs(projection_metric(Vec3(0, 0, 0.3), ell).raw), 0.3, 1e-15);
}

TEST(Projection, ScaleInvariant) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const auto ell = manipulability_ellipsoid(Mat3X::NullaryExpr(3, 7, [&] { return g(rng); }));
    const Vec3 v(g(rng), g(rng), g(rng));
    const double base = projection_metric(v, ell).normalized;
    for (double a : {1e-3, 1.0, 1e3}) {
      EXPECT_NEAR(projection_metric(a * v, ell).normalized, base, 1e-12);
    }
  }
}

TEST(KinematicChain, RejectsInvalidLimits) {
  JointSpec j;
  j.q_lower = 1.0;
  j.q_upper = -1.0;
  EXPECT_THROW(KinematicChain("bad", {j, JointSpec{}}, {LinkSegment{}, LinkSegment{}}, RigidOffset{}),
               InputError);
  JointSpec zero_axis;
  zero_axis.axis = Vec3::Zero();
  EXPECT_THROW(KinematicChain("bad", {JointSpec{}, zero_axis}, {LinkSegment{}, LinkSegment{}},
                             RigidOffset{}),
               InputError);
  EXPECT_THROW(KinematicChain("short", {JointSpec{}, JointSpec{}}, {LinkSegment{}}, RigidOffset{}),
               InputError);
}

}  // namespace
}  // namespace oacbench
