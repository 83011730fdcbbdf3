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

#include "oacbench/scenario.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace oacbench {
namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(OACBENCH_FIXTURE_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Scenarios, SrdoFixture) {
  EXPECT_EQ(serialize_scenario(make_srdo()), fixture("srdo.json"));
}

TEST(Scenarios, DrdoFixture) {
  EXPECT_EQ(serialize_scenario(make_drdo()), fixture("drdo.json"));
}

TEST(Scenarios, SrdoValues) {
  const Scenario s = make_srdo();
  EXPECT_EQ(std::get<StaticTarget>(s.reference).position, Vec3(0.4, 0.0, 0.45));
  ASSERT_EQ(s.obstacles.size(), 1u);
  EXPECT_EQ(s.obstacles[0].speed, 0.15);
  EXPECT_EQ(s.obstacles[0].waypoints.front().position, Vec3(0.0, -0.5, 0.6));
  EXPECT_EQ(s.obstacles[0].waypoints.back().position, Vec3(0.0, 0.1, 0.6));
}

TEST(Scenarios, DrdoValues) {
  const Scenario s = make_drdo();
  const auto& c = std::get<CircleReference>(s.reference);
  EXPECT_EQ(c.center, Vec3(0.5, 0.0, 0.25));
  EXPECT_EQ(c.radius, 0.25);
  EXPECT_NEAR(c.angular_speed, 1.2, 1e-15);
  EXPECT_NEAR(c.radius * c.angular_speed, 0.3, 1e-15);
  EXPECT_EQ(s.obstacles[0].speed, 0.15);
  EXPECT_EQ(s.obstacles[0].waypoints.front().position, Vec3(0.45, -0.5, 0.45));
  EXPECT_EQ(s.obstacles[0].waypoints.back().position, Vec3(0.45, 0.1, 0.45));
}

TEST(Scenarios, CircleIsCounterClockwise) {
  const Scenario s = make_drdo();
  const ReferenceSample a = reference_at(s, 0.0);
  const Vec3 center = std::get<CircleReference>(s.reference).center;
  EXPECT_GT((a.position - center).cross(a.velocity).z(), 0.0);
  for (double t : {0.0, 1.3, 4.7}) {
    const ReferenceSample r = reference_at(s, t);
    EXPECT_NEAR((r.position - center).norm(), 0.25, 1e-15);
    EXPECT_NEAR(r.velocity.norm(), 0.3, 1e-15);
  }
}

TEST(Scenarios, RoundTrip) {
  for (const Scenario& s : {make_srdo(), make_drdo()}) {
    EXPECT_EQ(serialize_scenario(parse_scenario(serialize_scenario(s))), serialize_scenario(s));
  }
  EXPECT_EQ(serialize_scenario(resolve_scenario(std::string(OACBENCH_FIXTURE_DIR) + "/drdo.json")),
            fixture("drdo.json"));
}

TEST(Scenarios, Errors) {
  EXPECT_THROW(resolve_scenario("nowhere"), ConfigError);
  EXPECT_THROW(parse_scenario("[1, 2"), ConfigError);
  EXPECT_THROW(parse_scenario(R"({"reference": {"type": "spiral"}})"), ConfigError);
  EXPECT_THROW(parse_scenario(R"({"duration": -1, "reference": {"type": "static", "target": [0,0,0]}})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"reference": {"type": "circle", "center": [0,0,0], "radius": 0,
                                                "angular_speed": 1}})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"reference": {"type": "static", "target": [0,0,0]},
                                  "obstacles": [{"speed": 1.0, "waypoints": [[0,0,0,0],[1,0.5,0,0]]}]})"),
               ConfigError);
}

TEST(TaskVelocity, Law) {
  const Scenario s = make_srdo();
  const Vec3 target(0.4, 0.0, 0.45);
  EXPECT_TRUE(task_velocity(s, 0.0, target, 2.0, 0.3).isZero());
  EXPECT_LT((task_velocity(s, 0.0, target - Vec3(0.1, 0, 0), 2.0, 0.3) - Vec3(0.2, 0, 0)).norm(),
            1e-15);
  EXPECT_DOUBLE_EQ(task_velocity(s, 0.0, target - Vec3(1.0, 2.0, 0), 2.0, 0.3).norm(), 0.3);
}

TEST(SimConfig, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.dt = 0.06;
  EXPECT_THROW(c.validate(), ConfigError);
  c.dt = 0.001;
  EXPECT_NO_THROW(c.validate());
}

}  // namespace
}  // namespace oacbench
