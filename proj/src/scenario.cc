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

#include "json.hpp"

namespace oacbench {

namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string(what) + " must hold 3 numbers");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

void Scenario::validate() const {
  if (!(duration > 0.0)) throw ConfigError("scenario duration must be positive");
  if (const auto* c = std::get_if<CircleReference>(&reference)) {
    if (!(c->radius > 0.0)) throw ConfigError("circle radius must be positive");
  }
  for (const ObstacleScript& s : obstacles) validate_script(s);
}

Scenario make_srdo() {
  Scenario s;
  s.name = "srdo";
  s.reference = StaticTarget{Vec3(0.4, 0.0, 0.45)};
  ObstacleScript o;
  o.id = 0;
  o.speed = 0.15;
  o.waypoints = {{0.0, Vec3(0.0, -0.5, 0.6)}, {4.0, Vec3(0.0, 0.1, 0.6)}};
  s.obstacles = {o};
  s.duration = 10.0;
  s.chain = "panda7";
  return s;
}

Scenario make_drdo() {
  Scenario s;
  s.name = "drdo";
  CircleReference c;
  c.center = Vec3(0.5, 0.0, 0.25);
  c.radius = 0.25;
  c.angular_speed = 0.3 / 0.25;
  c.phase = -M_PI / 2.0;
  s.reference = c;
  ObstacleScript o;
  o.id = 0;
  o.speed = 0.15;
  o.waypoints = {{0.0, Vec3(0.45, -0.5, 0.45)}, {4.0, Vec3(0.45, 0.1, 0.45)}};
  s.obstacles = {o};
  s.duration = 10.0;
  s.chain = "panda7";
  VecX q0(7);
  q0 << -0.223637, 0.131581, -0.224554, -2.114525, -0.064295, 2.227048, 0.785;
  s.initial_q = q0;
  return s;
}

std::vector<std::string> scenario_ids() { return {"srdo", "drdo"}; }

Scenario resolve_scenario(const std::string& id_or_path) {
  if (id_or_path == "srdo") return make_srdo();
  if (id_or_path == "drdo") return make_drdo();
  std::ifstream in(id_or_path);
  if (!in) {
    throw ConfigError("unknown scenario '" + id_or_path +
                      "' (valid: srdo, drdo, or a scenario file path)");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["chain"] = s.chain;
  doc["duration"] = s.duration;
  if (const auto* t = std::get_if<StaticTarget>(&s.reference)) {
    doc["reference"] = {{"type", "static"}, {"target", vec_json(t->position)}};
  } else {
    const auto& c = std::get<CircleReference>(s.reference);
    doc["reference"] = {{"type", "circle"},
                        {"plane", "xy"},
                        {"center", vec_json(c.center)},
                        {"radius", c.radius},
                        {"angular_speed", c.angular_speed},
                        {"phase", c.phase}};
  }
  json obstacles = json::array();
  for (const ObstacleScript& o : s.obstacles) {
    json wps = json::array();
    for (const Waypoint& w : o.waypoints) {
      wps.push_back({w.t, w.position.x(), w.position.y(), w.position.z()});
    }
    json entry = {{"id", o.id}, {"speed", o.speed}, {"waypoints", wps}};
    if (o.vanish_at) entry["vanish_at"] = *o.vanish_at;
    obstacles.push_back(entry);
  }
  doc["obstacles"] = obstacles;
  if (s.initial_q) {
    doc["initial_q"] =
        std::vector<double>(s.initial_q->data(), s.initial_q->data() + s.initial_q->size());
  }
  return doc.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    Scenario s;
    s.name = doc.value("name", std::string("custom"));
    s.chain = doc.value("chain", std::string("panda7"));
    s.duration = doc.value("duration", 10.0);
    const json& ref = doc.at("reference");
    const std::string type = ref.at("type").get<std::string>();
    if (type == "static") {
      s.reference = StaticTarget{vec_from(ref.at("target"), "reference.target")};
    } else if (type == "circle") {
      if (ref.value("plane", std::string("xy")) != "xy") {
        throw ConfigError("only circles in the xy plane are supported");
      }
      CircleReference c;
      c.center = vec_from(ref.at("center"), "reference.center");
      c.radius = ref.at("radius").get<double>();
      c.angular_speed = ref.at("angular_speed").get<double>();
      c.phase = ref.value("phase", 0.0);
      s.reference = c;
    } else {
      throw ConfigError("reference.type must be 'static' or 'circle'");
    }
    if (doc.contains("obstacles")) {
      for (const json& o : doc["obstacles"]) {
        ObstacleScript script;
        script.id = o.value("id", static_cast<int>(s.obstacles.size()));
        script.speed = o.at("speed").get<double>();
        for (const json& w : o.at("waypoints")) {
          if (!w.is_array() || w.size() != 4) {
            throw ConfigError("each waypoint must be [t, x, y, z]");
          }
          script.waypoints.push_back(
              {w[0].get<double>(),
               Vec3(w[1].get<double>(), w[2].get<double>(), w[3].get<double>())});
        }
        if (o.contains("vanish_at")) script.vanish_at = o["vanish_at"].get<double>();
        s.obstacles.push_back(script);
      }
    }
    if (doc.contains("initial_q")) {
      const auto q = doc["initial_q"].get<std::vector<double>>();
      s.initial_q = Eigen::Map<const VecX>(q.data(), static_cast<Eigen::Index>(q.size()));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

ReferenceSample reference_at(const Scenario& scenario, double t) {
  if (const auto* target = std::get_if<StaticTarget>(&scenario.reference)) {
    return {target->position, Vec3::Zero()};
  }
  const auto& c = std::get<CircleReference>(scenario.reference);
  const double angle = c.angular_speed * t + c.phase;
  ReferenceSample s;
  s.position = c.center + c.radius * Vec3(std::cos(angle), std::sin(angle), 0.0);
  s.velocity =
      c.radius * c.angular_speed * Vec3(-std::sin(angle), std::cos(angle), 0.0);
  return s;
}

Vec3 task_velocity(const Scenario& scenario, double t, const Vec3& ee_pos,
                   double kp, double nominal_speed) {
  const ReferenceSample ref = reference_at(scenario, t);
  Vec3 v = kp * (ref.position - ee_pos) + ref.velocity;
  if (!v.allFinite()) throw InputError("task velocity is not finite");
  const double norm = v.norm();
  if (norm > nominal_speed) v *= nominal_speed / norm;
  return v;
}

void SimConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.05)) throw ConfigError("dt must lie in (0, 0.05] s");
  if (!(kp >= 0.0 && std::isfinite(kp))) throw ConfigError("kp must be finite and non-negative");
  try {
    params.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace oacbench
