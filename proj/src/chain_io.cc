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

#include "oacbench/chain_io.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oacbench/builtin_chains.h"

namespace oacbench {

namespace {

using nlohmann::json;

Vec3 read_vec3(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw ConfigError(std::string("key '") + key + "' must hold 3 numbers");
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

std::pair<double, double> read_pair(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(std::string("key '") + key + "' must hold 2 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

KinematicChain parse_chain(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("chain description is not valid JSON: ") +
                      e.what());
  }
  try {
    std::vector<JointSpec> joints;
    std::vector<LinkSegment> segments;
    if (!doc.contains("joints") || !doc["joints"].is_array()) {
      throw ConfigError("chain description needs a 'joints' array");
    }
    for (const json& jj : doc["joints"]) {
      JointSpec spec;
      spec.axis = read_vec3(jj, "axis");
      spec.origin_xyz = read_vec3(jj, "origin_xyz");
      spec.origin_rpy = read_vec3(jj, "origin_rpy");
      std::tie(spec.q_lower, spec.q_upper) = read_pair(jj, "q_limits");
      std::tie(spec.qd_lower, spec.qd_upper) = read_pair(jj, "qd_limits");
      joints.push_back(spec);

      if (!jj.contains("segment") || jj["segment"].size() != 6) {
        throw ConfigError("each joint needs a 6-number 'segment'");
      }
      const json& s = jj["segment"];
      segments.push_back(
          {Vec3(s[0].get<double>(), s[1].get<double>(), s[2].get<double>()),
           Vec3(s[3].get<double>(), s[4].get<double>(), s[5].get<double>())});
    }
    if (!doc.contains("ee_offset")) throw ConfigError("missing key 'ee_offset'");
    RigidOffset ee{read_vec3(doc["ee_offset"], "xyz"),
                   read_vec3(doc["ee_offset"], "rpy")};

    KinematicChain chain(doc.value("name", std::string("chain")),
                         std::move(joints), std::move(segments), ee);

    if (doc.contains("home")) {
      const auto home = doc["home"].get<std::vector<double>>();
      if (static_cast<int>(home.size()) != chain.dof()) {
        throw ConfigError("'home' must have one entry per joint");
      }
      chain.home = Eigen::Map<const VecX>(home.data(), chain.dof());
    } else {
      chain.home = VecX::Zero(chain.dof());
    }
    if (doc.contains("control_points")) {
      for (const json& c : doc["control_points"]) {
        ControlPoint cp;
        cp.link_index = c.at("link").get<int>();
        cp.local_point = read_vec3(c, "point");
        if (cp.link_index < 0 || cp.link_index >= chain.dof()) {
          throw ConfigError("control point link index out of range");
        }
        chain.default_static_points.push_back(cp);
      }
    }
    return chain;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed chain description: ") + e.what());
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid chain: ") + e.what());
  }
}

KinematicChain load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open chain file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_chain(buf.str());
}

std::string serialize_chain(const KinematicChain& chain) {
  json doc;
  doc["name"] = chain.name();
  json joints = json::array();
  for (int i = 0; i < chain.dof(); ++i) {
    const JointSpec& j = chain.joint(i);
    const LinkSegment& s = chain.segments()[i];
    joints.push_back({{"axis", vec_json(j.axis)},
                      {"origin_xyz", vec_json(j.origin_xyz)},
                      {"origin_rpy", vec_json(j.origin_rpy)},
                      {"q_limits", {j.q_lower, j.q_upper}},
                      {"qd_limits", {j.qd_lower, j.qd_upper}},
                      {"segment", {s.a.x(), s.a.y(), s.a.z(), s.b.x(), s.b.y(),
                                   s.b.z()}}});
  }
  doc["joints"] = joints;
  doc["ee_offset"] = {{"xyz", vec_json(chain.ee_offset().xyz)},
                      {"rpy", vec_json(chain.ee_offset().rpy)}};
  doc["home"] = std::vector<double>(chain.home.data(),
                                    chain.home.data() + chain.home.size());
  json cps = json::array();
  for (const ControlPoint& cp : chain.default_static_points) {
    cps.push_back({{"link", cp.link_index}, {"point", vec_json(cp.local_point)}});
  }
  doc["control_points"] = cps;
  return doc.dump(2) + "\n";
}

std::vector<std::string> builtin_chain_ids() { return {"panda7", "planar2"}; }

KinematicChain builtin_chain(const std::string& id) {
  if (id == "panda7") return parse_chain(kPanda7ChainJson);
  if (id == "planar2") return parse_chain(kPlanar2ChainJson);
  throw ConfigError("unknown chain id '" + id + "' (valid: panda7, planar2)");
}

KinematicChain resolve_chain(const std::string& id_or_path) {
  for (const auto& id : builtin_chain_ids()) {
    if (id == id_or_path) return builtin_chain(id);
  }
  return load_chain(id_or_path);
}

}  // namespace oacbench
