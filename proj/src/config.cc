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

#include "oacbench/config.h"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace oacbench {

namespace {

using nlohmann::json;

struct ParamField {
  const char* key;
  double ControllerParams::*member;
};

constexpr ParamField kFields[] = {
    {"v_max", &ControllerParams::v_max},
    {"rho", &ControllerParams::rho},
    {"alpha", &ControllerParams::alpha},
    {"d_crit", &ControllerParams::d_crit},
    {"d_repulse", &ControllerParams::d_repulse},
    {"d_notice", &ControllerParams::d_notice},
    {"d_max", &ControllerParams::d_max},
    {"k", &ControllerParams::k},
    {"mu_max", &ControllerParams::mu_max},
    {"w0", &ControllerParams::w0},
    {"nominal_speed", &ControllerParams::nominal_speed},
    {"kappa_mid", &ControllerParams::kappa_mid},
    {"surveillance_radius", &ControllerParams::surveillance_radius},
    {"decay_rate", &ControllerParams::decay_rate},
    {"repulsion_sign", &ControllerParams::repulsion_sign},
};

std::string valid_keys() {
  std::string out;
  for (const std::string& k : param_keys()) out += (out.empty() ? "" : ", ") + k;
  return out;
}

json params_object(const SimConfig& config) {
  json p = json::object();
  for (const std::string& key : param_keys()) p[key] = get_param(config, key);
  json points = json::array();
  for (const ControlPoint& cp : config.params.static_control_points) {
    points.push_back({{"link", cp.link_index},
                      {"point", {cp.local_point.x(), cp.local_point.y(), cp.local_point.z()}}});
  }
  p["static_control_points"] = points;
  return p;
}

}  // namespace

std::vector<std::string> param_keys() {
  std::vector<std::string> keys;
  for (const ParamField& f : kFields) keys.emplace_back(f.key);
  keys.emplace_back("kp");
  return keys;
}

void set_param(SimConfig* config, const std::string& key, double value) {
  if (key == "kp") {
    config->kp = value;
    return;
  }
  for (const ParamField& f : kFields) {
    if (key == f.key) {
      config->params.*f.member = value;
      return;
    }
  }
  throw ConfigError("unknown parameter '" + key + "' (valid: " + valid_keys() + ")");
}

void set_param(SimConfig* config, const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("parameter '" + key + "' needs a number, got '" + value + "'");
  }
  set_param(config, key, v);
}

double get_param(const SimConfig& config, const std::string& key) {
  if (key == "kp") return config.kp;
  for (const ParamField& f : kFields) {
    if (key == f.key) return config.params.*f.member;
  }
  throw ConfigError("unknown parameter '" + key + "' (valid: " + valid_keys() + ")");
}

RunConfig apply_config(const RunConfig& base, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig out = base;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "scenario") {
        out.scenario = value.is_object() ? parse_scenario(value.dump())
                                         : resolve_scenario(value.get<std::string>());
      } else if (key == "controller") {
        out.sim.controller = parse_controller_id(value.get<std::string>());
      } else if (key == "dt") {
        out.sim.dt = value.get<double>();
      } else if (key != "duration" && key != "params") {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
    if (doc.contains("duration")) out.scenario.duration = doc["duration"].get<double>();
    if (doc.contains("params")) {
      for (const auto& [key, value] : doc["params"].items()) {
        if (key == "static_control_points") {
          std::vector<ControlPoint> points;
          for (const json& p : value) {
            ControlPoint cp;
            cp.kind = ControlPoint::Kind::kStatic;
            cp.link_index = p.at("link").get<int>();
            const auto xyz = p.at("point").get<std::vector<double>>();
            if (xyz.size() != 3) throw ConfigError("control point needs 3 coordinates");
            cp.local_point = Vec3(xyz[0], xyz[1], xyz[2]);
            points.push_back(cp);
          }
          out.sim.params.static_control_points = std::move(points);
        } else {
          set_param(&out.sim, key, value.get<double>());
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return out;
}

RunConfig load_config(const RunConfig& base, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return apply_config(base, buf.str());
}

std::string serialize_run_config(const RunConfig& config) {
  json doc;
  doc["scenario"] = json::parse(serialize_scenario(config.scenario));
  doc["controller"] = to_string(config.sim.controller);
  doc["dt"] = config.sim.dt;
  doc["duration"] = config.scenario.duration;
  doc["params"] = params_object(config.sim);
  return doc.dump(2) + "\n";
}

std::string params_json(const SimConfig& config) {
  json p = params_object(config);
  p.erase("static_control_points");
  return p.dump();
}

}  // namespace oacbench
