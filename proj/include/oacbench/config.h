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

#ifndef OACBENCH_CONFIG_H_
#define OACBENCH_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "oacbench/scenario.h"

namespace oacbench {

// Everything needed to reproduce one simulation run.
struct RunConfig {
  Scenario scenario = make_srdo();
  SimConfig sim;
};

// Scalar parameter keys accepted by set_param, in a stable order.
std::vector<std::string> param_keys();

// Sets one scalar parameter (ControllerParams field or "kp"). Throws
// ConfigError for unknown keys or non-numeric values.
void set_param(SimConfig* config, const std::string& key, double value);
void set_param(SimConfig* config, const std::string& key, const std::string& value);
double get_param(const SimConfig& config, const std::string& key);

// Config documents are JSON objects with the optional keys
//
//   "scenario":   built-in id, scenario file path, or inline scenario object
//   "controller": baseline | flacco | ding | escobedo
//   "dt", "duration": numbers
//   "params":     {key: number, ..., "static_control_points": [{"link", "point"}]}
//
// Keys present in the document override `base`.
RunConfig apply_config(const RunConfig& base, const std::string& json_text);
RunConfig load_config(const RunConfig& base, const std::string& path);

// Fully resolved echo: scenario inline, every parameter spelled out.
// apply_config(RunConfig{}, serialize_run_config(c)) reproduces c.
std::string serialize_run_config(const RunConfig& config);

// Default parameters as a JSON object, for listings.
std::string params_json(const SimConfig& config);

}  // namespace oacbench

#endif  // OACBENCH_CONFIG_H_
