# Copyright 2026 The oacbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Obstacle-avoidance controller benchmark."""

from oacbench._core import (
    Chain,
    ConfigError,
    InputError,
    analyze,
    chain,
    chain_ids,
    controller_ids,
    ee_jacobian,
    ee_position,
    manipulability,
    param_keys,
    point_jacobian,
    run,
    scenario_ids,
    scenario_json,
    solve_qp,
)

__all__ = [
    "Chain",
    "ConfigError",
    "InputError",
    "analyze",
    "chain",
    "chain_ids",
    "controller_ids",
    "ee_jacobian",
    "ee_position",
    "manipulability",
    "param_keys",
    "point_jacobian",
    "run",
    "scenario_ids",
    "scenario_json",
    "solve_qp",
]
