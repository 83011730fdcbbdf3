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


import csv
import io

import numpy as np
import pytest

import oacbench


def test_panda_home_position():
    panda = oacbench.chain("panda7")
    assert panda.dof == 7
    np.testing.assert_allclose(oacbench.ee_position(panda, np.zeros(7)), [0.088, 0.0, 0.8226], atol=1e-12)


def test_planar_jacobian_and_manipulability():
    planar = oacbench.chain("planar2")
    j = oacbench.ee_jacobian(planar, np.zeros(2))
    np.testing.assert_allclose(j, [[0, 0], [2, 1], [0, 0]], atol=1e-12)
    j = oacbench.ee_jacobian(planar, np.array([0.4, 0.7]))
    assert oacbench.manipulability(j[:2]) == pytest.approx(abs(np.sin(0.7)), abs=1e-12)


def test_jacobian_matches_finite_differences():
    panda = oacbench.chain("panda7")
    q = np.array([0.1, -0.3, 0.2, -1.8, 0.1, 1.6, 0.5])
    j = oacbench.ee_jacobian(panda, q)
    h = 1e-6
    for i in range(7):
        dq = np.zeros(7)
        dq[i] = h
        col = (oacbench.ee_position(panda, q + dq) - oacbench.ee_position(panda, q - dq)) / (2 * h)
        np.testing.assert_allclose(j[:, i], col, atol=1e-8)


def test_solve_qp_box_and_row():
    res = oacbench.solve_qp(
        np.eye(2), np.array([-2.0, -2.0]), np.array([[1.0, 1.0]]), np.array([1.0]),
        np.full(2, -10.0), np.full(2, 10.0))
    assert res["status"] == "optimal"
    np.testing.assert_allclose(res["x"], [0.5, 0.5], atol=1e-9)


def test_solve_qp_infeasible():
    res = oacbench.solve_qp(
        np.eye(1), np.zeros(1), np.array([[1.0]]), np.array([-2.0]), np.array([-1.0]), np.array([1.0]))
    assert res["status"] == "infeasible"


def test_run_and_analyze():
    out = oacbench.run("srdo", "ding", duration=2.0)
    assert not out["aborted"]
    rows = list(csv.reader(io.StringIO(out["trace_csv"])))
    assert rows[0][:2] == ["t", "q0"]
    assert len(rows) == 202
    metrics = oacbench.analyze(out["trace_csv"])
    assert metrics["metrics_csv"].startswith("metric,channel,index,value\n")
    assert metrics["solver_failures"] == 0
    assert metrics["min_obstacle_distance"] > 0.0


def test_run_is_deterministic():
    a = oacbench.run("drdo", "escobedo", duration=1.0, params={"k": 0.2})
    b = oacbench.run("drdo", "escobedo", duration=1.0, params={"k": 0.2})
    assert a["trace_csv"] == b["trace_csv"]
    assert '"k": 0.2' in a["config"]


def test_errors():
    with pytest.raises(oacbench.ConfigError, match="baseline"):
        oacbench.run("srdo", "nope")
    with pytest.raises(oacbench.ConfigError):
        oacbench.run("srdo", "ding", params={"bogus": 1.0})
    with pytest.raises(oacbench.InputError):
        oacbench.ee_position(oacbench.chain("panda7"), np.zeros(3))
    with pytest.raises(oacbench.InputError, match="line"):
        oacbench.analyze("t,q0,solver_status\n0,1\n")


def test_registries():
    assert oacbench.scenario_ids() == ["srdo", "drdo"]
    assert set(oacbench.controller_ids()) == {"baseline", "flacco", "ding", "escobedo"}
    assert "rho" in oacbench.param_keys()
    assert '"srdo"' in oacbench.scenario_json("srdo")
