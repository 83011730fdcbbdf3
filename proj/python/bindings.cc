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


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "oacbench/chain_io.h"
#include "oacbench/config.h"
#include "oacbench/kinchain.h"
#include "oacbench/metrics.h"
#include "oacbench/qp.h"
#include "oacbench/scenario.h"

namespace py = pybind11;
using namespace oacbench;

namespace {

py::dict solve_qp(const MatX& h, const VecX& f, const MatX& a, const VecX& b,
                  const VecX& lower, const VecX& upper) {
  QuadraticProgram qp{h, f, a, b, lower, upper};
  const QPSolution sol = solve(qp);
  py::dict out;
  out["x"] = sol.x;
  out["status"] = to_string(sol.status);
  out["iterations"] = sol.iterations;
  out["primal_residual"] = sol.primal_residual;
  out["dual_residual"] = sol.dual_residual;
  out["active_count"] = sol.active_count;
  return out;
}

py::dict run_benchmark(const std::string& scenario, const std::string& controller,
                       const py::dict& params, std::optional<double> dt,
                       std::optional<double> duration,
                       std::optional<std::string> config_path) {
  RunConfig config;
  if (config_path) config = load_config(config, *config_path);
  if (!scenario.empty()) config.scenario = resolve_scenario(scenario);
  if (!controller.empty()) config.sim.controller = parse_controller_id(controller);
  if (dt) config.sim.dt = *dt;
  if (duration) config.scenario.duration = *duration;
  for (const auto& [key, value] : params) {
    const std::string name = py::str(key);
    if (py::isinstance<py::str>(value)) {
      set_param(&config.sim, name, value.cast<std::string>());
    } else {
      set_param(&config.sim, name, value.cast<double>());
    }
  }
  config.scenario.validate();
  config.sim.validate();

  Trace trace;
  {
    py::gil_scoped_release release;
    trace = run(config.scenario, config.sim);
  }
  std::ostringstream csv;
  write_trace_csv(trace, csv);
  py::dict out;
  out["trace_csv"] = csv.str();
  out["aborted"] = trace.aborted;
  out["abort_reason"] = trace.abort_reason;
  out["config"] = serialize_run_config(config);
  return out;
}

py::dict analyze(const std::string& trace_csv) {
  std::istringstream in(trace_csv);
  const MetricsReport rep = report(read_trace_csv(in));
  std::ostringstream metrics, curves;
  write_metrics_csv(rep, metrics);
  write_curves_csv(rep, curves);
  py::dict out;
  out["metrics_csv"] = metrics.str();
  out["curves_csv"] = curves.str();
  out["min_obstacle_distance"] = rep.min_obstacle_distance;
  out["solver_failures"] = rep.solver_failures;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Obstacle-avoidance controller benchmark";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<KinematicChain>(m, "Chain")
      .def_property_readonly("name", &KinematicChain::name)
      .def_property_readonly("dof", &KinematicChain::dof)
      .def_property_readonly("lower_limits", &KinematicChain::lower_limits)
      .def_property_readonly("upper_limits", &KinematicChain::upper_limits)
      .def("to_json", [](const KinematicChain& c) { return serialize_chain(c); })
      .def("__repr__", [](const KinematicChain& c) {
        return "<Chain " + c.name() + " dof=" + std::to_string(c.dof()) + ">";
      });

  m.def("chain", &resolve_chain, py::arg("id_or_path"),
        "Built-in chain id or path to a chain JSON file.");
  m.def("chain_ids", &builtin_chain_ids);
  m.def("scenario_ids", &scenario_ids);
  m.def("controller_ids", &controller_ids);
  m.def("param_keys", &param_keys);
  m.def("scenario_json",
        [](const std::string& id) { return serialize_scenario(resolve_scenario(id)); },
        py::arg("id_or_path"));

  m.def("ee_position",
        [](const KinematicChain& c, const VecX& q) {
          return Vec3(forward_kinematics(c, q).ee_position());
        },
        py::arg("chain"), py::arg("q"));
  m.def("ee_jacobian",
        [](const KinematicChain& c, const VecX& q) { return MatX(ee_jacobian(c, q)); },
        py::arg("chain"), py::arg("q"));
  m.def("point_jacobian",
        [](const KinematicChain& c, const VecX& q, int link, const Vec3& local) {
          ControlPoint cp;
          cp.link_index = link;
          cp.local_point = local;
          return MatX(point_jacobian(c, q, cp));
        },
        py::arg("chain"), py::arg("q"), py::arg("link"), py::arg("local_point"));
  m.def("manipulability", [](const MatX& j) { return manipulability_scalar(j); },
        py::arg("jacobian"));

  m.def("solve_qp", &solve_qp, py::arg("H"), py::arg("f"), py::arg("A"), py::arg("b"),
        py::arg("lower"), py::arg("upper"),
        "min 0.5 x'Hx + f'x  s.t.  A x <= b, lower <= x <= upper");

  m.def("run", &run_benchmark, py::arg("scenario") = "", py::arg("controller") = "",
        py::arg("params") = py::dict(), py::arg("dt") = py::none(),
        py::arg("duration") = py::none(), py::arg("config") = py::none());
  m.def("analyze", &analyze, py::arg("trace_csv"));
}
