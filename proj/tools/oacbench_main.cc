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

// oacbench: run scenarios, analyze traces, list built-ins.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oacbench/config.h"
#include "oacbench/metrics.h"
#include "oacbench/scenario.h"

namespace fs = std::filesystem;
using namespace oacbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAborted = 2;

struct RunArgs {
  std::string scenario;
  std::string controller;
  std::string config;
  std::optional<double> dt;
  std::optional<double> duration;
  std::string out = "out";
  std::vector<std::string> sets;
  int jobs = 1;
};

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<SweepAxis> parse_sets(const std::vector<std::string>& sets) {
  std::vector<SweepAxis> axes;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects key=value, got '" + s + "'");
    }
    SweepAxis axis{s.substr(0, eq), {}};
    std::stringstream values(s.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) axis.values.push_back(v);
    if (axis.values.empty()) throw ConfigError("--set " + axis.key + " has no value");
    axes.push_back(axis);
  }
  return axes;
}

RunConfig resolve_base(const RunArgs& args) {
  RunConfig config;
  if (!args.scenario.empty()) config.scenario = resolve_scenario(args.scenario);
  std::string path = args.config;
  if (path.empty()) {
    if (const char* env = std::getenv("OACBENCH_CONFIG")) path = env;
  }
  if (!path.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (doc.is_object() && !args.scenario.empty()) doc.erase("scenario");
    config = apply_config(config, doc.dump());
  }
  if (!args.controller.empty()) config.sim.controller = parse_controller_id(args.controller);
  if (args.dt) config.sim.dt = *args.dt;
  if (args.duration) config.scenario.duration = *args.duration;
  return config;
}

struct Job {
  RunConfig config;
  fs::path dir;
};

int execute(const Job& job, std::mutex* log) {
  const Trace trace = run(job.config.scenario, job.config.sim);
  fs::create_directories(job.dir);
  {
    std::ofstream out(job.dir / "trace.csv");
    write_trace_csv(trace, out);
  }
  {
    std::ofstream out(job.dir / "run_meta.json");
    out << serialize_run_config(job.config);
  }
  std::lock_guard<std::mutex> lock(*log);
  if (trace.aborted) {
    std::cerr << "run aborted: "
              << trace.abort_reason << " (partial trace in " << job.dir.string() << ")\n";
    return kExitAborted;
  }
  std::cout << "wrote " << (job.dir / "trace.csv").string() << " ("
            << trace.records.size() << " rows)\n";
  return kExitOk;
}

int cmd_run(const RunArgs& args) {
  const RunConfig base = resolve_base(args);
  const std::vector<SweepAxis> axes = parse_sets(args.sets);

  std::vector<Job> jobs;
  jobs.push_back({base, fs::path(args.out)});
  bool sweep = false;
  for (const SweepAxis& axis : axes) {
    sweep = sweep || axis.values.size() > 1;
    std::vector<Job> next;
    for (const Job& j : jobs) {
      for (const std::string& v : axis.values) {
        Job k = j;
        set_param(&k.config.sim, axis.key, v);
        if (axis.values.size() > 1) k.dir /= axis.key + "=" + v;
        next.push_back(k);
      }
    }
    jobs = std::move(next);
  }
  for (const Job& j : jobs) {
    j.config.scenario.validate();
    j.config.sim.validate();
  }
  if (!sweep) jobs.front().dir = args.out;

  std::mutex log;
  std::atomic<size_t> next{0};
  std::atomic<int> worst{kExitOk};
  std::atomic<bool> failed{false};
  std::string failure;
  const auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const int code = execute(jobs[i], &log);
        if (code > worst) worst = code;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(log);
        failed = true;
        failure = e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(args.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failed) throw ConfigError(failure);
  return worst;
}

int cmd_analyze(const std::string& trace_path, std::string out_dir) {
  const TraceTable table = read_trace_file(trace_path);
  const MetricsReport rep = report(table);
  if (out_dir.empty()) out_dir = fs::path(trace_path).parent_path().string();
  if (out_dir.empty()) out_dir = ".";
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "metrics.csv");
    write_metrics_csv(rep, out);
  }
  {
    std::ofstream out(fs::path(out_dir) / "curves.csv");
    write_curves_csv(rep, out);
  }
  std::cout << "wrote " << (fs::path(out_dir) / "metrics.csv").string() << " and "
            << (fs::path(out_dir) / "curves.csv").string() << "\n";
  return kExitOk;
}

int cmd_list() {
  std::cout << "scenarios:\n"
            << "  srdo  static target (0.4, 0.0, 0.45); obstacle (0,-0.5,0.6) -> "
               "(0,0.1,0.6) at 0.15 m/s, sweeping past the robot body\n"
            << "  drdo  circle r=0.25 m about (0.5, 0, 0.25) at 0.3 m/s; obstacle "
               "(0.45,-0.5,0.45) -> (0.45,0.1,0.45) at 0.15 m/s, crossing the "
               "end-effector path\n"
            << "controllers:\n";
  const SimConfig defaults;
  for (const char* id : {"baseline", "flacco", "ding", "escobedo"}) {
    std::cout << "  " << id << "  " << params_json(defaults) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object-aware controller benchmark"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trace.csv");
  run_cmd->add_option("--scenario", run_args.scenario, "srdo, drdo, or a scenario file");
  run_cmd->add_option("--controller", run_args.controller,
                      "baseline, flacco, ding, or escobedo");
  run_cmd->add_option("--config", run_args.config, "JSON config file (default $OACBENCH_CONFIG)");
  run_cmd->add_option("--dt", run_args.dt, "Time step in seconds");
  run_cmd->add_option("--duration", run_args.duration, "Run length in seconds");
  run_cmd->add_option("--out", run_args.out, "Output directory");
  run_cmd->add_option("--set", run_args.sets,
                      "Parameter override key=value; key=a,b,c sweeps");
  run_cmd->add_option("--jobs", run_args.jobs, "Parallel sweep workers")
      ->check(CLI::PositiveNumber);

  std::string trace_path;
  std::string analyze_out;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Compute metrics.csv and curves.csv from a trace");
  analyze_cmd->add_option("trace", trace_path, "Trace CSV")->required();
  analyze_cmd->add_option("--out", analyze_out, "Output directory (default: trace dir)");

  CLI::App* list_cmd = app.add_subcommand("list", "List scenarios and controllers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (analyze_cmd->parsed()) return cmd_analyze(trace_path, analyze_out);
    if (list_cmd->parsed()) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
