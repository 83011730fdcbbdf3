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

#include "oacbench/metrics.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>

namespace oacbench {

double SignalSeries::spacing() const {
  if (static_cast<int>(t.size()) != length()) {
    throw InputError("signal: time grid and samples differ in length");
  }
  if (t.size() < 2) throw InputError("signal: need at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) throw InputError("signal: time grid must increase");
  for (size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-12 * std::max(1.0, std::abs(t[i])) + 1e-9 * dt) {
      throw InputError("signal: time grid is not uniform");
    }
  }
  return dt;
}

VecX savgol_weights(int window, int polyorder, int eval) {
  const double center = 0.5 * (window - 1);
  const double scale = std::max(1.0, center);
  MatX vander(window, polyorder + 1);
  for (int i = 0; i < window; ++i) {
    const double x = (i - center) / scale;
    double p = 1.0;
    for (int k = 0; k <= polyorder; ++k) {
      vander(i, k) = p;
      p *= x;
    }
  }
  VecX basis(polyorder + 1);
  const double xe = (eval - center) / scale;
  double p = 1.0;
  for (int k = 0; k <= polyorder; ++k) {
    basis[k] = p;
    p *= xe;
  }
  const MatX gram = vander.transpose() * vander;
  return vander * gram.ldlt().solve(basis);
}

SignalSeries savgol(const SignalSeries& series, int window, int polyorder) {
  const int n = series.length();
  if (window < 1 || window % 2 == 0) throw InputError("savgol: window must be odd");
  if (polyorder < 0 || polyorder >= window) {
    throw InputError("savgol: polyorder must lie in [0, window)");
  }
  if (window > n) throw InputError("savgol: window longer than the series");

  const int half = window / 2;
  const VecX centered = savgol_weights(window, polyorder, half);
  SignalSeries out;
  out.t = series.t;
  out.values.resize(n, series.channels());
  for (int i = 0; i < n; ++i) {
    int start;
    VecX weights;
    if (i < half) {
      start = 0;
      weights = savgol_weights(window, polyorder, i);
    } else if (i >= n - half) {
      start = n - window;
      weights = savgol_weights(window, polyorder, i - start);
    } else {
      start = i - half;
      weights = centered;
    }
    out.values.row(i) =
        weights.transpose() * series.values.middleRows(start, window);
  }
  return out;
}

SignalSeries central_gradient(const SignalSeries& series, double dt) {
  const int n = series.length();
  if (n < 3) throw InputError("central_gradient: need at least three samples");
  if (!(dt > 0.0)) throw InputError("central_gradient: dt must be positive");
  const MatX& x = series.values;
  SignalSeries out;
  out.t = series.t;
  out.values.resize(n, series.channels());
  for (int i = 1; i < n - 1; ++i) {
    out.values.row(i) = (x.row(i + 1) - x.row(i - 1)) / (2.0 * dt);
  }
  out.values.row(0) = (-3.0 * x.row(0) + 4.0 * x.row(1) - x.row(2)) / (2.0 * dt);
  out.values.row(n - 1) =
      (3.0 * x.row(n - 1) - 4.0 * x.row(n - 2) + x.row(n - 3)) / (2.0 * dt);
  return out;
}

MatX bucket_maxima(const SignalSeries& series, std::vector<int>* bucket_start) {
  if (series.length() == 0) return MatX(0, series.channels());
  const auto bucket_of = [](double t) {
    return static_cast<int>(std::floor(t + 1e-9));
  };
  const int first = bucket_of(series.t.front());
  const int last = bucket_of(series.t.back());
  MatX out = MatX::Zero(last - first + 1, series.channels());
  for (int i = 0; i < series.length(); ++i) {
    const int b = bucket_of(series.t[i]) - first;
    out.row(b) = out.row(b).cwiseMax(series.values.row(i).cwiseAbs());
  }
  if (bucket_start) {
    bucket_start->clear();
    for (int b = first; b <= last; ++b) bucket_start->push_back(b);
  }
  return out;
}

JerkProfile jerk_profile(const SignalSeries& velocity, double dt,
                         const SavgolParams& sg) {
  JerkProfile p;
  const SignalSeries smooth = savgol(velocity, sg.window, sg.polyorder);
  p.jerk = central_gradient(central_gradient(smooth, dt), dt);
  p.bucket_max = bucket_maxima(p.jerk, &p.bucket_start);
  return p;
}

const std::vector<double>& TraceTable::column(const std::string& name) const {
  auto it = columns.find(name);
  if (it == columns.end()) throw InputError("trace: missing column '" + name + "'");
  return it->second;
}

int TraceTable::count_prefixed(const std::string& prefix,
                               const std::string& suffix) const {
  int n = 0;
  while (has(prefix + std::to_string(n) + suffix)) ++n;
  return n;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double* v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  *v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

}  // namespace

TraceTable read_trace_csv(std::istream& in) {
  TraceTable table;
  std::string line;
  if (!std::getline(in, line)) throw InputError("trace: line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  int status_col = -1;
  for (size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == "solver_status") {
      status_col = static_cast<int>(c);
    } else {
      table.columns[table.header[c]];
    }
  }
  if (status_col < 0 || table.header.empty() || table.header[0] != "t") {
    throw InputError("trace: line 1: header must start with 't' and contain 'solver_status'");
  }

  std::vector<std::vector<double>*> slots;
  for (const std::string& name : table.header) {
    slots.push_back(name == "solver_status" ? nullptr : &table.columns[name]);
  }
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    std::ostringstream where;
    where << "trace: line " << line_no << ": ";
    if (fields.size() != table.header.size()) {
      throw InputError(where.str() + "expected " + std::to_string(table.header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == status_col) {
        const std::string& s = fields[c];
        if (s != "optimal" && s != "infeasible" && s != "max_iterations") {
          throw InputError(where.str() + "unknown solver status '" + s + "'");
        }
        table.solver_status.push_back(s);
        continue;
      }
      double v;
      if (!parse_double(fields[c], &v)) {
        throw InputError(where.str() + "column '" + table.header[c] +
                         "' is not a number: '" + fields[c] + "'");
      }
      slots[c]->push_back(v);
    }
  }
  return table;
}

TraceTable read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace '" + path + "'");
  return read_trace_csv(in);
}

std::vector<ForceDistanceCurve> force_distance_curves(const TraceTable& trace) {
  std::vector<ForceDistanceCurve> curves;
  const int n = trace.count_prefixed("cp", "_dmin");
  if (n == 0) throw InputError("trace: missing column 'cp0_dmin'");
  for (int i = 0; i < n; ++i) {
    const std::string p = "cp" + std::to_string(i);
    curves.push_back({trace.column("t"), trace.column(p + "_dmin"),
                      trace.column(p + "_repulse_mag")});
  }
  return curves;
}

MetricsReport report(const TraceTable& trace, const SavgolParams& sg) {
  MetricsReport r;
  const size_t rows = trace.rows();
  if (rows < 3) throw InputError("trace: need at least three records");
  const int dof = trace.count_prefixed("qd", "");
  if (dof == 0) throw InputError("trace: missing column 'qd0'");

  SignalSeries velocity;
  velocity.t = trace.column("t");
  velocity.values.resize(static_cast<Eigen::Index>(rows), dof);
  for (int c = 0; c < dof; ++c) {
    const auto& col = trace.column("qd" + std::to_string(c));
    for (size_t i = 0; i < rows; ++i) velocity.values(static_cast<Eigen::Index>(i), c) = col[i];
  }
  const double dt = velocity.spacing();
  SavgolParams effective = sg;
  const int longest = static_cast<int>(rows % 2 == 1 ? rows : rows - 1);
  if (effective.window > longest) effective.window = longest;
  if (effective.polyorder >= effective.window) effective.polyorder = effective.window - 1;
  r.jerk = jerk_profile(velocity, dt, effective);

  r.curves = force_distance_curves(trace);
  r.min_obstacle_distance = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < r.curves.size(); ++i) {
    const std::string p = "cp" + std::to_string(i);
    const auto& w = trace.column(p + "_w");
    ManipulabilityStats stats;
    stats.min = *std::min_element(w.begin(), w.end());
    double sum = 0.0;
    for (double v : w) sum += v;
    stats.mean = sum / static_cast<double>(w.size());
    r.manipulability.push_back(stats);

    std::vector<int> hist(10, 0);
    const auto& proj = trace.column(p + "_proj_norm");
    const auto& mag = trace.column(p + "_repulse_mag");
    for (size_t k = 0; k < rows; ++k) {
      if (mag[k] > 0.0) {
        ++hist[std::clamp(static_cast<int>(std::floor(proj[k] * 10.0)), 0, 9)];
      }
    }
    r.projection_histogram.push_back(hist);

    for (double d : r.curves[i].d_min) {
      if (std::isfinite(d)) r.min_obstacle_distance = std::min(r.min_obstacle_distance, d);
    }
  }
  for (const std::string& s : trace.solver_status) {
    if (s != "optimal") ++r.solver_failures;
  }
  return r;
}

namespace {

void row(std::ostream& out, const std::string& metric, const std::string& channel,
         long index, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  out << metric << ',' << channel << ',' << index << ',' << buf << '\n';
}

}  // namespace

void write_metrics_csv(const MetricsReport& r, std::ostream& out) {
  out << "metric,channel,index,value\n";
  for (int c = 0; c < r.jerk.bucket_max.cols(); ++c) {
    for (int b = 0; b < r.jerk.bucket_max.rows(); ++b) {
      row(out, "max_jerk", "qd" + std::to_string(c), r.jerk.bucket_start[b],
          r.jerk.bucket_max(b, c));
    }
  }
  for (size_t i = 0; i < r.manipulability.size(); ++i) {
    const std::string cp = "cp" + std::to_string(i);
    row(out, "manipulability_min", cp, 0, r.manipulability[i].min);
    row(out, "manipulability_mean", cp, 0, r.manipulability[i].mean);
  }
  for (size_t i = 0; i < r.projection_histogram.size(); ++i) {
    const std::string cp = "cp" + std::to_string(i);
    for (size_t b = 0; b < r.projection_histogram[i].size(); ++b) {
      row(out, "projection_hist", cp, static_cast<long>(b), r.projection_histogram[i][b]);
    }
  }
  row(out, "min_obstacle_distance", "robot", 0, r.min_obstacle_distance);
  row(out, "solver_failures", "solver", 0, r.solver_failures);
}

void write_curves_csv(const MetricsReport& r, std::ostream& out) {
  out << "t";
  for (size_t i = 0; i < r.curves.size(); ++i) {
    out << ",cp" << i << "_dmin,cp" << i << "_repulse_mag";
  }
  out << '\n';
  if (r.curves.empty()) return;
  char buf[64];
  for (size_t k = 0; k < r.curves[0].t.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.curves[0].t[k]);
    out << buf;
    for (const ForceDistanceCurve& c : r.curves) {
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", c.d_min[k], c.repulse_mag[k]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace oacbench
