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

#ifndef OACBENCH_METRICS_H_
#define OACBENCH_METRICS_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "oacbench/common.h"

namespace oacbench {

// Uniformly sampled multi-channel signal. values(i, c) is channel c at t[i].
struct SignalSeries {
  std::vector<double> t;
  MatX values;

  int length() const { return static_cast<int>(values.rows()); }
  int channels() const { return static_cast<int>(values.cols()); }
  // Throws InputError unless t is uniform (1e-12 relative to dt) and
  // matches the number of samples.
  double spacing() const;
};

// Least-squares weights that evaluate, at sample `eval`, the degree
// `polyorder` polynomial fitted to samples [0, window).
VecX savgol_weights(int window, int polyorder, int eval);

// Savitzky-Golay smoothing. Samples closer than window/2 to either end are
// taken from the polynomial fitted to the first/last `window` samples.
SignalSeries savgol(const SignalSeries& series, int window, int polyorder);

// Second-order central differences; one-sided second-order at the ends.
SignalSeries central_gradient(const SignalSeries& series, double dt);

struct SavgolParams {
  int window = 21;
  int polyorder = 3;
};

struct JerkProfile {
  SignalSeries jerk;
  // bucket_max(b, c): max |jerk| of channel c over t in [b, b + 1) s,
  // counted from floor(t[0]).
  MatX bucket_max;
  std::vector<int> bucket_start;  // seconds
};

// Smooths once, then differentiates twice.
JerkProfile jerk_profile(const SignalSeries& velocity, double dt,
                         const SavgolParams& sg = {});

// Max |x| per whole-second bucket.
MatX bucket_maxima(const SignalSeries& series, std::vector<int>* bucket_start);

// Parsed trace CSV.
struct TraceTable {
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;
  std::vector<std::string> solver_status;

  size_t rows() const { return solver_status.size(); }
  bool has(const std::string& name) const { return columns.count(name) > 0; }
  // Throws InputError naming the missing column.
  const std::vector<double>& column(const std::string& name) const;
  int count_prefixed(const std::string& prefix, const std::string& suffix) const;
};

// Throws InputError with the line number of the first malformed record.
TraceTable read_trace_csv(std::istream& in);
TraceTable read_trace_file(const std::string& path);

struct ForceDistanceCurve {
  std::vector<double> t;
  std::vector<double> d_min;
  std::vector<double> repulse_mag;
};

// One curve per control point, extracted column-for-column.
std::vector<ForceDistanceCurve> force_distance_curves(const TraceTable& trace);

struct ManipulabilityStats {
  double min = 0.0;
  double mean = 0.0;
};

struct MetricsReport {
  JerkProfile jerk;
  std::vector<ManipulabilityStats> manipulability;  // per control point
  // Per control point, counts of proj_norm over ten bins of [0, 1], taken
  // over ticks with non-zero repulsion.
  std::vector<std::vector<int>> projection_histogram;
  double min_obstacle_distance = 0.0;
  int solver_failures = 0;
  std::vector<ForceDistanceCurve> curves;
};

MetricsReport report(const TraceTable& trace, const SavgolParams& sg = {});

// metrics.csv: "metric,channel,index,value" rows.
void write_metrics_csv(const MetricsReport& report, std::ostream& out);
// curves.csv: t, then cp{i}_dmin,cp{i}_repulse_mag per control point.
void write_curves_csv(const MetricsReport& report, std::ostream& out);

}  // namespace oacbench

#endif  // OACBENCH_METRICS_H_
