// Copyright 2026 The tcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCQ_ANALYSIS_H
#define TCQ_ANALYSIS_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcq/lattice.h"
#include "tcq/matcher.h"
#include "tcq/matchprep.h"

namespace tcq {

// ---- Failure model -------------------------------------------------------

/// kRounded uses the rounded single-layer failure 10^(-2 m_e); kExact uses
/// (p / p_th)^(m_e).
enum class ApproxMode : uint8_t { kRounded, kExact };

struct FailureModel {
    double p = 1e-4;
    double p_th = 0.0061;
    int m_e = 6;
    ApproxMode mode = ApproxMode::kRounded;

    void validate() const;
    /// Failure probability of one logical qubit one layer thick.
    double omega() const;
    /// Layers consumed by a logical CNOT, 20 m_e.
    int layers() const { return 20 * m_e; }
    /// Cells in the volume of one logical CNOT, 250 m_e^3.
    double cnot_volume() const { return 250.0 * m_e * m_e * m_e; }
};

/// 1 - (1 - omega)^layers, evaluated without cancellation.
double logical_cnot_failure(const FailureModel& model);

/// Decimal exponent of x as printed with three significant digits, so that
/// 9.99999995e-9 has order -8.
int order_of_magnitude(double x);

/// Tabulated window edges n(m_e) for m_e in 4..10; throws std::out_of_range
/// otherwise.
int table_region_size(int m_e);

// ---- Component statistics ------------------------------------------------

struct Histogram {
    std::vector<int64_t> counts;

    void add(int value, int64_t count = 1);
    void merge(const Histogram& other);
    int64_t at(int value) const;
    int64_t total() const;
    /// Value with the largest count (smallest on ties); -1 when empty.
    int peak() const;
    int max_value() const { return static_cast<int>(counts.size()) - 1; }
};

/// counts[k] / counts[reference]. Throws std::domain_error if the reference
/// bin is empty.
std::vector<double> relative_frequency(const Histogram& h, int reference = 1);

/// Relative frequency P(n) ~ alpha * exp(-beta * n) over the decay region.
struct TailFit {
    double alpha = 0.0;
    double beta = 0.0;
    /// Coefficient of determination of ln P on n over the fitted bins.
    double r_squared = 0.0;
    int first = 0;
    int last = 0;
    int points = 0;
};

/// Least squares of ln(relative frequency) against extent over the decay
/// region: from the largest bin after the main peak up to the last
/// consecutive bin holding at least `min_count` components. Empty when fewer
/// than three bins qualify or the fitted decay rate is not positive.
std::optional<TailFit> fit_tail(const Histogram& h, int reference = 1, int64_t min_count = 10);

/// Weighted shortest-path diameter of a connected graph on `num_nodes` nodes
/// (Floyd-Warshall). Throws std::invalid_argument if the graph is empty or
/// disconnected.
int max_graph_diameter(int num_nodes, const std::vector<MatchEdge>& edges);
/// Diameter of one component of a match graph over its event nodes.
int max_graph_diameter(const MatchGraph& g, const std::vector<int>& component);

struct ComponentStudy {
    LatticeDims dims;
    double p = 0.0;
    int m_e = 0;
    int64_t trials = 0;
    int64_t components = 0;
    Histogram extents;
    /// Largest graph diameter per trial, when requested.
    Histogram max_diameters;
    std::optional<TailFit> fit;
};

/// Pools the extents of every component over `trials` error samples.
ComponentStudy component_distribution(const LatticeDims& dims, double p, int m_e, int64_t trials,
                                       uint64_t seed, int jobs = 1, bool diameters = false);

// ---- Sizing --------------------------------------------------------------

/// kFull solves 6 p 250 m_e^3 alpha exp(-beta n) = p_L; kPrinted uses the
/// closed form with the constant 0.15 alpha.
enum class RegionForm : uint8_t { kFull, kPrinted };

/// Real-valued solution. Throws std::domain_error when the fit implies no
/// positive n (p_L at least the scaled tail amplitude).
double region_size_exact(const FailureModel& model, const TailFit& fit,
                         RegionForm form = RegionForm::kFull);
/// Rounded up.
int solve_region_size(const FailureModel& model, const TailFit& fit,
                      RegionForm form = RegionForm::kFull);

/// Processing time per stage keyed by processing-volume edge length.
struct TimingCurve {
    std::map<int, double> tree;
    std::map<int, double> match;
};

struct ClockEstimate {
    double t_min = 0.0;
    /// Time of the slower stage at edge 3n.
    double stage_seconds = 0.0;
    std::string slower_stage;
    bool extrapolated = false;
};

/// Piecewise-linear interpolation; flags evaluation outside the data range
/// (extends the end segment). Throws std::invalid_argument on an empty curve.
double interpolate(const std::map<int, double>& curve, double x, bool* extrapolated);

/// t(3n) / (2n) for the slower stage.
ClockEstimate min_clock_cycle(const TimingCurve& curve, int n);

/// 4 (2d + d/2)(d + d/4) / n^2 with d = 2 m_e.
double instances_per_qubit(int m_e, int n);

struct BenchConfig {
    std::vector<int> edges = {35, 55, 75, 95, 115, 135, 155};
    std::vector<int> m_e_values = {4, 5, 6, 7, 8, 9, 10};
    double p = 1e-4;
    int64_t trials = 10000;
    uint64_t seed = 1;
};

struct BenchPoint {
    int edge = 0;
    int m_e = 0;
    int64_t trials = 0;
    double mean_events = 0.0;
    /// Mean seconds per trial.
    double tree_seconds = 0.0;
    double match_seconds = 0.0;
};

/// Times tree creation (index, edges, components) and matching per volume and
/// m_e on identical error samples.
std::vector<BenchPoint> benchmark_stages(const BenchConfig& config);

TimingCurve timing_curve(const std::vector<BenchPoint>& points, int m_e);

/// Reads and writes "edge,m_e,trials,mean_events,tree_seconds,match_seconds"
/// with a header row.
std::string bench_csv(const std::vector<BenchPoint>& points);
std::vector<BenchPoint> parse_bench_csv(const std::string& text);

struct PlanRow {
    int m_e = 0;
    int d = 0;
    int n = 0;
    double p_L = 0.0;
    int order = 0;
    double instances = 0.0;
    /// Window length along simulated time, in cells (2n).
    int window_cells = 0;
    std::optional<ClockEstimate> clock;
    /// 2n * T_min.
    std::optional<double> window_seconds;
    std::optional<double> n_solved;
};

/// One planning row. `n` defaults to table_region_size(m_e) when
/// absent (and m_e is in range); `fit` and `curve` are optional inputs.
PlanRow plan_row(const FailureModel& model, std::optional<int> n,
                 const std::optional<TailFit>& fit, const std::optional<TimingCurve>& curve,
                 RegionForm form = RegionForm::kFull);

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(int64_t successes, int64_t trials, double z = 1.96);

}  // namespace tcq

#endif  // TCQ_ANALYSIS_H
