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

#include "tcq/analysis.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tcq/errorsim.h"
#include "tcq/hash.h"
#include "tcq/syndrome.h"

namespace tcq {

void FailureModel::validate() const {
    if (!(p > 0.0 && p < p_th)) {
        throw std::invalid_argument("failure model needs 0 < p < p_th");
    }
    if (m_e < 1) {
        throw std::invalid_argument("m_e must be at least 1");
    }
}

double FailureModel::omega() const {
    if (mode == ApproxMode::kRounded) {
        return std::pow(10.0, -2.0 * m_e);
    }
    return std::pow(p / p_th, m_e);
}

double logical_cnot_failure(const FailureModel& model) {
    model.validate();
    const double omega = model.omega();
    if (omega <= 0.0) {
        return 0.0;
    }
    if (omega >= 1.0) {
        return 1.0;
    }
    return -std::expm1(model.layers() * std::log1p(-omega));
}

int order_of_magnitude(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error("order of magnitude needs a positive finite value");
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", x);
    const char* e = std::strchr(buf, 'e');
    return std::atoi(e + 1);
}

int table_region_size(int m_e) {
    static constexpr int kTable[] = {10, 15, 23, 32, 44, 62, 81};
    if (m_e < 4 || m_e > 10) {
        throw std::out_of_range("n(m_e) is tabulated only for m_e in 4..10");
    }
    return kTable[m_e - 4];
}

void Histogram::add(int value, int64_t count) {
    if (value < 0) {
        throw std::invalid_argument("histogram values must be non-negative");
    }
    if (static_cast<size_t>(value) >= counts.size()) {
        counts.resize(static_cast<size_t>(value) + 1, 0);
    }
    counts[static_cast<size_t>(value)] += count;
}

void Histogram::merge(const Histogram& other) {
    for (size_t k = 0; k < other.counts.size(); ++k) {
        if (other.counts[k] != 0) {
            add(static_cast<int>(k), other.counts[k]);
        }
    }
}

int64_t Histogram::at(int value) const {
    if (value < 0 || static_cast<size_t>(value) >= counts.size()) {
        return 0;
    }
    return counts[static_cast<size_t>(value)];
}

int64_t Histogram::total() const {
    int64_t t = 0;
    for (int64_t c : counts) {
        t += c;
    }
    return t;
}

int Histogram::peak() const {
    int best = -1;
    for (size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0 && (best < 0 || counts[k] > counts[static_cast<size_t>(best)])) {
            best = static_cast<int>(k);
        }
    }
    return best;
}

std::vector<double> relative_frequency(const Histogram& h, int reference) {
    const int64_t ref = h.at(reference);
    if (ref <= 0) {
        throw std::domain_error("reference bin of the histogram is empty");
    }
    std::vector<double> out(h.counts.size());
    for (size_t k = 0; k < h.counts.size(); ++k) {
        out[k] = static_cast<double>(h.counts[k]) / static_cast<double>(ref);
    }
    return out;
}

std::optional<TailFit> fit_tail(const Histogram& h, int reference, int64_t min_count) {
    const int peak = h.peak();
    if (peak < 0 || h.at(reference) <= 0) {
        return std::nullopt;
    }
    // Start at the largest bin after the main peak, so a secondary hump of
    // merged pairs is not mistaken for decay.
    int mode = -1;
    for (int n = peak + 1; n <= h.max_value(); ++n) {
        if (h.at(n) > 0 && (mode < 0 || h.at(n) > h.at(mode))) {
            mode = n;
        }
    }
    if (mode < 0) {
        return std::nullopt;
    }
    const double ref = static_cast<double>(h.at(reference));
    const int64_t floor_count = std::max<int64_t>(min_count, 1);
    std::vector<double> xs;
    std::vector<double> ys;
    TailFit fit;
    fit.first = mode;
    fit.last = mode;
    for (int n = mode; n <= h.max_value() && h.at(n) >= floor_count; ++n) {
        xs.push_back(n);
        ys.push_back(std::log(static_cast<double>(h.at(n)) / ref));
        fit.last = n;
    }
    fit.points = static_cast<int>(xs.size());
    if (fit.points < 3) {
        return std::nullopt;
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    if (!(slope < 0.0)) {
        return std::nullopt;
    }
    const double intercept = my - slope * mx;
    fit.beta = -slope;
    fit.alpha = std::exp(intercept);
    double ss_res = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

int max_graph_diameter(int num_nodes, const std::vector<MatchEdge>& edges) {
    if (num_nodes <= 0) {
        throw std::invalid_argument("diameter of an empty graph");
    }
    constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
    const size_t n = static_cast<size_t>(num_nodes);
    std::vector<int64_t> dist(n * n, kInf);
    for (size_t v = 0; v < n; ++v) {
        dist[v * n + v] = 0;
    }
    for (const MatchEdge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        const size_t a = static_cast<size_t>(e.u);
        const size_t b = static_cast<size_t>(e.v);
        dist[a * n + b] = std::min<int64_t>(dist[a * n + b], e.weight);
        dist[b * n + a] = std::min<int64_t>(dist[b * n + a], e.weight);
    }
    for (size_t k = 0; k < n; ++k) {
        for (size_t i = 0; i < n; ++i) {
            const int64_t dik = dist[i * n + k];
            if (dik == kInf) {
                continue;
            }
            for (size_t j = 0; j < n; ++j) {
                const int64_t cand = dik + dist[k * n + j];
                if (cand < dist[i * n + j]) {
                    dist[i * n + j] = cand;
                }
            }
        }
    }
    int64_t best = 0;
    for (int64_t d : dist) {
        if (d == kInf) {
            throw std::invalid_argument("diameter of a disconnected graph");
        }
        best = std::max(best, d);
    }
    return static_cast<int>(best);
}

int max_graph_diameter(const MatchGraph& g, const std::vector<int>& component) {
    const MatchingInstance inst = component_instance(g, component);
    return max_graph_diameter(inst.num_events, inst.edges);
}

ComponentStudy component_distribution(const LatticeDims& dims, double p, int m_e, int64_t trials,
                                       uint64_t seed, int jobs, bool diameters) {
    dims.validate();
    if (trials < 1) {
        throw std::invalid_argument("component distribution needs at least one trial");
    }
    ComponentStudy study;
    study.dims = dims;
    study.p = p;
    study.m_e = m_e;
    study.trials = trials;

    const int workers = static_cast<int>(std::max<int64_t>(1, std::min<int64_t>(jobs, trials)));
    std::vector<Histogram> extents(static_cast<size_t>(workers));
    std::vector<Histogram> diams(static_cast<size_t>(workers));
    std::vector<int64_t> counts(static_cast<size_t>(workers), 0);
    std::atomic<int64_t> next{0};
    auto work = [&](int w) {
        for (int64_t k = next++; k < trials; k = next++) {
            const uint64_t s = hash_combine(seed ^ kTrialStream, static_cast<uint64_t>(k));
            const ErrorConfiguration errors = sample_errors(dims, {p, 0.0, s});
            const SyndromeResult syn = detection_events_from_errors(dims, errors);
            const MatchGraph g = build_bounded_graph(dims, syn.events, m_e);
            int largest = -1;
            for (const auto& comp : connected_components(g)) {
                extents[static_cast<size_t>(w)].add(component_extent(g, comp));
                ++counts[static_cast<size_t>(w)];
                if (diameters) {
                    largest = std::max(largest, max_graph_diameter(g, comp));
                }
            }
            if (diameters && largest >= 0) {
                diams[static_cast<size_t>(w)].add(largest);
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (int w = 0; w < workers; ++w) {
        study.extents.merge(extents[static_cast<size_t>(w)]);
        study.max_diameters.merge(diams[static_cast<size_t>(w)]);
        study.components += counts[static_cast<size_t>(w)];
    }
    study.fit = fit_tail(study.extents);
    return study;
}

double region_size_exact(const FailureModel& model, const TailFit& fit, RegionForm form) {
    if (!(fit.alpha > 0.0) || !(fit.beta > 0.0)) {
        throw std::invalid_argument("tail fit needs positive alpha and beta");
    }
    const double p_l = logical_cnot_failure(model);
    const double scale =
        form == RegionForm::kFull ? 6.0 * model.p * model.cnot_volume() * fit.alpha : 0.15 * fit.alpha;
    const double ratio = p_l / scale;
    if (!(ratio > 0.0) || ratio >= 1.0) {
        throw std::domain_error("target failure rate is not below the scaled tail amplitude; "
                                "no positive region size");
    }
    return -std::log(ratio) / fit.beta;
}

int solve_region_size(const FailureModel& model, const TailFit& fit, RegionForm form) {
    return static_cast<int>(std::ceil(region_size_exact(model, fit, form) - 1e-9));
}

double interpolate(const std::map<int, double>& curve, double x, bool* extrapolated) {
    if (curve.empty()) {
        throw std::invalid_argument("empty timing curve");
    }
    if (extrapolated) {
        *extrapolated = x < curve.begin()->first || x > curve.rbegin()->first;
    }
    if (curve.size() == 1) {
        return curve.begin()->second;
    }
    auto hi = curve.lower_bound(static_cast<int>(std::ceil(x)));
    if (hi == curve.end()) {
        hi = std::prev(curve.end());
    }
    if (hi == curve.begin()) {
        hi = std::next(curve.begin());
    }
    if (hi->first == x) {
        return hi->second;
    }
    const auto lo = std::prev(hi);
    const double f = (x - lo->first) / static_cast<double>(hi->first - lo->first);
    return lo->second + f * (hi->second - lo->second);
}

ClockEstimate min_clock_cycle(const TimingCurve& curve, int n) {
    if (n < 1) {
        throw std::invalid_argument("window edge must be positive");
    }
    const double x = 3.0 * n;
    ClockEstimate est;
    bool tree_extra = false;
    bool match_extra = false;
    const double tree = curve.tree.empty() ? -1.0 : interpolate(curve.tree, x, &tree_extra);
    const double match = curve.match.empty() ? -1.0 : interpolate(curve.match, x, &match_extra);
    if (tree < 0.0 && match < 0.0) {
        throw std::invalid_argument("timing curve has no data");
    }
    if (tree >= match) {
        est.stage_seconds = tree;
        est.slower_stage = "tree";
        est.extrapolated = tree_extra;
    } else {
        est.stage_seconds = match;
        est.slower_stage = "match";
        est.extrapolated = match_extra;
    }
    est.t_min = est.stage_seconds / (2.0 * n);
    return est;
}

double instances_per_qubit(int m_e, int n) {
    if (n < 1 || m_e < 1) {
        throw std::invalid_argument("instances_per_qubit needs positive m_e and n");
    }
    const double d = 2.0 * m_e;
    return 4.0 * (2.0 * d + d / 2.0) * (d + d / 4.0) / (static_cast<double>(n) * n);
}

std::vector<BenchPoint> benchmark_stages(const BenchConfig& config) {
    using Clock = std::chrono::steady_clock;
    if (config.trials < 1) {
        throw std::invalid_argument("benchmark needs at least one trial");
    }
    std::vector<BenchPoint> out;
    for (int edge : config.edges) {
        const LatticeDims dims = LatticeDims::cube(edge);
        dims.validate();
        // One error sample per trial, shared by every m_e at this volume.
        std::vector<std::vector<DetectionEvent>> samples;
        samples.reserve(static_cast<size_t>(config.trials));
        double events = 0.0;
        for (int64_t k = 0; k < config.trials; ++k) {
            const uint64_t s = hash_combine(config.seed ^ kTrialStream, static_cast<uint64_t>(k));
            samples.push_back(
                detection_events_from_errors(dims, sample_errors(dims, {config.p, 0.0, s})).events);
            events += static_cast<double>(samples.back().size());
        }
        // m_e values are interleaved per sample, in rotating order, so slow
        // drift of the machine does not bias one m_e against another.
        const size_t nm = config.m_e_values.size();
        std::vector<double> tree(nm, 0.0);
        std::vector<double> match(nm, 0.0);
        for (size_t k = 0; k < samples.size(); ++k) {
            for (size_t r = 0; r < nm; ++r) {
                const size_t m = (k + r) % nm;
                const int m_e = config.m_e_values[m];
                const auto t0 = Clock::now();
                const MatchGraph g = build_bounded_graph(dims, samples[k], m_e);
                const auto comps = connected_components(g);
                const auto t1 = Clock::now();
                for (const auto& comp : comps) {
                    try {
                        minimum_weight_matching(component_instance(g, comp));
                    } catch (const UnmatchableError&) {
                    }
                }
                const auto t2 = Clock::now();
                tree[m] += std::chrono::duration<double>(t1 - t0).count();
                match[m] += std::chrono::duration<double>(t2 - t1).count();
            }
        }
        for (size_t m = 0; m < nm; ++m) {
            BenchPoint pt;
            pt.edge = edge;
            pt.m_e = config.m_e_values[m];
            pt.trials = config.trials;
            pt.mean_events = events / static_cast<double>(config.trials);
            pt.tree_seconds = tree[m] / static_cast<double>(config.trials);
            pt.match_seconds = match[m] / static_cast<double>(config.trials);
            out.push_back(pt);
        }
    }
    return out;
}

TimingCurve timing_curve(const std::vector<BenchPoint>& points, int m_e) {
    TimingCurve c;
    for (const BenchPoint& p : points) {
        if (p.m_e == m_e) {
            c.tree[p.edge] = p.tree_seconds;
            c.match[p.edge] = p.match_seconds;
        }
    }
    return c;
}

std::string bench_csv(const std::vector<BenchPoint>& points) {
    std::ostringstream out;
    out << "edge,m_e,trials,mean_events,tree_seconds,match_seconds\n";
    out.precision(9);
    for (const BenchPoint& p : points) {
        out << p.edge << ',' << p.m_e << ',' << p.trials << ',' << p.mean_events << ','
            << p.tree_seconds << ',' << p.match_seconds << '\n';
    }
    return out.str();
}

std::vector<BenchPoint> parse_bench_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<BenchPoint> out;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("edge,", 0) == 0) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        BenchPoint p;
        if (!(ls >> p.edge >> p.m_e >> p.trials >> p.mean_events >> p.tree_seconds >>
              p.match_seconds)) {
            throw std::runtime_error("timing csv line " + std::to_string(line_no) + ": malformed");
        }
        out.push_back(p);
    }
    return out;
}

PlanRow plan_row(const FailureModel& model, std::optional<int> n,
                 const std::optional<TailFit>& fit, const std::optional<TimingCurve>& curve,
                 RegionForm form) {
    PlanRow row;
    row.m_e = model.m_e;
    row.d = 2 * model.m_e;
    row.p_L = logical_cnot_failure(model);
    row.order = order_of_magnitude(row.p_L);
    if (fit) {
        row.n_solved = region_size_exact(model, *fit, form);
    }
    row.n = n ? *n : table_region_size(model.m_e);
    row.instances = instances_per_qubit(model.m_e, row.n);
    row.window_cells = 2 * row.n;
    if (curve) {
        row.clock = min_clock_cycle(*curve, row.n);
        row.window_seconds = row.window_cells * row.clock->t_min;
    }
    return row;
}

std::pair<double, double> wilson_interval(int64_t successes, int64_t trials, double z) {
    if (trials <= 0 || successes < 0 || successes > trials) {
        throw std::invalid_argument("wilson interval needs 0 <= successes <= trials, trials > 0");
    }
    const double nn = static_cast<double>(trials);
    const double ph = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double centre = (ph + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace tcq
