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

#include "tcq/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "tcq/hash.h"
#include "tcq/matcher.h"

namespace tcq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Correction pair_correction(const DetectionEvent& x, const DetectionEvent& y, int weight) {
    Correction c;
    c.a = x.cell;
    c.b = y.cell;
    c.weight = weight;
    int best = std::numeric_limits<int>::max();
    for (const CellCoord& p : x.members()) {
        for (const CellCoord& q : y.members()) {
            const int d = cell_distance(p, q);
            if (d < best) {
                best = d;
                c.from = p;
                c.to = q;
            }
        }
    }
    return c;
}

Correction boundary_correction(const LatticeDims& dims, const DetectionEvent& x, int weight) {
    Correction c;
    c.a = x.cell;
    c.weight = weight;
    int best = std::numeric_limits<int>::max();
    for (const CellCoord& p : x.members()) {
        const int d = boundary_distance(dims, p);
        if (d < best) {
            best = d;
            c.from = p;
        }
    }
    return c;
}

// Matches one component; returns false if it has no perfect matching.
bool match_component(const MatchGraph& g, const std::vector<int>& component,
                     std::vector<Correction>& out) {
    Matching m;
    try {
        m = minimum_weight_matching(component_instance(g, component));
    } catch (const UnmatchableError&) {
        return false;
    }
    for (const MatchedPair& p : m.pairs) {
        const DetectionEvent& x = g.events[component[p.a]];
        if (p.b == kBoundary) {
            out.push_back(boundary_correction(g.dims, x, p.weight));
        } else {
            out.push_back(pair_correction(x, g.events[component[p.b]], p.weight));
        }
    }
    return true;
}

void sort_unique(std::vector<Correction>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct TaskOutput {
    std::vector<Correction> corrections;
    std::vector<int> covered;
    // Smallest input index of each component matched here.
    std::vector<int> component_keys;
    int unmatchable = 0;
    std::vector<int> unmatchable_keys;
    double tree_seconds = 0.0;
    double match_seconds = 0.0;
};

TaskOutput run_task(const LatticeDims& dims, const std::vector<DetectionEvent>& events, int m_e,
                    const WindowTask& task) {
    TaskOutput out;
    const auto tree_start = Clock::now();
    std::vector<int> ids = task.payload;
    ids.insert(ids.end(), task.halo.begin(), task.halo.end());
    std::vector<DetectionEvent> local;
    local.reserve(ids.size());
    for (int id : ids) {
        local.push_back(events[id]);
    }
    const MatchGraph g = build_bounded_graph(dims, std::move(local), m_e);
    // The graph sorts its events by cell; map back to input indices.
    std::vector<int> input_of(g.events.size());
    {
        std::vector<int> by_cell = ids;
        std::sort(by_cell.begin(), by_cell.end(),
                  [&](int a, int b) { return events[a].cell < events[b].cell; });
        input_of = by_cell;
    }
    std::vector<char> in_halo(g.events.size(), 0);
    for (size_t k = 0; k < g.events.size(); ++k) {
        in_halo[k] = !task.outer.contains(g.events[k].cell);
    }
    const auto components = connected_components(g);
    out.tree_seconds = seconds_since(tree_start);

    const auto match_start = Clock::now();
    for (const auto& comp : components) {
        bool touches_inner = false;
        bool closed = true;
        for (int e : comp) {
            touches_inner = touches_inner || task.inner.contains(g.events[e].cell);
            closed = closed && !in_halo[e];
        }
        if (!touches_inner || !closed) {
            continue;
        }
        int key = std::numeric_limits<int>::max();
        for (int e : comp) {
            key = std::min(key, input_of[e]);
            out.covered.push_back(input_of[e]);
        }
        if (match_component(g, comp, out.corrections)) {
            out.component_keys.push_back(key);
        } else {
            out.unmatchable_keys.push_back(key);
        }
    }
    out.match_seconds = seconds_since(match_start);
    return out;
}

}  // namespace

DecodeResult decode_global(const LatticeDims& dims, const std::vector<DetectionEvent>& events,
                           int m_e) {
    DecodeResult result;
    const auto tree_start = Clock::now();
    const MatchGraph g = build_bounded_graph(dims, events, m_e);
    const auto components = connected_components(g);
    result.tree_seconds = seconds_since(tree_start);
    result.components = static_cast<int>(components.size());

    const auto match_start = Clock::now();
    for (const auto& comp : components) {
        if (!match_component(g, comp, result.corrections)) {
            ++result.unmatchable;
        }
    }
    sort_unique(result.corrections);
    result.match_seconds = seconds_since(match_start);
    return result;
}

DecodeResult decode_parallel(const LatticeDims& dims, const std::vector<DetectionEvent>& events,
                             int m_e, int n, int jobs) {
    if (m_e < 1) {
        throw std::invalid_argument("m_e must be at least 1");
    }
    const auto tasks = window_partition(events, dims, n, m_e);
    std::vector<TaskOutput> outputs(tasks.size());
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (workers == 1) {
        for (size_t k = 0; k < tasks.size(); ++k) {
            outputs[k] = run_task(dims, events, m_e, tasks[k]);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (size_t k = next++; k < tasks.size(); k = next++) {
                    outputs[k] = run_task(dims, events, m_e, tasks[k]);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    // Merge in task order; identical components matched by several windows
    // give identical corrections, removed here.
    DecodeResult result;
    std::vector<char> covered(events.size(), 0);
    std::vector<int> keys;
    std::vector<int> bad_keys;
    for (TaskOutput& o : outputs) {
        result.corrections.insert(result.corrections.end(), o.corrections.begin(),
                                  o.corrections.end());
        for (int id : o.covered) {
            covered[id] = 1;
        }
        keys.insert(keys.end(), o.component_keys.begin(), o.component_keys.end());
        bad_keys.insert(bad_keys.end(), o.unmatchable_keys.begin(), o.unmatchable_keys.end());
        result.tree_seconds += o.tree_seconds;
        result.match_seconds += o.match_seconds;
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::sort(bad_keys.begin(), bad_keys.end());
    bad_keys.erase(std::unique(bad_keys.begin(), bad_keys.end()), bad_keys.end());
    result.components = static_cast<int>(keys.size() + bad_keys.size());
    result.unmatchable = static_cast<int>(bad_keys.size());

    std::vector<DetectionEvent> leftover;
    for (size_t k = 0; k < events.size(); ++k) {
        if (!covered[k]) {
            leftover.push_back(events[k]);
        }
    }
    if (!leftover.empty()) {
        const DecodeResult fallback = decode_global(dims, leftover, m_e);
        result.corrections.insert(result.corrections.end(), fallback.corrections.begin(),
                                  fallback.corrections.end());
        result.components += fallback.components;
        result.oversize += fallback.components;
        result.unmatchable += fallback.unmatchable;
        result.tree_seconds += fallback.tree_seconds;
        result.match_seconds += fallback.match_seconds;
    }
    sort_unique(result.corrections);
    return result;
}

void PauliFrame::flip(const QubitSite& q) {
    auto [it, inserted] = sites_.insert(q);
    if (!inserted) {
        sites_.erase(it);
    }
}

std::vector<QubitSite> correction_path(const LatticeDims& dims, const Correction& c,
                                       const std::array<int, 3>& axis_order) {
    std::vector<QubitSite> path;
    if (!c.to) {
        const BoundaryFace face = nearest_boundary(dims, c.from);
        const int steps = boundary_distance(dims, c.from, face);
        QubitSite q = c.from.center();
        const int dir = face.high ? 1 : -1;
        int coord = q.coord(face.axis) + dir;
        for (int k = 0; k < steps; ++k, coord += 2 * dir) {
            QubitSite s = q;
            (face.axis == 0 ? s.x : face.axis == 1 ? s.y : s.z) = coord;
            path.push_back(s);
        }
        return path;
    }
    CellCoord cur = c.from;
    for (int a : axis_order) {
        int& idx = (a == 0 ? cur.i : a == 1 ? cur.j : cur.t);
        const int target = c.to->index(a);
        while (idx != target) {
            const CellCoord prev = cur;
            idx += (target > idx) ? 1 : -1;
            path.push_back(shared_face(prev, cur));
        }
    }
    return path;
}

PauliFrame apply_correction(PauliFrame frame, const LatticeDims& dims,
                            const std::vector<Correction>& corrections,
                            const std::array<int, 3>& axis_order) {
    for (const Correction& c : corrections) {
        for (const QubitSite& q : correction_path(dims, c, axis_order)) {
            frame.flip(q);
        }
    }
    return frame;
}

bool LogicalFailure::any() const {
    for (const auto& kind : flags) {
        for (bool f : kind) {
            if (f) {
                return true;
            }
        }
    }
    return false;
}

namespace {

// Doubled coordinate of the cut plane normal to `axis` for the given kind.
int mid_plane(const LatticeDims& dims, CellKind kind, int axis) {
    const int n = dims.axis(axis);
    return kind == CellKind::kPrimal ? 2 * (n / 2) : 2 * ((n - 1) / 2) + 1;
}

}  // namespace

LogicalFailure check_logical_failure(const LatticeDims& dims, const ErrorConfiguration& errors,
                                     const PauliFrame& frame) {
    std::set<QubitSite> residual = frame.sites();
    for (const QubitSite& q : errors.z_errors) {
        auto [it, inserted] = residual.insert(q);
        if (!inserted) {
            residual.erase(it);
        }
    }
    for (const QubitSite& q : errors.losses) {
        residual.erase(q);
    }

    LogicalFailure result;
    for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
        // Union-find over cells touched by residual or lost sites.
        std::unordered_map<CellCoord, int, CellCoordHash> node;
        std::vector<int> parent;
        auto id = [&](const CellCoord& c) {
            auto [it, inserted] = node.try_emplace(c, static_cast<int>(parent.size()));
            if (inserted) {
                parent.push_back(it->second);
            }
            return it->second;
        };
        auto find = [&](int x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        struct Touch {
            int cell;
            int axis;
            bool high;
        };
        std::vector<Touch> touches;
        std::vector<std::pair<int, int>> crossings;  // (cell, axis)

        auto visit = [&](const QubitSite& q, bool counts) {
            if (site_kind(q) != kind) {
                return;
            }
            const AdjacentCells adj = qubit_adjacent_cells(dims, q);
            const int a = id(adj.first);
            const QubitSite c = adj.first.center();
            int normal = 0;
            while (q.coord(normal) == c.coord(normal)) {
                ++normal;
            }
            if (adj.second) {
                const int b = find(id(*adj.second));
                const int ra = find(a);
                if (ra != b) {
                    parent[std::max(ra, b)] = std::min(ra, b);
                }
            } else {
                touches.push_back({a, normal, q.coord(normal) > c.coord(normal)});
            }
            if (counts && q.coord(normal) == mid_plane(dims, kind, normal)) {
                crossings.emplace_back(a, normal);
            }
        };
        for (const QubitSite& q : residual) {
            visit(q, true);
        }
        for (const QubitSite& q : errors.losses) {
            visit(q, false);
        }

        std::unordered_map<int, std::array<int, 3>> touched;  // bit 1 low, bit 2 high
        std::unordered_map<int, std::array<int, 3>> parity;
        for (const Touch& t : touches) {
            touched[find(t.cell)][t.axis] |= t.high ? 2 : 1;
        }
        for (const auto& [cell, axis] : crossings) {
            parity[find(cell)][axis] ^= 1;
        }
        for (const auto& [root, faces] : touched) {
            auto it = parity.find(root);
            for (int a = 0; a < 3; ++a) {
                if (faces[a] == 3 && it != parity.end() && it->second[a] == 1) {
                    result.flags[static_cast<int>(kind)][a] = true;
                }
            }
        }
    }
    return result;
}

const char* to_string(DecodeMode mode) {
    switch (mode) {
        case DecodeMode::kGlobal:
            return "global";
        case DecodeMode::kParallel:
            return "parallel";
        case DecodeMode::kBoth:
            return "both";
    }
    return "global";
}

DecodeMode decode_mode_from_string(const std::string& s) {
    if (s == "global") {
        return DecodeMode::kGlobal;
    }
    if (s == "parallel") {
        return DecodeMode::kParallel;
    }
    if (s == "both") {
        return DecodeMode::kBoth;
    }
    throw std::invalid_argument("unknown decode mode '" + s + "'");
}

void TrialConfig::validate() const {
    dims.validate();
    ErrorModel{p_z, p_loss, seed}.validate();
    if (m_e < 1) {
        throw std::invalid_argument("m_e must be at least 1");
    }
    if (trials < 0) {
        throw std::invalid_argument("trial count must be non-negative");
    }
    if (jobs < 1) {
        throw std::invalid_argument("jobs must be at least 1");
    }
    if (mode != DecodeMode::kGlobal &&
        (n < 1 || n > std::min({dims.nx, dims.ny, dims.nt}))) {
        throw std::invalid_argument("window edge n must lie in [1, smallest lattice dimension]");
    }
}

uint64_t trial_seed(uint64_t seed, int64_t trial) {
    return hash_combine(seed ^ kTrialStream, static_cast<uint64_t>(trial));
}

TrialReport run_trial(const TrialConfig& config, int64_t trial) {
    TrialReport report;
    report.trial = trial;
    report.seed = trial_seed(config.seed, trial);
    const ErrorConfiguration errors =
        sample_errors(config.dims, {config.p_z, config.p_loss, report.seed});
    report.z_errors = static_cast<int>(errors.z_errors.size());
    report.losses = static_cast<int>(errors.losses.size());

    const auto syndrome_start = Clock::now();
    SyndromeResult syndrome;
    if (config.through_stream) {
        StreamHeader header{config.dims, report.seed, config.baseline, report.seed ^ kBaselineStream};
        syndrome = extract_detection_events(measurement_stream(config.dims, errors, header));
    } else {
        syndrome = detection_events_from_errors(config.dims, errors);
    }
    report.syndrome_seconds = seconds_since(syndrome_start);
    report.events = static_cast<int>(syndrome.events.size());
    report.heralded_loss = syndrome.heralded_failure;

    DecodeResult decoded;
    if (config.mode == DecodeMode::kParallel) {
        decoded = decode_parallel(config.dims, syndrome.events, config.m_e, config.n);
    } else {
        decoded = decode_global(config.dims, syndrome.events, config.m_e);
    }
    if (config.mode == DecodeMode::kBoth) {
        const DecodeResult parallel =
            decode_parallel(config.dims, syndrome.events, config.m_e, config.n);
        report.agreement = parallel.corrections == decoded.corrections ? 1 : 0;
        report.oversize = parallel.oversize;
    } else {
        report.oversize = decoded.oversize;
    }
    report.components = decoded.components;
    report.unmatchable = decoded.unmatchable;
    report.tree_seconds = decoded.tree_seconds;
    report.match_seconds = decoded.match_seconds;

    const PauliFrame frame = apply_correction({}, config.dims, decoded.corrections);
    report.failure = check_logical_failure(config.dims, errors, frame);
    return report;
}

std::vector<TrialReport> run_trials(const TrialConfig& config) {
    config.validate();
    std::vector<TrialReport> reports(static_cast<size_t>(config.trials));
    const int workers =
        static_cast<int>(std::max<int64_t>(1, std::min<int64_t>(config.jobs, config.trials)));
    std::atomic<int64_t> next{0};
    auto work = [&] {
        for (int64_t k = next++; k < config.trials; k = next++) {
            reports[static_cast<size_t>(k)] = run_trial(config, k);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    return reports;
}

TrialSummary summarize(const std::vector<TrialReport>& reports) {
    TrialSummary s;
    s.trials = static_cast<int64_t>(reports.size());
    double events = 0.0;
    double components = 0.0;
    for (const TrialReport& r : reports) {
        s.failures += r.failed() ? 1 : 0;
        s.gave_up += r.gave_up() ? 1 : 0;
        s.oversize_trials += r.oversize > 0 ? 1 : 0;
        s.oversize_components += r.oversize;
        if (r.agreement >= 0) {
            ++s.compared;
            if (r.oversize == 0) {
                ++s.bounded_compared;
                s.bounded_agreed += r.agreement;
            }
        }
        for (int k = 0; k < 2; ++k) {
            for (int a = 0; a < 3; ++a) {
                s.failures_by_axis[k][a] += r.failure.flags[k][a] ? 1 : 0;
            }
        }
        events += r.events;
        components += r.components;
        s.tree_seconds += r.tree_seconds;
        s.match_seconds += r.match_seconds;
    }
    if (s.trials > 0) {
        s.mean_events = events / static_cast<double>(s.trials);
        s.mean_components = components / static_cast<double>(s.trials);
    }
    return s;
}

OracleCheck compare_with_oracle(int64_t instances, uint64_t seed) {
    const LatticeDims dims = LatticeDims::cube(10);
    static constexpr std::array<int, 3> kEdgeWeights = {4, 6, 10};
    std::mt19937_64 rng(hash_combine(seed, 0x6f7261636c65ULL));
    OracleCheck check;
    for (int64_t k = 0; k < instances; ++k) {
        const int count = std::uniform_int_distribution<int>(4, 12)(rng);
        const int m_e = kEdgeWeights[std::uniform_int_distribution<size_t>(0, 2)(rng)];
        std::set<CellCoord> cells;
        std::uniform_int_distribution<int> coord(0, 9);
        while (static_cast<int>(cells.size()) < count) {
            cells.insert({coord(rng), coord(rng), coord(rng), CellKind::kPrimal});
        }
        std::vector<DetectionEvent> events;
        for (const CellCoord& c : cells) {
            events.push_back({c, {}});
        }
        const MatchGraph g = build_bounded_graph(dims, events, m_e);
        std::vector<int> all(events.size());
        std::iota(all.begin(), all.end(), 0);
        const MatchingInstance inst = component_instance(g, all);
        ++check.instances;
        std::optional<Matching> fast;
        std::optional<Matching> slow;
        try {
            fast = minimum_weight_matching(inst);
        } catch (const UnmatchableError&) {
        }
        try {
            slow = brute_force_matching(inst);
        } catch (const UnmatchableError&) {
        }
        if (!fast && !slow) {
            ++check.unmatchable;
            ++check.weight_agreed;
            ++check.pairs_agreed;
        } else if (fast && slow) {
            check.weight_agreed += fast->total_weight == slow->total_weight ? 1 : 0;
            check.pairs_agreed += fast->pairs == slow->pairs ? 1 : 0;
        }
    }
    return check;
}

}  // namespace tcq
