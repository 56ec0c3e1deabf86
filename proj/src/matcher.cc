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

#include "tcq/matcher.h"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>

#include "tcq/blossom.h"

namespace tcq {

void validate(const MatchingInstance& instance) {
    const int n = instance.num_events;
    if (n < 0) {
        throw std::invalid_argument("negative event count");
    }
    if (static_cast<int>(instance.boundary.size()) != n) {
        throw std::invalid_argument("boundary list size differs from event count");
    }
    for (int b : instance.boundary) {
        if (b < -1) {
            throw std::invalid_argument("negative boundary weight");
        }
    }
    for (const MatchEdge& e : instance.edges) {
        if (e.u < 0 || e.v >= n || e.u >= e.v) {
            throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " +
                                        std::to_string(e.v) + ") is not an ordered event pair");
        }
        if (e.weight < 0) {
            throw std::invalid_argument("negative edge weight");
        }
    }
}

namespace {

constexpr int64_t kInfeasible = std::numeric_limits<int64_t>::max();

// Dense view of an instance: weight[u][v] or -1.
struct Dense {
    int n = 0;
    std::vector<int> weight;
    std::vector<int> boundary;

    explicit Dense(const MatchingInstance& inst)
        : n(inst.num_events), weight(static_cast<size_t>(n) * n, -1), boundary(inst.boundary) {
        for (const MatchEdge& e : inst.edges) {
            int& w = weight[static_cast<size_t>(e.u) * n + e.v];
            w = (w < 0) ? e.weight : std::min(w, e.weight);
            weight[static_cast<size_t>(e.v) * n + e.u] = w;
        }
    }
    int at(int u, int v) const { return weight[static_cast<size_t>(u) * n + v]; }
};

// Partner vector uses n for the boundary.
struct Solution {
    std::vector<int> partner;
    int64_t weight = 0;
    // Reduced cost of each event-event edge, keyed u * n + v (u < v), in the
    // numbering of the full instance.
    std::unordered_map<int64_t, int64_t> reduced;
};

// Solves the sub-problem over `alive` events (full-instance ids, ascending).
std::optional<Solution> solve_subset(const Dense& d, const std::vector<int>& alive) {
    const int m = static_cast<int>(alive.size());
    Solution sol;
    sol.partner.assign(d.n, -1);
    if (m == 0) {
        return sol;
    }
    std::vector<int> virt(m, -1);
    int nodes = m;
    int64_t maxw = 0;
    for (int a = 0; a < m; ++a) {
        if (d.boundary[alive[a]] >= 0) {
            virt[a] = nodes++;
            maxw = std::max<int64_t>(maxw, d.boundary[alive[a]]);
        }
    }
    const int num_virtual = nodes - m;
    if (num_virtual == 0 && m % 2 == 1) {
        return std::nullopt;
    }
    int extra = -1;
    if (nodes % 2 == 1) {
        extra = nodes++;
    }
    struct Local {
        int a;
        int b;
        int w;
    };
    std::vector<Local> event_edges;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const int w = d.at(alive[a], alive[b]);
            if (w >= 0) {
                event_edges.push_back({a, b, w});
                maxw = std::max<int64_t>(maxw, w);
            }
        }
    }
    // Minimum weight perfect matching as maximum weight, maximum cardinality
    // matching on complemented weights.
    const int64_t top = maxw + 1;
    std::vector<WeightedEdge> edges;
    for (const Local& e : event_edges) {
        edges.push_back({e.a, e.b, top - e.w});
    }
    std::vector<int> virtual_nodes;
    for (int a = 0; a < m; ++a) {
        if (virt[a] >= 0) {
            edges.push_back({a, virt[a], top - d.boundary[alive[a]]});
            virtual_nodes.push_back(virt[a]);
        }
    }
    if (extra >= 0) {
        virtual_nodes.push_back(extra);
    }
    for (size_t x = 0; x < virtual_nodes.size(); ++x) {
        for (size_t y = x + 1; y < virtual_nodes.size(); ++y) {
            edges.push_back({virtual_nodes[x], virtual_nodes[y], top});
        }
    }
    const BlossomResult r = max_weight_matching(nodes, edges, true);
    for (int a = 0; a < m; ++a) {
        const int mate = r.mate[a];
        if (mate < 0) {
            return std::nullopt;
        }
        if (mate < m) {
            sol.partner[alive[a]] = alive[mate];
            if (a < mate) {
                sol.weight += d.at(alive[a], alive[mate]);
            }
        } else if (mate == virt[a]) {
            sol.partner[alive[a]] = d.n;
            sol.weight += d.boundary[alive[a]];
        } else {
            return std::nullopt;
        }
    }
    for (size_t k = 0; k < event_edges.size(); ++k) {
        const int64_t key = int64_t{alive[event_edges[k].a]} * d.n + alive[event_edges[k].b];
        sol.reduced[key] = r.reduced_cost[k];
    }
    return sol;
}

Matching to_matching(const Dense& d, const std::vector<int>& partner) {
    Matching out;
    for (int u = 0; u < d.n; ++u) {
        const int p = partner[u];
        if (p == d.n) {
            out.pairs.push_back({u, kBoundary, d.boundary[u]});
            out.total_weight += d.boundary[u];
        } else if (p > u) {
            out.pairs.push_back({u, p, d.at(u, p)});
            out.total_weight += d.at(u, p);
        }
    }
    return out;
}

}  // namespace

Matching minimum_weight_matching(const MatchingInstance& instance) {
    validate(instance);
    const Dense d(instance);
    const int n = d.n;
    std::vector<int> alive(n);
    for (int u = 0; u < n; ++u) {
        alive[u] = u;
    }
    std::optional<Solution> current = solve_subset(d, alive);
    if (!current) {
        throw UnmatchableError("no perfect matching: odd event count without boundary access, "
                               "or edges too sparse");
    }
    const int64_t optimum = current->weight;

    // Fix partners smallest event first. Before keeping the partner the solver
    // chose, try every smaller partner that could belong to some optimum: an
    // edge with nonzero reduced cost cannot.
    std::vector<int> fixed(n, -1);
    int64_t fixed_weight = 0;
    for (int u = 0; u < n; ++u) {
        if (fixed[u] != -1) {
            continue;
        }
        const int chosen = current->partner[u];
        for (int c = u + 1; c < chosen; ++c) {
            if (fixed[c] != -1 || d.at(u, c) < 0) {
                continue;
            }
            auto it = current->reduced.find(int64_t{u} * n + c);
            if (it == current->reduced.end() || it->second != 0) {
                continue;
            }
            std::vector<int> rest;
            for (int v : alive) {
                if (v != u && v != c) {
                    rest.push_back(v);
                }
            }
            auto trial = solve_subset(d, rest);
            if (trial && fixed_weight + d.at(u, c) + trial->weight == optimum) {
                trial->partner[u] = c;
                trial->partner[c] = u;
                trial->weight += d.at(u, c);
                current = std::move(trial);
                break;
            }
        }
        const int p = current->partner[u];
        fixed[u] = p;
        alive.erase(std::find(alive.begin(), alive.end(), u));
        if (p == n) {
            fixed_weight += d.boundary[u];
        } else {
            fixed[p] = u;
            fixed_weight += d.at(u, p);
            alive.erase(std::find(alive.begin(), alive.end(), p));
        }
    }
    std::vector<int> partner(n);
    for (int u = 0; u < n; ++u) {
        partner[u] = fixed[u];
    }
    Matching out = to_matching(d, partner);
    if (out.total_weight != optimum) {
        throw std::logic_error("tie-break pass changed the matching weight");
    }
    return out;
}

Matching brute_force_matching(const MatchingInstance& instance) {
    validate(instance);
    if (instance.num_events > 12) {
        throw std::invalid_argument("brute force matching supports at most 12 events");
    }
    const Dense d(instance);
    const int n = d.n;
    std::vector<int> partner(n, -1);
    std::vector<int> best;
    int64_t best_weight = kInfeasible;

    // Enumerates in lexicographic order of the partner vector, so the first
    // minimum found is the lexicographically smallest.
    auto recurse = [&](auto&& self, int64_t weight) -> void {
        if (weight >= best_weight) {
            return;
        }
        int u = 0;
        while (u < n && partner[u] != -1) {
            ++u;
        }
        if (u == n) {
            best_weight = weight;
            best = partner;
            return;
        }
        for (int v = u + 1; v < n; ++v) {
            if (partner[v] == -1 && d.at(u, v) >= 0) {
                partner[u] = v;
                partner[v] = u;
                self(self, weight + d.at(u, v));
                partner[u] = partner[v] = -1;
            }
        }
        if (d.boundary[u] >= 0) {
            partner[u] = n;
            self(self, weight + d.boundary[u]);
            partner[u] = -1;
        }
    };
    recurse(recurse, 0);
    if (best.empty() && n > 0) {
        throw UnmatchableError("no perfect matching exists");
    }
    return to_matching(d, best);
}

}  // namespace tcq
