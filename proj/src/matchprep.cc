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

#include "tcq/matchprep.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tcq {

Box Box::dilated(int r) const {
    Box b = *this;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] -= r;
        b.hi[a] += r;
    }
    return b;
}

Box Box::clipped(const Box& other) const {
    Box b;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] = std::max(lo[a], other.lo[a]);
        b.hi[a] = std::min(hi[a], other.hi[a]);
    }
    return b;
}

OctreeIndex::OctreeIndex(std::vector<std::array<int, 3>> points, int leaf_size)
    : points_(std::move(points)), order_(points_.size()) {
    if (leaf_size < 1) {
        throw std::invalid_argument("octree leaf size must be positive");
    }
    std::iota(order_.begin(), order_.end(), 0);
    if (points_.empty()) {
        return;
    }
    Node root;
    std::array<int, 3> lo = points_[0];
    std::array<int, 3> hi = points_[0];
    for (const auto& p : points_) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int span = 1;
    for (int a = 0; a < 3; ++a) {
        while (lo[a] + span <= hi[a]) {
            span *= 2;
        }
    }
    root.origin = lo;
    root.extent = span;
    root.begin = 0;
    root.end = static_cast<int>(points_.size());
    nodes_.push_back(root);
    build(0, leaf_size);
}

void OctreeIndex::build(int node, int leaf_size) {
    const Node n = nodes_[node];
    if (n.end - n.begin <= leaf_size || n.extent == 1) {
        return;
    }
    const int half = n.extent / 2;
    auto octant = [&](int id) {
        const auto& p = points_[id];
        return (p[0] >= n.origin[0] + half ? 1 : 0) | (p[1] >= n.origin[1] + half ? 2 : 0) |
               (p[2] >= n.origin[2] + half ? 4 : 0);
    };
    std::stable_sort(order_.begin() + n.begin, order_.begin() + n.end,
                     [&](int a, int b) { return octant(a) < octant(b); });
    const int first = static_cast<int>(nodes_.size());
    nodes_[node].first_child = first;
    int cursor = n.begin;
    for (int o = 0; o < 8; ++o) {
        Node child;
        child.origin = {n.origin[0] + ((o & 1) ? half : 0), n.origin[1] + ((o & 2) ? half : 0),
                        n.origin[2] + ((o & 4) ? half : 0)};
        child.extent = half;
        child.begin = cursor;
        while (cursor < n.end && octant(order_[cursor]) == o) {
            ++cursor;
        }
        child.end = cursor;
        nodes_.push_back(child);
    }
    for (int o = 0; o < 8; ++o) {
        build(first + o, leaf_size);
    }
}

void OctreeIndex::collect(int node, const Box& box, std::vector<int>& out) const {
    const Node& n = nodes_[node];
    if (n.begin == n.end) {
        return;
    }
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
        const int lo = n.origin[a];
        const int hi = n.origin[a] + n.extent;
        if (hi <= box.lo[a] || lo >= box.hi[a]) {
            return;
        }
        inside = inside && lo >= box.lo[a] && hi <= box.hi[a];
    }
    if (inside) {
        out.insert(out.end(), order_.begin() + n.begin, order_.begin() + n.end);
        return;
    }
    if (n.first_child < 0) {
        for (int k = n.begin; k < n.end; ++k) {
            const auto& p = points_[order_[k]];
            if (box.contains(p[0], p[1], p[2])) {
                out.push_back(order_[k]);
            }
        }
        return;
    }
    for (int o = 0; o < 8; ++o) {
        collect(n.first_child + o, box, out);
    }
}

std::vector<int> OctreeIndex::query(const Box& box) const {
    std::vector<int> out;
    query_into(box, out);
    std::sort(out.begin(), out.end());
    return out;
}

void OctreeIndex::query_into(const Box& box, std::vector<int>& out) const {
    if (!nodes_.empty()) {
        collect(0, box, out);
    }
}

int OctreeIndex::depth() const {
    int deepest = 0;
    std::vector<std::pair<int, int>> stack;
    if (!nodes_.empty()) {
        stack.emplace_back(0, 1);
    }
    while (!stack.empty()) {
        auto [node, level] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, level);
        if (nodes_[node].first_child >= 0) {
            for (int o = 0; o < 8; ++o) {
                stack.emplace_back(nodes_[node].first_child + o, level + 1);
            }
        }
    }
    return deepest;
}

int event_distance(const DetectionEvent& a, const DetectionEvent& b) {
    if (a.cell.kind != b.cell.kind) {
        return -1;
    }
    if (a.supercell_members.empty() && b.supercell_members.empty()) {
        return cell_distance(a.cell, b.cell);
    }
    int best = std::numeric_limits<int>::max();
    for (const CellCoord& x : a.members()) {
        for (const CellCoord& y : b.members()) {
            best = std::min(best, cell_distance(x, y));
        }
    }
    return best;
}

int event_boundary_distance(const LatticeDims& dims, const DetectionEvent& e) {
    if (e.supercell_members.empty()) {
        return boundary_distance(dims, e.cell);
    }
    int best = std::numeric_limits<int>::max();
    for (const CellCoord& c : e.supercell_members) {
        best = std::min(best, boundary_distance(dims, c));
    }
    return best;
}

MatchGraph build_bounded_graph(const LatticeDims& dims, std::vector<DetectionEvent> events,
                               int m_e) {
    if (m_e < 1) {
        throw std::invalid_argument("m_e must be at least 1");
    }
    std::sort(events.begin(), events.end(),
              [](const DetectionEvent& a, const DetectionEvent& b) { return a.cell < b.cell; });
    MatchGraph g;
    g.dims = dims;
    g.m_e = m_e;
    g.events = std::move(events);
    const int n = static_cast<int>(g.events.size());
    g.boundary_weight.resize(n);

    std::vector<std::array<int, 3>> points;
    std::vector<int> owner;
    for (int e = 0; e < n; ++e) {
        const int bd = event_boundary_distance(dims, g.events[e]);
        g.boundary_weight[e] = bd <= m_e ? bd : -1;
        for (const CellCoord& c : g.events[e].members()) {
            points.push_back({c.i, c.j, c.t});
            owner.push_back(e);
        }
    }
    const OctreeIndex index(points);
    std::vector<int> near;
    for (int e = 0; e < n; ++e) {
        near.clear();
        auto gather = [&](const CellCoord& c) {
            const Box ball{{c.i - m_e, c.j - m_e, c.t - m_e},
                           {c.i + m_e + 1, c.j + m_e + 1, c.t + m_e + 1}};
            const size_t from = near.size();
            index.query_into(ball, near);
            size_t keep = from;
            for (size_t k = from; k < near.size(); ++k) {
                if (owner[near[k]] > e) {
                    near[keep++] = owner[near[k]];
                }
            }
            near.resize(keep);
        };
        if (g.events[e].supercell_members.empty()) {
            gather(g.events[e].cell);
        } else {
            for (const CellCoord& c : g.events[e].supercell_members) {
                gather(c);
            }
        }
        std::sort(near.begin(), near.end());
        near.erase(std::unique(near.begin(), near.end()), near.end());
        for (int f : near) {
            const int w = event_distance(g.events[e], g.events[f]);
            if (w >= 0 && w <= m_e) {
                g.edges.push_back({e, f, w});
            }
        }
    }
    return g;
}

std::vector<std::vector<int>> connected_components(const MatchGraph& g) {
    const int n = static_cast<int>(g.events.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const MatchEdge& e : g.edges) {
        const int a = find(e.u);
        const int b = find(e.v);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::vector<int>> out;
    std::vector<int> slot(n, -1);
    for (int v = 0; v < n; ++v) {
        const int r = find(v);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[slot[r]].push_back(v);
    }
    return out;
}

int component_extent(const MatchGraph& g, const std::vector<int>& component) {
    if (component.empty()) {
        throw std::invalid_argument("component_extent of an empty component");
    }
    std::array<int, 3> lo{};
    std::array<int, 3> hi{};
    bool first = true;
    for (int e : component) {
        for (const CellCoord& c : g.events.at(e).members()) {
            for (int a = 0; a < 3; ++a) {
                const int v = c.index(a);
                lo[a] = first ? v : std::min(lo[a], v);
                hi[a] = first ? v : std::max(hi[a], v);
            }
            first = false;
        }
    }
    return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
}

MatchingInstance component_instance(const MatchGraph& g, const std::vector<int>& component) {
    MatchingInstance inst;
    inst.num_events = static_cast<int>(component.size());
    std::vector<int> local(g.events.size(), -1);
    for (size_t k = 0; k < component.size(); ++k) {
        local[component[k]] = static_cast<int>(k);
        inst.boundary.push_back(g.boundary_weight[component[k]]);
    }
    for (const MatchEdge& e : g.edges) {
        const int a = local[e.u];
        const int b = local[e.v];
        if (a >= 0 && b >= 0) {
            inst.edges.push_back({std::min(a, b), std::max(a, b), e.weight});
        }
    }
    std::sort(inst.edges.begin(), inst.edges.end());
    return inst;
}

std::vector<WindowTask> window_partition(const std::vector<DetectionEvent>& events,
                                         const LatticeDims& dims, int n, int m_e) {
    dims.validate();
    if (n < 1) {
        throw std::invalid_argument("window edge n must be at least 1");
    }
    if (n > std::min({dims.nx, dims.ny, dims.nt})) {
        throw std::invalid_argument("window edge n exceeds the smallest lattice dimension");
    }
    if (m_e < 0) {
        throw std::invalid_argument("halo width must be non-negative");
    }
    const Box lattice{{0, 0, 0}, {dims.nx, dims.ny, dims.nt}};
    std::vector<std::array<int, 3>> points;
    points.reserve(events.size());
    for (const DetectionEvent& e : events) {
        points.push_back({e.cell.i, e.cell.j, e.cell.t});
    }
    const OctreeIndex index(points);
    // Merged checks reach beyond their representative cell.
    int reach = 0;
    for (const DetectionEvent& e : events) {
        for (const CellCoord& c : e.supercell_members) {
            reach = std::max(reach, cell_distance(c, e.cell));
        }
    }

    std::vector<WindowTask> tasks;
    for (int t0 = 0; t0 < dims.nt; t0 += n) {
        for (int j0 = 0; j0 < dims.ny; j0 += n) {
            for (int i0 = 0; i0 < dims.nx; i0 += n) {
                WindowTask task;
                task.inner = Box{{i0, j0, t0}, {i0 + n, j0 + n, t0 + n}}.clipped(lattice);
                task.outer = task.inner.dilated(n).clipped(lattice);
                task.payload = index.query(task.outer);
                if (m_e > 0) {
                    for (int id : index.query(task.outer.dilated(m_e + 2 * reach))) {
                        if (!task.outer.contains(events[id].cell)) {
                            task.halo.push_back(id);
                        }
                    }
                }
                tasks.push_back(std::move(task));
            }
        }
    }
    return tasks;
}

}  // namespace tcq
