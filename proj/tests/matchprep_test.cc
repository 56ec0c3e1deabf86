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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <random>
#include <set>

#include "tcq/matchprep.h"

namespace tcq {
namespace {

DetectionEvent ev(int i, int j, int t, CellKind k = CellKind::kPrimal) { return {{i, j, t, k}, {}}; }

std::vector<DetectionEvent> random_events(std::mt19937_64& rng, const LatticeDims& dims, int count,
                                          bool both_kinds = false) {
    std::set<CellCoord> cells;
    while (static_cast<int>(cells.size()) < count) {
        const CellKind k = both_kinds && rng() % 2 ? CellKind::kDual : CellKind::kPrimal;
        const int lo = min_cell_index(k);
        CellCoord c{0, 0, 0, k};
        c.i = lo + static_cast<int>(rng() % (max_cell_index(dims, k, 0) - lo + 1));
        c.j = lo + static_cast<int>(rng() % (max_cell_index(dims, k, 1) - lo + 1));
        c.t = lo + static_cast<int>(rng() % (max_cell_index(dims, k, 2) - lo + 1));
        cells.insert(c);
    }
    std::vector<DetectionEvent> out;
    for (const CellCoord& c : cells) {
        out.push_back({c, {}});
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

TEST(Octree, RangeQueryEqualsLinearScan) {
    std::mt19937_64 rng(1);
    for (int set = 0; set < 20; ++set) {
        std::vector<std::array<int, 3>> pts;
        const int n = static_cast<int>(rng() % 300);
        for (int p = 0; p < n; ++p) {
            pts.push_back({static_cast<int>(rng() % 40), static_cast<int>(rng() % 40),
                           static_cast<int>(rng() % 40)});
        }
        const OctreeIndex index(pts, 1 + static_cast<int>(rng() % 8));
        for (int k = 0; k < 500; ++k) {
            Box b;
            for (int a = 0; a < 3; ++a) {
                const int x = static_cast<int>(rng() % 44) - 2;
                const int y = static_cast<int>(rng() % 44) - 2;
                b.lo[a] = std::min(x, y);
                b.hi[a] = std::max(x, y) + 1;
            }
            std::vector<int> want;
            for (int p = 0; p < n; ++p) {
                if (b.contains(pts[p][0], pts[p][1], pts[p][2])) {
                    want.push_back(p);
                }
            }
            ASSERT_EQ(index.query(b), want);
        }
    }
}

TEST(Octree, EveryPointRetrievable) {
    std::vector<std::array<int, 3>> pts = {{0, 0, 0}, {5, 5, 5}, {5, 5, 5}, {100, 2, 7}};
    const OctreeIndex index(pts, 1);
    for (int p = 0; p < 4; ++p) {
        const Box b{{pts[p][0], pts[p][1], pts[p][2]}, {pts[p][0] + 1, pts[p][1] + 1, pts[p][2] + 1}};
        const auto got = index.query(b);
        EXPECT_NE(std::find(got.begin(), got.end(), p), got.end());
    }
    EXPECT_TRUE(OctreeIndex({}, 8).query(Box{{0, 0, 0}, {9, 9, 9}}).empty());
}

TEST(BoundedGraph, AdjacentPairHasUnitEdge) {
    const MatchGraph g = build_bounded_graph(LatticeDims::cube(20), {ev(0, 0, 0), ev(0, 0, 1)}, 4);
    ASSERT_EQ(g.edges.size(), 1u);
    EXPECT_EQ(g.edges[0].weight, 1);
}

TEST(BoundedGraph, FarPairHasNoEdge) {
    const MatchGraph g = build_bounded_graph(LatticeDims::cube(30), {ev(10, 10, 10), ev(10, 10, 19)}, 4);
    EXPECT_TRUE(g.edges.empty());
    EXPECT_EQ(g.boundary_weight, (std::vector<int>{-1, -1}));
    EXPECT_EQ(connected_components(g).size(), 2u);
}

TEST(BoundedGraph, RejectsNonPositiveEdgeBound) {
    EXPECT_THROW(build_bounded_graph(LatticeDims::cube(5), {}, 0), std::invalid_argument);
}

TEST(BoundedGraph, EdgesEqualAllPairsFilter) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10000; ++k) {
        const LatticeDims dims{3 + static_cast<int>(rng() % 10), 3 + static_cast<int>(rng() % 10),
                               3 + static_cast<int>(rng() % 10)};
        const int m_e = 1 + static_cast<int>(rng() % 6);
        const auto events = random_events(rng, dims, static_cast<int>(rng() % 12), true);
        const MatchGraph g = build_bounded_graph(dims, events, m_e);
        ASSERT_EQ(g.events.size(), events.size());
        std::set<std::tuple<CellCoord, CellCoord, int>> want, got;
        for (size_t a = 0; a < events.size(); ++a) {
            for (size_t b = 0; b < events.size(); ++b) {
                const CellCoord& x = events[a].cell;
                const CellCoord& y = events[b].cell;
                if (x < y && x.kind == y.kind && cell_distance(x, y) <= m_e) {
                    want.insert({x, y, cell_distance(x, y)});
                }
            }
        }
        for (const MatchEdge& e : g.edges) {
            ASSERT_LT(e.u, e.v);
            ASSERT_GE(e.weight, 1);
            ASSERT_LE(e.weight, m_e);
            got.insert({g.events[e.u].cell, g.events[e.v].cell, e.weight});
        }
        ASSERT_EQ(got, want);
        for (size_t a = 0; a < g.events.size(); ++a) {
            const int d = boundary_distance(dims, g.events[a].cell);
            ASSERT_EQ(g.boundary_weight[a], d <= m_e ? d : -1);
        }
    }
}

TEST(BoundedGraph, NodeOrderIndependentOfInput) {
    std::mt19937_64 rng(5);
    const LatticeDims dims = LatticeDims::cube(12);
    auto events = random_events(rng, dims, 30, true);
    const MatchGraph a = build_bounded_graph(dims, events, 4);
    std::reverse(events.begin(), events.end());
    const MatchGraph b = build_bounded_graph(dims, events, 4);
    EXPECT_EQ(a.events, b.events);
    EXPECT_EQ(a.edges, b.edges);
}

TEST(Components, Basics) {
    const LatticeDims dims = LatticeDims::cube(40);
    EXPECT_TRUE(connected_components(build_bounded_graph(dims, {}, 3)).empty());
    const auto two = connected_components(build_bounded_graph(dims, {ev(20, 20, 20), ev(20, 20, 24)}, 3));
    EXPECT_EQ(two.size(), 2u);
    std::vector<DetectionEvent> chain;
    for (int t = 10; t < 20; ++t) {
        chain.push_back(ev(15, 15, t));
    }
    EXPECT_EQ(connected_components(build_bounded_graph(dims, chain, 1)).size(), 1u);
}

TEST(Components, BoundaryDoesNotMerge) {
    // Both events touch the x-low face, far from each other.
    const LatticeDims dims = LatticeDims::cube(30);
    const MatchGraph g = build_bounded_graph(dims, {ev(0, 2, 2), ev(0, 20, 20)}, 3);
    EXPECT_EQ(connected_components(g).size(), 2u);
}

TEST(Components, PartitionMatchesUnionFindOracle) {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 300; ++k) {
        const LatticeDims dims = LatticeDims::cube(15);
        const auto events = random_events(rng, dims, 1 + static_cast<int>(rng() % 60), true);
        const MatchGraph g = build_bounded_graph(dims, events, 3);
        std::vector<int> parent(g.events.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        for (size_t a = 0; a < g.events.size(); ++a) {
            for (size_t b = a + 1; b < g.events.size(); ++b) {
                if (event_distance(g.events[a], g.events[b]) >= 0 &&
                    event_distance(g.events[a], g.events[b]) <= 3) {
                    parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
                }
            }
        }
        std::map<int, std::vector<int>> want;
        for (size_t a = 0; a < g.events.size(); ++a) {
            want[find(static_cast<int>(a))].push_back(static_cast<int>(a));
        }
        std::set<std::vector<int>> want_set;
        for (auto& [root, members] : want) {
            want_set.insert(members);
        }
        const auto got = connected_components(g);
        EXPECT_EQ(std::set<std::vector<int>>(got.begin(), got.end()), want_set);
        for (size_t c = 1; c < got.size(); ++c) {
            EXPECT_LT(got[c - 1].front(), got[c].front());
        }
    }
}

TEST(Components, Extent) {
    const LatticeDims dims = LatticeDims::cube(20);
    const MatchGraph g = build_bounded_graph(dims, {ev(5, 5, 5), ev(7, 6, 5), ev(15, 15, 15)}, 4);
    const auto comps = connected_components(g);
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(component_extent(g, comps[0]), 2);
    EXPECT_EQ(component_extent(g, comps[1]), 0);
    EXPECT_THROW(component_extent(g, {}), std::invalid_argument);
}

TEST(Components, InstanceUsesLocalNumbering) {
    const LatticeDims dims = LatticeDims::cube(20);
    const MatchGraph g = build_bounded_graph(dims, {ev(0, 5, 5), ev(1, 5, 5), ev(10, 10, 10)}, 2);
    const auto comps = connected_components(g);
    const MatchingInstance inst = component_instance(g, comps[0]);
    EXPECT_EQ(inst.num_events, 2);
    ASSERT_EQ(inst.edges.size(), 1u);
    EXPECT_EQ(inst.edges[0], (MatchEdge{0, 1, 1}));
    EXPECT_EQ(inst.boundary, (std::vector<int>{1, 2}));
}

TEST(Windows, InnerBoxesTileTheVolume) {
    const LatticeDims dims{25, 30, 17};
    const auto tasks = window_partition({}, dims, 8, 3);
    std::map<std::array<int, 3>, int> cover;
    for (const WindowTask& t : tasks) {
        EXPECT_TRUE(t.payload.empty());
        EXPECT_EQ(t.outer, t.inner.dilated(8).clipped(Box{{0, 0, 0}, {25, 30, 17}}));
        for (int i = t.inner.lo[0]; i < t.inner.hi[0]; ++i) {
            for (int j = t.inner.lo[1]; j < t.inner.hi[1]; ++j) {
                for (int k = t.inner.lo[2]; k < t.inner.hi[2]; ++k) {
                    ++cover[{i, j, k}];
                }
            }
        }
    }
    EXPECT_EQ(static_cast<int64_t>(cover.size()), dims.primal_cell_count());
    for (const auto& [cell, n] : cover) {
        ASSERT_EQ(n, 1);
    }
}

TEST(Windows, EventReachesEveryCoveringTask) {
    const LatticeDims dims = LatticeDims::cube(30);
    const auto tasks = window_partition({ev(5, 5, 5)}, dims, 10);
    int covering = 0;
    for (const WindowTask& t : tasks) {
        const bool in_outer = t.outer.contains(5, 5, 5);
        EXPECT_EQ(!t.payload.empty(), in_outer);
        covering += in_outer ? 1 : 0;
        if (t.inner.lo == std::array<int, 3>{0, 0, 0}) {
            EXPECT_EQ(t.payload, std::vector<int>{0});
        }
    }
    // Inner boxes [0,10) and [10,20) per axis have outer boxes covering 5.
    EXPECT_EQ(covering, 8);
}

TEST(Windows, StraddlingComponentGoesToTwoTasks) {
    const LatticeDims dims = LatticeDims::cube(30);
    const auto tasks = window_partition({ev(9, 15, 15), ev(10, 15, 15)}, dims, 10);
    int both_inner = 0;
    for (const WindowTask& t : tasks) {
        const bool has_inner = t.inner.contains(9, 15, 15) || t.inner.contains(10, 15, 15);
        const bool closed = t.outer.contains(9, 15, 15) && t.outer.contains(10, 15, 15);
        both_inner += has_inner && closed ? 1 : 0;
    }
    EXPECT_EQ(both_inner, 2);
}

TEST(Windows, SlidingReuseIsTwoThirds) {
    // Consecutive interior tasks along t share 2n of their 3n outer depth.
    const int n = 6;
    const LatticeDims dims{6, 6, 60};
    std::vector<DetectionEvent> events;
    for (int t = 0; t < 60; ++t) {
        events.push_back(ev(3, 3, t));
    }
    const auto tasks = window_partition(events, dims, n);
    for (size_t k = 2; k + 2 < tasks.size(); ++k) {
        const auto& a = tasks[k].payload;
        const auto& b = tasks[k + 1].payload;
        std::vector<int> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        EXPECT_EQ(a.size(), 3u * n);
        EXPECT_EQ(3 * common.size(), 2 * a.size());
    }
}

TEST(Windows, RejectsBadEdge) {
    EXPECT_THROW(window_partition({}, LatticeDims::cube(10), 0), std::invalid_argument);
    EXPECT_THROW(window_partition({}, LatticeDims::cube(10), 11), std::invalid_argument);
}

TEST(Windows, ComponentInducedSubgraphMatchesGlobal) {
    std::mt19937_64 rng(9);
    const LatticeDims dims = LatticeDims::cube(24);
    const int m_e = 3;
    for (int k = 0; k < 30; ++k) {
        const auto events = random_events(rng, dims, 120);
        const MatchGraph global = build_bounded_graph(dims, events, m_e);
        for (const WindowTask& t : window_partition(global.events, dims, 8, m_e)) {
            std::vector<DetectionEvent> local;
            for (int e : t.payload) {
                local.push_back(global.events[e]);
            }
            const MatchGraph g = build_bounded_graph(dims, local, m_e);
            for (const auto& comp : connected_components(global)) {
                bool closed = true;
                bool touches = false;
                for (int e : comp) {
                    closed = closed && t.outer.contains(global.events[e].cell);
                    touches = touches || t.inner.contains(global.events[e].cell);
                }
                if (!closed || !touches) {
                    continue;
                }
                const MatchingInstance want = component_instance(global, comp);
                bool found = false;
                for (const auto& lc : connected_components(g)) {
                    if (g.events[lc.front()] == global.events[comp.front()]) {
                        const MatchingInstance got = component_instance(g, lc);
                        EXPECT_EQ(got.edges, want.edges);
                        EXPECT_EQ(got.boundary, want.boundary);
                        found = true;
                    }
                }
                EXPECT_TRUE(found);
            }
        }
    }
}

}  // namespace
}  // namespace tcq
