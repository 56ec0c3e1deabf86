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

#ifndef TCQ_MATCHPREP_H
#define TCQ_MATCHPREP_H

#include <array>
#include <vector>

#include "tcq/lattice.h"
#include "tcq/matcher.h"
#include "tcq/syndrome.h"

namespace tcq {

/// Half-open box in cell-index space, [lo, hi) on every axis.
struct Box {
    std::array<int, 3> lo{};
    std::array<int, 3> hi{};

    bool contains(int i, int j, int t) const {
        return i >= lo[0] && i < hi[0] && j >= lo[1] && j < hi[1] && t >= lo[2] && t < hi[2];
    }
    bool contains(const CellCoord& c) const { return contains(c.i, c.j, c.t); }
    bool empty() const { return lo[0] >= hi[0] || lo[1] >= hi[1] || lo[2] >= hi[2]; }
    /// Grows every face outward by r.
    Box dilated(int r) const;
    /// Intersection with another box.
    Box clipped(const Box& other) const;
    bool operator==(const Box&) const = default;
};

/// 8-way spatial subdivision over integer points. Points carry no kind; the
/// caller filters.
class OctreeIndex {
public:
    explicit OctreeIndex(std::vector<std::array<int, 3>> points, int leaf_size = 8);

    /// Indices (into the constructor's vector) of the points inside `box`,
    /// ascending.
    std::vector<int> query(const Box& box) const;
    /// Appends the same indices to `out` in traversal order (unsorted).
    void query_into(const Box& box, std::vector<int>& out) const;
    size_t size() const { return points_.size(); }
    int depth() const;

private:
    struct Node {
        std::array<int, 3> origin{};
        int extent = 1;  // power of two
        int begin = 0;
        int end = 0;
        int first_child = -1;  // eight consecutive nodes
    };

    void build(int node, int leaf_size);
    void collect(int node, const Box& box, std::vector<int>& out) const;

    std::vector<std::array<int, 3>> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
};

/// Smallest L1 distance between the member cells of two events; -1 for events
/// of different kinds.
int event_distance(const DetectionEvent& a, const DetectionEvent& b);
/// Smallest boundary distance over the member cells of an event.
int event_boundary_distance(const LatticeDims& dims, const DetectionEvent& e);

/// m_e-bounded matching graph. Events of both kinds may share a graph; edges
/// never join different kinds. Events are held in ascending order of their
/// representative cell, which fixes node numbering independently of input
/// order.
struct MatchGraph {
    LatticeDims dims;
    int m_e = 0;
    std::vector<DetectionEvent> events;
    /// Weight of the event's edge to its own virtual boundary node, or -1 when
    /// the nearest face is farther than m_e.
    std::vector<int> boundary_weight;
    /// Event-event edges with u < v, sorted.
    std::vector<MatchEdge> edges;
};

MatchGraph build_bounded_graph(const LatticeDims& dims, std::vector<DetectionEvent> events,
                               int m_e);

/// Maximal connected sets of events, each sorted ascending, listed by first
/// member. Virtual boundary nodes never join components.
std::vector<std::vector<int>> connected_components(const MatchGraph& g);

/// Largest per-axis span of the member cells of a component. Throws
/// std::invalid_argument on an empty component.
int component_extent(const MatchGraph& g, const std::vector<int>& component);

/// The matching problem induced by `component`, with local event numbering
/// following the order of `component`.
MatchingInstance component_instance(const MatchGraph& g, const std::vector<int>& component);

/// One interlaced processing region.
struct WindowTask {
    Box inner;
    /// Inner box dilated by n, clipped to the lattice.
    Box outer;
    /// Indices of the events whose representative cell lies in the outer box.
    std::vector<int> payload;
    /// Events in the outer box dilated by m_e but outside the outer box; a
    /// component reaching one of these is not closed inside the window.
    std::vector<int> halo;
};

/// Tiles cell-index space with inner boxes of edge n. `m_e` sizes the halo
/// (0 for none). Throws std::invalid_argument if n < 1 or n exceeds the
/// smallest lattice dimension.
std::vector<WindowTask> window_partition(const std::vector<DetectionEvent>& events,
                                         const LatticeDims& dims, int n, int m_e = 0);

}  // namespace tcq

#endif  // TCQ_MATCHPREP_H
