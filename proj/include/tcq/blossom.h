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

#ifndef TCQ_BLOSSOM_H
#define TCQ_BLOSSOM_H

#include <cstdint>
#include <vector>

namespace tcq {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    int64_t weight = 0;
};

struct BlossomResult {
    /// mate[v] is the vertex matched to v, or -1.
    std::vector<int> mate;
    /// Per input edge, its reduced cost under the final dual solution
    /// (blossom duals included). Zero on every edge of every optimal matching.
    std::vector<int64_t> reduced_cost;
};

/// Maximum-weight matching on a general graph with integer weights, after
/// Edmonds' primal-dual blossom method in the O(n^3) formulation of Galil.
/// With max_cardinality set, the weight is maximised among matchings of
/// maximum cardinality.
BlossomResult max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                  bool max_cardinality);

}  // namespace tcq

#endif  // TCQ_BLOSSOM_H
