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

#ifndef TCQ_MATCHER_H
#define TCQ_MATCHER_H

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tcq {

struct MatchEdge {
    int u = 0;
    int v = 0;
    int weight = 0;
    auto operator<=>(const MatchEdge&) const = default;
};

/// A matching problem over detection events. Each event with boundary access
/// owns one virtual node; virtual nodes pair with each other at zero cost, and
/// one extra free virtual node is added when needed to make the node count
/// even.
struct MatchingInstance {
    int num_events = 0;
    /// Event-event edges, u < v.
    std::vector<MatchEdge> edges;
    /// Per event: weight to its virtual boundary node, or -1 for none.
    std::vector<int> boundary;
};

inline constexpr int kBoundary = -1;

struct MatchedPair {
    int a = 0;
    /// Partner event (> a) or kBoundary.
    int b = kBoundary;
    int weight = 0;
    auto operator<=>(const MatchedPair&) const = default;
};

/// Pairs sorted by first event. Among minimum-weight matchings the returned
/// one has the lexicographically smallest pair list, with the boundary
/// ordered after every event.
struct Matching {
    std::vector<MatchedPair> pairs;
    int64_t total_weight = 0;
    bool operator==(const Matching&) const = default;
};

class UnmatchableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact minimum-weight perfect matching (blossom algorithm). Throws
/// UnmatchableError when no perfect matching exists.
Matching minimum_weight_matching(const MatchingInstance& instance);

/// Exhaustive search over all pairings. Throws std::invalid_argument for more
/// than 12 events and UnmatchableError when nothing is feasible.
Matching brute_force_matching(const MatchingInstance& instance);

/// Throws std::invalid_argument describing the first malformed entry.
void validate(const MatchingInstance& instance);

}  // namespace tcq

#endif  // TCQ_MATCHER_H
