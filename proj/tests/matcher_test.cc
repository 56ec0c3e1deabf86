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
#include <limits>
#include <random>

#include "tcq/blossom.h"
#include "tcq/matcher.h"

namespace tcq {
namespace {

constexpr int64_t kNone = std::numeric_limits<int64_t>::max();

// Oracle: every event pairs with an edge neighbour or, if it has boundary
// access, goes to the boundary. Virtual nodes absorb any parity.
int64_t oracle_weight(const MatchingInstance& inst) {
    const int n = inst.num_events;
    std::vector<std::vector<int>> w(n, std::vector<int>(n, -1));
    for (const MatchEdge& e : inst.edges) {
        w[e.u][e.v] = w[e.v][e.u] = e.weight;
    }
    std::vector<bool> used(n, false);
    std::function<int64_t(int)> go = [&](int a) -> int64_t {
        while (a < n && used[a]) {
            ++a;
        }
        if (a == n) {
            return 0;
        }
        used[a] = true;
        int64_t best = kNone;
        if (inst.boundary[a] >= 0) {
            const int64_t rest = go(a + 1);
            if (rest != kNone) {
                best = std::min(best, rest + inst.boundary[a]);
            }
        }
        for (int b = a + 1; b < n; ++b) {
            if (!used[b] && w[a][b] >= 0) {
                used[b] = true;
                const int64_t rest = go(a + 1);
                if (rest != kNone) {
                    best = std::min(best, rest + w[a][b]);
                }
                used[b] = false;
            }
        }
        used[a] = false;
        return best;
    };
    return go(0);
}

MatchingInstance line(const std::vector<int>& t, int m_e) {
    MatchingInstance inst;
    inst.num_events = static_cast<int>(t.size());
    inst.boundary.assign(t.size(), -1);
    for (size_t a = 0; a < t.size(); ++a) {
        for (size_t b = a + 1; b < t.size(); ++b) {
            const int d = std::abs(t[a] - t[b]);
            if (d <= m_e) {
                inst.edges.push_back({static_cast<int>(a), static_cast<int>(b), d});
            }
        }
    }
    return inst;
}

MatchingInstance random_instance(std::mt19937_64& rng, int n, bool boundary = true) {
    MatchingInstance inst;
    inst.num_events = n;
    for (int a = 0; a < n; ++a) {
        inst.boundary.push_back(boundary && rng() % 3 == 0 ? 1 + static_cast<int>(rng() % 6) : -1);
        for (int b = a + 1; b < n; ++b) {
            if (rng() % 2) {
                inst.edges.push_back({a, b, 1 + static_cast<int>(rng() % 6)});
            }
        }
    }
    return inst;
}

void check_structure(const MatchingInstance& inst, const Matching& m) {
    std::vector<int> seen(inst.num_events, 0);
    int64_t total = 0;
    for (const MatchedPair& p : m.pairs) {
        ++seen[p.a];
        if (p.b != kBoundary) {
            ++seen[p.b];
            EXPECT_LT(p.a, p.b);
        } else {
            EXPECT_EQ(p.weight, inst.boundary[p.a]);
        }
        total += p.weight;
    }
    EXPECT_EQ(total, m.total_weight);
    for (int s : seen) {
        EXPECT_EQ(s, 1);
    }
    EXPECT_TRUE(std::is_sorted(m.pairs.begin(), m.pairs.end()));
}

TEST(Matcher, SinglePair) {
    const Matching m = minimum_weight_matching(line({0, 1}, 4));
    ASSERT_EQ(m.pairs.size(), 1u);
    EXPECT_EQ(m.pairs[0], (MatchedPair{0, 1, 1}));
    EXPECT_EQ(m.total_weight, 1);
}

TEST(Matcher, CollinearFour) {
    const MatchingInstance inst = line({0, 2, 3, 5}, 10);
    const Matching m = minimum_weight_matching(inst);
    EXPECT_EQ(m.pairs, (std::vector<MatchedPair>{{0, 1, 2}, {2, 3, 2}}));
    EXPECT_EQ(m.total_weight, 4);
    EXPECT_EQ(brute_force_matching(inst), m);
}

TEST(Matcher, AvoidsGreedyTrap) {
    const Matching m = minimum_weight_matching(line({0, 2, 3, 6}, 10));
    EXPECT_EQ(m.total_weight, 5);
    EXPECT_EQ(m.pairs, (std::vector<MatchedPair>{{0, 1, 2}, {2, 3, 3}}));
}

TEST(Matcher, LoneEventGoesToBoundary) {
    MatchingInstance inst;
    inst.num_events = 1;
    inst.boundary = {2};
    const Matching m = minimum_weight_matching(inst);
    ASSERT_EQ(m.pairs.size(), 1u);
    EXPECT_EQ(m.pairs[0], (MatchedPair{0, kBoundary, 2}));
}

TEST(Matcher, OddWithoutBoundaryIsUnmatchable) {
    const MatchingInstance inst = line({0, 1, 2}, 4);
    EXPECT_THROW(minimum_weight_matching(inst), UnmatchableError);
    EXPECT_THROW(brute_force_matching(inst), UnmatchableError);
}

TEST(Matcher, EmptyInstance) {
    const Matching m = minimum_weight_matching(MatchingInstance{});
    EXPECT_TRUE(m.pairs.empty());
    EXPECT_EQ(m.total_weight, 0);
}

TEST(Matcher, ValidateRejectsMalformed) {
    MatchingInstance inst = line({0, 1}, 4);
    inst.edges.push_back({1, 0, 1});
    EXPECT_THROW(validate(inst), std::invalid_argument);
    inst = line({0, 1}, 4);
    inst.boundary.pop_back();
    EXPECT_THROW(validate(inst), std::invalid_argument);
    inst = line({0, 1}, 4);
    inst.edges[0].weight = -2;
    EXPECT_THROW(validate(inst), std::invalid_argument);
}

TEST(Matcher, BruteForceSizeLimit) {
    MatchingInstance inst;
    inst.num_events = 13;
    inst.boundary.assign(13, 1);
    EXPECT_THROW(brute_force_matching(inst), std::invalid_argument);
}

TEST(Matcher, BlossomEqualsOraclesOnRandomInstances) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 3000; ++k) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const MatchingInstance inst = random_instance(rng, n);
        const int64_t want = oracle_weight(inst);
        if (want == kNone) {
            EXPECT_THROW(minimum_weight_matching(inst), UnmatchableError);
            continue;
        }
        const Matching fast = minimum_weight_matching(inst);
        const Matching slow = brute_force_matching(inst);
        ASSERT_EQ(fast.total_weight, want);
        ASSERT_EQ(slow.total_weight, want);
        ASSERT_EQ(fast, slow);
        check_structure(inst, fast);
    }
}

TEST(Matcher, TieBreakIsLexicographic) {
    // Four events on a unit square: (01)(23) and (02)(13) both cost 2.
    MatchingInstance inst;
    inst.num_events = 4;
    inst.boundary.assign(4, -1);
    inst.edges = {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}};
    EXPECT_EQ(minimum_weight_matching(inst).pairs,
              (std::vector<MatchedPair>{{0, 1, 1}, {2, 3, 1}}));
}

TEST(Matcher, TranslationInvariance) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 200; ++k) {
        std::vector<int> t;
        for (int n = 0; n < 8; ++n) {
            t.push_back(static_cast<int>(rng() % 20));
        }
        std::vector<int> shifted = t;
        for (int& x : shifted) {
            x += 37;
        }
        const MatchingInstance a = line(t, 5), b = line(shifted, 5);
        if (oracle_weight(a) == kNone) {
            continue;
        }
        EXPECT_EQ(minimum_weight_matching(a).total_weight, minimum_weight_matching(b).total_weight);
    }
}

TEST(Matcher, MonotoneUnderEdgeRemovalAndBoundaryAddition) {
    std::mt19937_64 rng(14);
    for (int k = 0; k < 500; ++k) {
        MatchingInstance inst = random_instance(rng, 2 + static_cast<int>(rng() % 8));
        const int64_t base = oracle_weight(inst);
        if (base == kNone || inst.edges.empty()) {
            continue;
        }
        const int64_t w = minimum_weight_matching(inst).total_weight;
        MatchingInstance fewer = inst;
        fewer.edges.erase(fewer.edges.begin() + static_cast<long>(rng() % fewer.edges.size()));
        if (oracle_weight(fewer) != kNone) {
            EXPECT_GE(minimum_weight_matching(fewer).total_weight, w);
        }
        MatchingInstance more = inst;
        for (int& b : more.boundary) {
            if (b < 0) {
                b = 1 + static_cast<int>(rng() % 6);
                break;
            }
        }
        EXPECT_LE(minimum_weight_matching(more).total_weight, w);
    }
}

// Oracle for the general max-weight routine: best matching over all subsets.
int64_t brute_max_weight(int n, const std::vector<WeightedEdge>& edges, bool max_card,
                         int* best_card) {
    int64_t best = -1;
    int card_best = -1;
    std::vector<bool> used(n, false);
    std::function<void(size_t, int64_t, int)> go = [&](size_t e, int64_t w, int card) {
        if (e == edges.size()) {
            if ((max_card && (card > card_best || (card == card_best && w > best))) ||
                (!max_card && w > best)) {
                best = w;
                card_best = card;
            }
            return;
        }
        go(e + 1, w, card);
        const WeightedEdge& x = edges[e];
        if (!used[x.u] && !used[x.v]) {
            used[x.u] = used[x.v] = true;
            go(e + 1, w + x.weight, card + 1);
            used[x.u] = used[x.v] = false;
        }
    };
    go(0, 0, 0);
    *best_card = card_best;
    return best;
}

TEST(Blossom, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(15);
    for (int k = 0; k < 2000; ++k) {
        const int n = 1 + static_cast<int>(rng() % 8);
        std::vector<WeightedEdge> edges;
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (rng() % 3) {
                    edges.push_back({a, b, static_cast<int64_t>(rng() % 10)});
                }
            }
        }
        const bool max_card = rng() % 2;
        int card = 0;
        const int64_t want = brute_max_weight(n, edges, max_card, &card);
        const BlossomResult r = max_weight_matching(n, edges, max_card);
        ASSERT_EQ(r.reduced_cost.size(), edges.size());
        int64_t got = 0;
        int got_card = 0;
        for (size_t e = 0; e < edges.size(); ++e) {
            if (r.mate[edges[e].u] == edges[e].v) {
                got += edges[e].weight;
                ++got_card;
                EXPECT_EQ(r.reduced_cost[e], 0);
            }
        }
        for (int v = 0; v < n; ++v) {
            if (r.mate[v] >= 0) {
                EXPECT_EQ(r.mate[r.mate[v]], v);
            }
        }
        EXPECT_EQ(got, want);
        if (max_card) {
            EXPECT_EQ(got_card, card);
        }
    }
}

}  // namespace
}  // namespace tcq
