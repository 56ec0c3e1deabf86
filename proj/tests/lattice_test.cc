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

#include <random>
#include <map>
#include <set>

#include "tcq/lattice.h"

namespace tcq {
namespace {

int evens(int x, int y, int z) { return (x % 2 == 0) + (y % 2 == 0) + (z % 2 == 0); }

TEST(Lattice, PrimalFaceQubits) {
    const auto faces = cell_face_qubits(LatticeDims::cube(4), {0, 0, 0, CellKind::kPrimal});
    const std::set<QubitSite> got(faces.begin(), faces.end());
    const std::set<QubitSite> want = {{0, 1, 1}, {2, 1, 1}, {1, 0, 1},
                                      {1, 2, 1}, {1, 1, 0}, {1, 1, 2}};
    EXPECT_EQ(got, want);
}

TEST(Lattice, DualFaceQubits) {
    const auto faces = cell_face_qubits(LatticeDims::cube(4), {1, 1, 1, CellKind::kDual});
    const std::set<QubitSite> got(faces.begin(), faces.end());
    const std::set<QubitSite> want = {{1, 2, 2}, {3, 2, 2}, {2, 1, 2},
                                      {2, 3, 2}, {2, 2, 1}, {2, 2, 3}};
    EXPECT_EQ(got, want);
}

TEST(Lattice, FacesDistinctAndOpposedPairsTwoApart) {
    const LatticeDims dims = LatticeDims::cube(5);
    for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
        for_each_cell(dims, kind, [&](const CellCoord& c) {
            const auto f = cell_face_qubits(dims, c);
            EXPECT_EQ(std::set<QubitSite>(f.begin(), f.end()).size(), 6u);
            for (int k = 0; k < 6; k += 2) {
                const int d = std::abs(f[k].x - f[k + 1].x) + std::abs(f[k].y - f[k + 1].y) +
                              std::abs(f[k].z - f[k + 1].z);
                EXPECT_EQ(d, 2);
            }
            for (const QubitSite& q : f) {
                EXPECT_EQ(site_kind(q), kind);
            }
        });
    }
}

TEST(Lattice, FaceOfOutOfRangeCellThrows) {
    const LatticeDims dims = LatticeDims::cube(4);
    EXPECT_THROW(cell_face_qubits(dims, {4, 0, 0, CellKind::kPrimal}), std::out_of_range);
    EXPECT_THROW(cell_face_qubits(dims, {0, 1, 1, CellKind::kDual}), std::out_of_range);
}

TEST(Lattice, AdjacentCells) {
    const LatticeDims dims = LatticeDims::cube(4);
    const AdjacentCells inner = qubit_adjacent_cells(dims, {2, 1, 1});
    EXPECT_EQ(inner.first, (CellCoord{0, 0, 0, CellKind::kPrimal}));
    ASSERT_TRUE(inner.second);
    EXPECT_EQ(*inner.second, (CellCoord{1, 0, 0, CellKind::kPrimal}));

    const AdjacentCells edge = qubit_adjacent_cells(dims, {0, 1, 1});
    EXPECT_EQ(edge.first, (CellCoord{0, 0, 0, CellKind::kPrimal}));
    EXPECT_FALSE(edge.second);

    EXPECT_THROW(qubit_adjacent_cells(dims, {1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(qubit_adjacent_cells(dims, {2, 2, 2}), std::invalid_argument);
}

TEST(Lattice, InteriorQubitsJoinCellsAtDistanceOne) {
    const LatticeDims dims = LatticeDims::cube(4);
    int interior = 0;
    for_each_site(dims, [&](const QubitSite& q) {
        const AdjacentCells a = qubit_adjacent_cells(dims, q);
        if (a.second) {
            ++interior;
            EXPECT_EQ(cell_distance(a.first, *a.second), 1);
            EXPECT_EQ(shared_face(a.first, *a.second), q);
        }
    });
    EXPECT_GT(interior, 0);
}

TEST(Lattice, CellDistance) {
    const CellKind p = CellKind::kPrimal;
    EXPECT_EQ(cell_distance({0, 0, 0, p}, {0, 0, 1, p}), 1);
    EXPECT_EQ(cell_distance({1, 2, 3, p}, {4, 0, 3, p}), 5);
    EXPECT_EQ(cell_distance({1, 2, 3, p}, {1, 2, 3, p}), 0);
    EXPECT_THROW(cell_distance({1, 1, 1, p}, {1, 1, 1, CellKind::kDual}), std::invalid_argument);
}

TEST(Lattice, CellDistanceIsAMetric) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> u(0, 20);
    auto cell = [&] { return CellCoord{u(rng), u(rng), u(rng), CellKind::kPrimal}; };
    for (int k = 0; k < 1000; ++k) {
        const CellCoord a = cell(), b = cell(), c = cell();
        EXPECT_EQ(cell_distance(a, b), cell_distance(b, a));
        EXPECT_LE(cell_distance(a, c), cell_distance(a, b) + cell_distance(b, c));
        EXPECT_EQ(cell_distance(a, b) == 0, a == b);
    }
}

// Oracle: a point of the doubled box is a qubit when it has one or two even
// coordinates and is the face of at least one in-bounds cell of its kind.
int64_t brute_site_count(const LatticeDims& dims, CellKind want) {
    int64_t n = 0;
    for (int x = 0; x <= 2 * dims.nx; ++x) {
        for (int y = 0; y <= 2 * dims.ny; ++y) {
            for (int z = 0; z <= 2 * dims.nt; ++z) {
                const int e = evens(x, y, z);
                if (e == 0 || e == 3) {
                    continue;
                }
                const CellKind kind = e == 1 ? CellKind::kPrimal : CellKind::kDual;
                if (kind != want) {
                    continue;
                }
                // The off-parity coordinate is the normal; step it by one.
                const int target = kind == CellKind::kPrimal ? 1 : 0;
                const int q[3] = {x, y, z};
                for (int a = 0; a < 3; ++a) {
                    if ((q[a] & 1) == target) {
                        continue;
                    }
                    bool found = false;
                    for (int s : {-1, 1}) {
                        int c[3] = {x, y, z};
                        c[a] += s;
                        const int lo = kind == CellKind::kPrimal ? 1 : 2;
                        bool ok = true;
                        for (int b = 0; b < 3; ++b) {
                            const int hi = 2 * dims.axis(b) - (kind == CellKind::kPrimal ? 1 : 2);
                            ok = ok && c[b] >= lo && c[b] <= hi;
                        }
                        found = found || ok;
                    }
                    n += found ? 1 : 0;
                }
            }
        }
    }
    return n;
}

TEST(Lattice, SiteCountMatchesEnumeration) {
    for (const LatticeDims dims : {LatticeDims{2, 2, 2}, LatticeDims{3, 4, 5}, LatticeDims{6, 6, 6}}) {
        for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
            EXPECT_EQ(site_count(dims, kind), brute_site_count(dims, kind)) << dims.to_string();
        }
        int64_t visited = 0;
        std::set<QubitSite> seen;
        for_each_site(dims, [&](const QubitSite& q) {
            ++visited;
            seen.insert(q);
            EXPECT_TRUE(is_valid_site(dims, q));
        });
        EXPECT_EQ(visited, site_count(dims));
        EXPECT_EQ(static_cast<int64_t>(seen.size()), visited);
    }
}

TEST(Lattice, SixSitesPerCellPlusSurface) {
    // Primal faces: (n+1) n n per axis; dual faces: (n-1)... per axis. The
    // bulk term is 6 n^3 and the rest is surface.
    for (int n = 2; n <= 12; ++n) {
        const LatticeDims dims = LatticeDims::cube(n);
        const int64_t primal = 3LL * (n + 1) * n * n;
        const int64_t dual = 3LL * n * (n - 1) * (n - 1);
        EXPECT_EQ(site_count(dims, CellKind::kPrimal), primal);
        EXPECT_EQ(site_count(dims, CellKind::kDual), dual);
        EXPECT_EQ(site_count(dims) - 6LL * n * n * n, 3LL * n - 3LL * n * n);
    }
}

TEST(Lattice, BoundaryFaceMembershipCounts) {
    // Summed over primal cells, every one-even site is counted twice in the
    // interior and once on the surface.
    const LatticeDims dims{3, 4, 2};
    std::map<QubitSite, int> uses;
    for_each_cell(dims, CellKind::kPrimal, [&](const CellCoord& c) {
        for (const QubitSite& q : cell_face_qubits(dims, c)) {
            ++uses[q];
        }
    });
    for (const auto& [q, k] : uses) {
        const bool surface = q.x == 0 || q.y == 0 || q.z == 0 || q.x == 2 * dims.nx ||
                             q.y == 2 * dims.ny || q.z == 2 * dims.nt;
        EXPECT_EQ(k, surface ? 1 : 2);
    }
    EXPECT_EQ(static_cast<int64_t>(uses.size()), site_count(dims, CellKind::kPrimal));
}

TEST(Lattice, BoundaryDistance) {
    const LatticeDims dims = LatticeDims::cube(10);
    EXPECT_EQ(boundary_distance(dims, {0, 5, 5, CellKind::kPrimal}), 1);
    EXPECT_EQ(boundary_distance(dims, {4, 4, 4, CellKind::kPrimal}), 5);
    EXPECT_EQ(boundary_distance(dims, {1, 5, 5, CellKind::kDual}), 1);
    EXPECT_EQ(nearest_boundary(dims, {9, 5, 5, CellKind::kPrimal}), (BoundaryFace{0, true}));
}

TEST(Lattice, DimsValidate) {
    EXPECT_THROW((LatticeDims{1, 4, 4}).validate(), std::invalid_argument);
    EXPECT_NO_THROW((LatticeDims{2, 2, 2}).validate());
}

}  // namespace
}  // namespace tcq
