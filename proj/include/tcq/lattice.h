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

#ifndef TCQ_LATTICE_H
#define TCQ_LATTICE_H

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tcq {

// Geometry of the 3D cluster in doubled coordinates.
//
// A primal cell (i, j, t) is centred at (2i+1, 2j+1, 2t+1); a dual cell at
// (2i, 2j, 2t). Qubits sit at the midpoints between neighbouring centres of the
// same kind: a site with exactly one even coordinate is a face of two primal
// cells, a site with exactly two even coordinates is a face of two dual cells.
// The third axis is simulated time.
//
// The lattice is the box [0, 2nx] x [0, 2ny] x [0, 2nt]. Primal cells fill it
// (indices 0..n-1 per axis), dual cells are the interior ones (indices 1..n-1),
// so the dual lattice is a primal lattice of dims (n-1) shifted by one doubled
// unit. Every face of the box is a rough boundary for both kinds: a chain may
// terminate on it.

enum class CellKind : uint8_t { kPrimal = 0, kDual = 1 };

const char* to_string(CellKind kind);
char kind_letter(CellKind kind);
CellKind kind_from_letter(char c);

struct LatticeDims {
    int nx = 0;
    int ny = 0;
    int nt = 0;

    static LatticeDims cube(int n) { return {n, n, n}; }

    /// Throws std::invalid_argument unless every axis has at least 2 cells.
    void validate() const;
    int axis(int a) const { return a == 0 ? nx : (a == 1 ? ny : nt); }
    int64_t primal_cell_count() const { return int64_t{nx} * ny * nt; }
    std::string to_string() const;

    bool operator==(const LatticeDims&) const = default;
};

struct QubitSite {
    int x = 0;
    int y = 0;
    int z = 0;

    int coord(int a) const { return a == 0 ? x : (a == 1 ? y : z); }
    auto operator<=>(const QubitSite&) const = default;
};

struct CellCoord {
    int i = 0;
    int j = 0;
    int t = 0;
    CellKind kind = CellKind::kPrimal;

    int index(int a) const { return a == 0 ? i : (a == 1 ? j : t); }
    /// Centre of the cell in doubled coordinates.
    QubitSite center() const;
    auto operator<=>(const CellCoord&) const = default;
};

struct CellCoordHash {
    size_t operator()(const CellCoord& c) const;
};
struct QubitSiteHash {
    size_t operator()(const QubitSite& q) const;
};

/// Number of even coordinates of a doubled-coordinate point.
int even_count(const QubitSite& q);

/// Kind of cell a qubit is a face of. Throws std::invalid_argument when the
/// point has zero or three even coordinates (a cell centre, not a qubit).
CellKind site_kind(const QubitSite& q);

/// Smallest and largest valid cell index along an axis for the given kind.
int min_cell_index(CellKind kind);
int max_cell_index(const LatticeDims& dims, CellKind kind, int axis);

bool in_bounds(const LatticeDims& dims, const CellCoord& cell);
bool is_valid_site(const LatticeDims& dims, const QubitSite& q);

/// Inverse of CellCoord::center. The point must have all-odd or all-even
/// coordinates.
CellCoord cell_at_center(const QubitSite& center);

/// The six faces of a cell in the order -x, +x, -y, +y, -t, +t.
std::array<QubitSite, 6> cell_face_qubits(const LatticeDims& dims, const CellCoord& cell);

struct AdjacentCells {
    CellCoord first;
    /// Empty when the qubit lies on the lattice boundary.
    std::optional<CellCoord> second;
};

/// The same-kind cells sharing face q, lower cell first.
AdjacentCells qubit_adjacent_cells(const LatticeDims& dims, const QubitSite& q);

/// L1 distance in cell indices. Throws std::invalid_argument on a primal/dual
/// mix.
int cell_distance(const CellCoord& a, const CellCoord& b);

struct BoundaryFace {
    int axis = 0;
    bool high = false;
    bool operator==(const BoundaryFace&) const = default;
};

/// Number of faces a chain must cross to leave the lattice through `face`.
int boundary_distance(const LatticeDims& dims, const CellCoord& cell, BoundaryFace face);
/// Minimum over the six faces.
int boundary_distance(const LatticeDims& dims, const CellCoord& cell);
/// First face (order x-low, x-high, y-low, y-high, t-low, t-high) achieving the minimum.
BoundaryFace nearest_boundary(const LatticeDims& dims, const CellCoord& cell);

/// Qubit shared by two adjacent same-kind cells.
QubitSite shared_face(const CellCoord& a, const CellCoord& b);

/// Number of qubit sites of each kind, in closed form.
int64_t site_count(const LatticeDims& dims, CellKind kind);
int64_t site_count(const LatticeDims& dims);

/// Calls fn(QubitSite) for every valid site, z-major then y then x.
template <typename Fn>
void for_each_site(const LatticeDims& dims, Fn&& fn) {
    const int xmax = 2 * dims.nx;
    for (int z = 0; z <= 2 * dims.nt; ++z) {
        const bool z_even = (z & 1) == 0;
        const bool z_inner = z >= 2 && z <= 2 * dims.nt - 2;
        for (int y = 0; y <= 2 * dims.ny; ++y) {
            const bool y_even = (y & 1) == 0;
            const bool y_inner = y >= 2 && y <= 2 * dims.ny - 2;
            if (!y_even && !z_even) {
                // Only x-normal primal faces.
                for (int x = 0; x <= xmax; x += 2) {
                    fn(QubitSite{x, y, z});
                }
            } else if (y_even != z_even) {
                // Odd x: primal face. Even x: dual face when the even
                // in-plane coordinate is off the surface.
                const bool dual_ok = y_even ? y_inner : z_inner;
                for (int x = 1; x < xmax; ++x) {
                    if ((x & 1) != 0 || (dual_ok && x >= 2 && x <= xmax - 2)) {
                        fn(QubitSite{x, y, z});
                    }
                }
            } else if (y_inner && z_inner) {
                for (int x = 1; x < xmax; x += 2) {
                    fn(QubitSite{x, y, z});
                }
            }
        }
    }
}

/// Calls fn(CellCoord) for every in-bounds cell of the given kind, t-major.
template <typename Fn>
void for_each_cell(const LatticeDims& dims, CellKind kind, Fn&& fn) {
    const int lo = min_cell_index(kind);
    for (int t = lo; t <= max_cell_index(dims, kind, 2); ++t) {
        for (int j = lo; j <= max_cell_index(dims, kind, 1); ++j) {
            for (int i = lo; i <= max_cell_index(dims, kind, 0); ++i) {
                fn(CellCoord{i, j, t, kind});
            }
        }
    }
}

}  // namespace tcq

#endif  // TCQ_LATTICE_H
