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

#include "tcq/lattice.h"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "tcq/hash.h"

namespace tcq {

const char* to_string(CellKind kind) {
    return kind == CellKind::kPrimal ? "primal" : "dual";
}

char kind_letter(CellKind kind) {
    return kind == CellKind::kPrimal ? 'p' : 'd';
}

CellKind kind_from_letter(char c) {
    if (c == 'p') {
        return CellKind::kPrimal;
    }
    if (c == 'd') {
        return CellKind::kDual;
    }
    throw std::invalid_argument(std::string("unknown cell kind '") + c + "'");
}

void LatticeDims::validate() const {
    if (nx < 2 || ny < 2 || nt < 2) {
        throw std::invalid_argument("lattice dims must be at least 2 per axis, got " + to_string());
    }
    if (nx > 100000 || ny > 100000 || nt > 100000) {
        throw std::invalid_argument("lattice dims too large: " + to_string());
    }
}

std::string LatticeDims::to_string() const {
    return std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nt);
}

QubitSite CellCoord::center() const {
    const int off = kind == CellKind::kPrimal ? 1 : 0;
    return {2 * i + off, 2 * j + off, 2 * t + off};
}

size_t CellCoordHash::operator()(const CellCoord& c) const {
    return static_cast<size_t>(
        hash_combine(static_cast<uint64_t>(c.kind), pack_coords(c.i, c.j, c.t)));
}

size_t QubitSiteHash::operator()(const QubitSite& q) const {
    return static_cast<size_t>(splitmix64(pack_coords(q.x, q.y, q.z)));
}

namespace {

bool is_even(int v) {
    return (v & 1) == 0;
}

}  // namespace

int even_count(const QubitSite& q) {
    return static_cast<int>(is_even(q.x)) + static_cast<int>(is_even(q.y)) +
           static_cast<int>(is_even(q.z));
}

CellKind site_kind(const QubitSite& q) {
    switch (even_count(q)) {
        case 1:
            return CellKind::kPrimal;
        case 2:
            return CellKind::kDual;
        default:
            throw std::invalid_argument("(" + std::to_string(q.x) + "," + std::to_string(q.y) +
                                        "," + std::to_string(q.z) +
                                        ") is a cell centre, not a qubit site");
    }
}

int min_cell_index(CellKind kind) {
    return kind == CellKind::kPrimal ? 0 : 1;
}

int max_cell_index(const LatticeDims& dims, CellKind, int axis) {
    return dims.axis(axis) - 1;
}

bool in_bounds(const LatticeDims& dims, const CellCoord& cell) {
    const int lo = min_cell_index(cell.kind);
    for (int a = 0; a < 3; ++a) {
        const int v = cell.index(a);
        if (v < lo || v > max_cell_index(dims, cell.kind, a)) {
            return false;
        }
    }
    return true;
}

bool is_valid_site(const LatticeDims& dims, const QubitSite& q) {
    const int evens = even_count(q);
    if (evens == 1) {
        for (int a = 0; a < 3; ++a) {
            const int v = q.coord(a);
            if (v < 0 || v > 2 * dims.axis(a)) {
                return false;
            }
        }
        return true;
    }
    if (evens == 2) {
        for (int a = 0; a < 3; ++a) {
            const int v = q.coord(a);
            if (is_even(v)) {
                if (v < 2 || v > 2 * dims.axis(a) - 2) {
                    return false;
                }
            } else if (v < 1 || v > 2 * dims.axis(a) - 1) {
                return false;
            }
        }
        return true;
    }
    return false;
}

CellCoord cell_at_center(const QubitSite& c) {
    const int evens = even_count(c);
    if (evens == 0) {
        return {(c.x - 1) / 2, (c.y - 1) / 2, (c.z - 1) / 2, CellKind::kPrimal};
    }
    if (evens == 3) {
        return {c.x / 2, c.y / 2, c.z / 2, CellKind::kDual};
    }
    throw std::invalid_argument("point is a qubit site, not a cell centre");
}

std::array<QubitSite, 6> cell_face_qubits(const LatticeDims& dims, const CellCoord& cell) {
    if (!in_bounds(dims, cell)) {
        throw std::out_of_range("cell (" + std::to_string(cell.i) + "," + std::to_string(cell.j) +
                                "," + std::to_string(cell.t) + ") outside lattice " +
                                dims.to_string());
    }
    const QubitSite c = cell.center();
    return {{{c.x - 1, c.y, c.z},
             {c.x + 1, c.y, c.z},
             {c.x, c.y - 1, c.z},
             {c.x, c.y + 1, c.z},
             {c.x, c.y, c.z - 1},
             {c.x, c.y, c.z + 1}}};
}

AdjacentCells qubit_adjacent_cells(const LatticeDims& dims, const QubitSite& q) {
    const CellKind kind = site_kind(q);
    if (!is_valid_site(dims, q)) {
        throw std::out_of_range("qubit site outside lattice " + dims.to_string());
    }
    // The face normal is the odd-one-out axis: the even coordinate of a primal
    // face, the odd coordinate of a dual face.
    int normal = 0;
    for (int a = 0; a < 3; ++a) {
        const bool even = is_even(q.coord(a));
        if ((kind == CellKind::kPrimal) == even) {
            normal = a;
        }
    }
    QubitSite lo = q;
    QubitSite hi = q;
    (normal == 0 ? lo.x : normal == 1 ? lo.y : lo.z) -= 1;
    (normal == 0 ? hi.x : normal == 1 ? hi.y : hi.z) += 1;
    const CellCoord a = cell_at_center(lo);
    const CellCoord b = cell_at_center(hi);
    const bool a_in = in_bounds(dims, a);
    const bool b_in = in_bounds(dims, b);
    if (a_in && b_in) {
        return {a, b};
    }
    return {a_in ? a : b, std::nullopt};
}

int cell_distance(const CellCoord& a, const CellCoord& b) {
    if (a.kind != b.kind) {
        throw std::invalid_argument("cell_distance between primal and dual cells");
    }
    return std::abs(a.i - b.i) + std::abs(a.j - b.j) + std::abs(a.t - b.t);
}

int boundary_distance(const LatticeDims& dims, const CellCoord& cell, BoundaryFace face) {
    const int v = cell.index(face.axis);
    if (face.high) {
        return max_cell_index(dims, cell.kind, face.axis) - v + 1;
    }
    return v - min_cell_index(cell.kind) + 1;
}

int boundary_distance(const LatticeDims& dims, const CellCoord& cell) {
    return boundary_distance(dims, cell, nearest_boundary(dims, cell));
}

BoundaryFace nearest_boundary(const LatticeDims& dims, const CellCoord& cell) {
    BoundaryFace best{0, false};
    int best_d = boundary_distance(dims, cell, best);
    for (int a = 0; a < 3; ++a) {
        for (bool high : {false, true}) {
            const int d = boundary_distance(dims, cell, {a, high});
            if (d < best_d) {
                best_d = d;
                best = {a, high};
            }
        }
    }
    return best;
}

QubitSite shared_face(const CellCoord& a, const CellCoord& b) {
    if (cell_distance(a, b) != 1) {
        throw std::invalid_argument("cells are not adjacent");
    }
    const QubitSite ca = a.center();
    const QubitSite cb = b.center();
    return {(ca.x + cb.x) / 2, (ca.y + cb.y) / 2, (ca.z + cb.z) / 2};
}

int64_t site_count(const LatticeDims& dims, CellKind kind) {
    const int64_t nx = dims.nx;
    const int64_t ny = dims.ny;
    const int64_t nt = dims.nt;
    if (kind == CellKind::kPrimal) {
        return (nx + 1) * ny * nt + nx * (ny + 1) * nt + nx * ny * (nt + 1);
    }
    return nx * (ny - 1) * (nt - 1) + (nx - 1) * ny * (nt - 1) + (nx - 1) * (ny - 1) * nt;
}

int64_t site_count(const LatticeDims& dims) {
    return site_count(dims, CellKind::kPrimal) + site_count(dims, CellKind::kDual);
}

}  // namespace tcq
