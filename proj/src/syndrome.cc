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

#include "tcq/syndrome.h"

#include <algorithm>
#include <iterator>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace tcq {

std::vector<CellCoord> DetectionEvent::members() const {
    if (supercell_members.empty()) {
        return {cell};
    }
    return supercell_members;
}

namespace {

int center_sheet(const CellCoord& c) {
    return c.center().z;
}

// Representative of a merged group: the member finalised last.
bool representative_less(const CellCoord& a, const CellCoord& b) {
    const int sa = center_sheet(a);
    const int sb = center_sheet(b);
    if (sa != sb) {
        return sa > sb;
    }
    return std::tie(a.j, a.i) < std::tie(b.j, b.i);
}

bool spans_lattice(const LatticeDims& dims, const std::vector<CellCoord>& cells) {
    if (cells.empty()) {
        return false;
    }
    const CellKind kind = cells.front().kind;
    for (int a = 0; a < 3; ++a) {
        int lo = cells.front().index(a);
        int hi = lo;
        for (const CellCoord& c : cells) {
            lo = std::min(lo, c.index(a));
            hi = std::max(hi, c.index(a));
        }
        if (lo == min_cell_index(kind) && hi == max_cell_index(dims, kind, a)) {
            return true;
        }
    }
    return false;
}

DetectionEvent make_group_event(std::vector<CellCoord> cells) {
    std::sort(cells.begin(), cells.end());
    const CellCoord rep = *std::min_element(cells.begin(), cells.end(), representative_less);
    if (cells.size() == 1) {
        return {rep, {}};
    }
    return {rep, std::move(cells)};
}

// Connected groups of cells joined through lost sites, one union-find per
// volume. Cells untouched by loss are not stored.
class LossGroups {
public:
    LossGroups(const LatticeDims& dims, const std::vector<QubitSite>& losses) {
        for (const QubitSite& q : losses) {
            const AdjacentCells adj = qubit_adjacent_cells(dims, q);
            const int a = node(adj.first);
            if (adj.second) {
                unite(a, node(*adj.second));
            } else {
                boundary_.push_back(a);
            }
        }
        std::vector<int> root_slot(parent_.size(), -1);
        for (size_t n = 0; n < parent_.size(); ++n) {
            const int r = find(static_cast<int>(n));
            if (root_slot[r] < 0) {
                root_slot[r] = static_cast<int>(groups_.size());
                groups_.emplace_back();
            }
            groups_[root_slot[r]].cells.push_back(cells_[n]);
            slot_of_cell_[cells_[n]] = root_slot[r];
        }
        for (int b : boundary_) {
            groups_[root_slot[find(b)]].touches_boundary = true;
        }
        for (auto& g : groups_) {
            std::sort(g.cells.begin(), g.cells.end());
            g.spans = spans_lattice(dims, g.cells);
        }
    }

    struct Group {
        std::vector<CellCoord> cells;
        bool touches_boundary = false;
        bool spans = false;
    };

    const std::vector<Group>& groups() const { return groups_; }

    std::optional<int> group_of(const CellCoord& c) const {
        auto it = slot_of_cell_.find(c);
        if (it == slot_of_cell_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

private:
    int node(const CellCoord& c) {
        auto [it, inserted] = index_.try_emplace(c, static_cast<int>(cells_.size()));
        if (inserted) {
            cells_.push_back(c);
            parent_.push_back(static_cast<int>(parent_.size()));
        }
        return it->second;
    }
    int find(int n) {
        while (parent_[n] != n) {
            parent_[n] = parent_[parent_[n]];
            n = parent_[n];
        }
        return n;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

    std::unordered_map<CellCoord, int, CellCoordHash> index_;
    std::vector<CellCoord> cells_;
    std::vector<int> parent_;
    std::vector<int> boundary_;
    std::vector<Group> groups_;
    std::unordered_map<CellCoord, int, CellCoordHash> slot_of_cell_;
};

// Events from per-cell "flipped relative to baseline" bits plus loss groups.
SyndromeResult assemble_events(const LatticeDims& dims,
                               const std::unordered_map<CellCoord, int, CellCoordHash>& flips,
                               const LossGroups& groups) {
    SyndromeResult result;
    std::vector<int> group_parity(groups.groups().size(), 0);
    for (const auto& [cell, bit] : flips) {
        if (bit == 0) {
            continue;
        }
        if (auto g = groups.group_of(cell)) {
            group_parity[*g] ^= 1;
        } else {
            result.events.push_back({cell, {}});
        }
    }
    for (size_t g = 0; g < groups.groups().size(); ++g) {
        const auto& group = groups.groups()[g];
        if (group.spans) {
            result.heralded_failure = true;
        }
        if (group.touches_boundary) {
            ++result.boundary_absorbed;
            continue;
        }
        if (group_parity[g] != 0) {
            result.events.push_back(make_group_event(group.cells));
        }
    }
    std::sort(result.events.begin(), result.events.end(), stream_order_less);
    (void)dims;
    return result;
}

}  // namespace

bool stream_order_less(const DetectionEvent& a, const DetectionEvent& b) {
    const int sa = center_sheet(a.cell);
    const int sb = center_sheet(b.cell);
    return std::make_tuple(sa, a.cell.kind, a.cell.j, a.cell.i) <
           std::make_tuple(sb, b.cell.kind, b.cell.j, b.cell.i);
}

int cell_parity(const std::array<int, 6>& bits) {
    int sum = 0;
    for (int b : bits) {
        sum += b;
    }
    return sum % 2;
}

int cell_parity(const DetectorFrame& below, const DetectorFrame& at, const DetectorFrame& above,
                const CellCoord& cell) {
    const QubitSite c = cell.center();
    if (at.sheet() != c.z || below.sheet() != c.z - 1 || above.sheet() != c.z + 1) {
        throw std::invalid_argument("frames are not the three sheets around the cell centre");
    }
    const std::array<DetectorFrame::Outcome, 6> outcomes = {
        below.at(c.x, c.y),     at.at(c.x - 1, c.y), at.at(c.x + 1, c.y),
        at.at(c.x, c.y - 1),    at.at(c.x, c.y + 1), above.at(c.x, c.y)};
    std::array<int, 6> bits{};
    for (size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k] == DetectorFrame::kLost) {
            throw std::runtime_error("cell face lost; parity needs the merged check");
        }
        if (outcomes[k] == DetectorFrame::kNoQubit) {
            throw std::invalid_argument("missing detector outcome for cell face");
        }
        bits[k] = static_cast<int>(outcomes[k]);
    }
    return cell_parity(bits);
}

MergedCheck form_supercell(const LatticeDims& dims, const std::vector<QubitSite>& losses,
                           const QubitSite& lost_site) {
    if (std::find(losses.begin(), losses.end(), lost_site) == losses.end()) {
        throw std::invalid_argument("site is not heralded as lost");
    }
    const LossGroups groups(dims, losses);
    const auto slot = groups.group_of(qubit_adjacent_cells(dims, lost_site).first);
    const auto& group = groups.groups()[static_cast<size_t>(*slot)];

    MergedCheck check;
    check.cells = group.cells;
    check.touches_boundary = group.touches_boundary;
    check.spans_lattice = group.spans;
    std::map<QubitSite, int> face_count;
    for (const CellCoord& c : group.cells) {
        for (const QubitSite& f : cell_face_qubits(dims, c)) {
            ++face_count[f];
        }
    }
    for (const auto& [site, count] : face_count) {
        if (count % 2 == 1) {
            check.sites.push_back(site);
        }
    }
    return check;
}

ParityAccumulator::ParityAccumulator(const LatticeDims& dims, const Baseline& baseline)
    : dims_(dims), baseline_(baseline) {
    dims_.validate();
}

int ParityAccumulator::find(int g) {
    while (parent_[g] != g) {
        parent_[g] = parent_[parent_[g]];
        g = parent_[g];
    }
    return g;
}

int ParityAccumulator::group_of(const CellCoord& c) {
    auto it = cell_group_.find(c);
    if (it != cell_group_.end()) {
        return find(it->second);
    }
    const int id = static_cast<int>(groups_.size());
    Group g;
    g.cells.push_back(c);
    g.pending = 1;
    g.max_sheet = center_sheet(c);
    groups_.push_back(std::move(g));
    parent_.push_back(id);
    cell_group_.emplace(c, id);
    return id;
}

void ParityAccumulator::register_loss(const QubitSite& q) {
    const AdjacentCells adj = qubit_adjacent_cells(dims_, q);
    const int a = group_of(adj.first);
    if (!adj.second) {
        groups_[a].touches_boundary = true;
        return;
    }
    const int b = group_of(*adj.second);
    if (a == b) {
        return;
    }
    const int keep = groups_[a].cells.size() >= groups_[b].cells.size() ? a : b;
    const int drop = keep == a ? b : a;
    Group& k = groups_[keep];
    Group& d = groups_[drop];
    k.cells.insert(k.cells.end(), d.cells.begin(), d.cells.end());
    k.parity ^= d.parity;
    k.pending += d.pending;
    k.max_sheet = std::max(k.max_sheet, d.max_sheet);
    k.touches_boundary = k.touches_boundary || d.touches_boundary;
    d = Group{};
    parent_[drop] = keep;
}

void ParityAccumulator::finalize_sheet(int center_sheet_index, std::vector<DetectionEvent>& out) {
    const CellKind kind = (center_sheet_index % 2 == 1) ? CellKind::kPrimal : CellKind::kDual;
    const int t = kind == CellKind::kPrimal ? (center_sheet_index - 1) / 2 : center_sheet_index / 2;
    if (t < min_cell_index(kind) || t > max_cell_index(dims_, kind, 2)) {
        return;
    }
    const DetectorFrame& below = window_[0];
    const DetectorFrame& at = window_[1];
    const DetectorFrame& above = window_[2];
    const int lo = min_cell_index(kind);
    for (int j = lo; j <= max_cell_index(dims_, kind, 1); ++j) {
        for (int i = lo; i <= max_cell_index(dims_, kind, 0); ++i) {
            const CellCoord cell{i, j, t, kind};
            const QubitSite c = cell.center();
            const std::array<DetectorFrame::Outcome, 6> faces = {
                below.at(c.x, c.y),  at.at(c.x - 1, c.y), at.at(c.x + 1, c.y),
                at.at(c.x, c.y - 1), at.at(c.x, c.y + 1), above.at(c.x, c.y)};
            int partial = baseline_.parity(cell);
            for (auto v : faces) {
                if (v == DetectorFrame::kOne) {
                    partial ^= 1;
                } else if (v == DetectorFrame::kNoQubit) {
                    throw std::runtime_error("malformed stream: missing detector record");
                }
            }
            auto it = cell_group_.find(cell);
            if (it == cell_group_.end()) {
                if (partial != 0) {
                    out.push_back({cell, {}});
                }
                continue;
            }
            Group& g = groups_[find(it->second)];
            g.parity ^= partial;
            if (--g.pending > 0) {
                continue;
            }
            // Every member is final, so no later loss can reach this group.
            for (const CellCoord& m : g.cells) {
                cell_group_.erase(m);
            }
            if (spans_lattice(dims_, g.cells)) {
                heralded_failure_ = true;
            }
            if (g.touches_boundary) {
                ++boundary_absorbed_;
            } else if (g.parity != 0) {
                out.push_back(make_group_event(g.cells));
            }
            g = Group{};
        }
    }
}

std::vector<DetectionEvent> ParityAccumulator::push(const DetectorFrame& frame) {
    if (done()) {
        throw std::runtime_error("frame pushed after the last sheet");
    }
    if (frame.sheet() != next_sheet_) {
        throw std::runtime_error("frame for sheet " + std::to_string(frame.sheet()) +
                                 " arrived, expected sheet " + std::to_string(next_sheet_));
    }
    if (frame.width() != 2 * dims_.nx + 1 || frame.height() != 2 * dims_.ny + 1) {
        throw std::runtime_error("frame cross-section does not match lattice dims");
    }
    window_.push_back(frame);
    if (window_.size() > 3) {
        window_.pop_front();
    }
    for (const auto& [x, y] : frame.loss_flags()) {
        register_loss({x, y, frame.sheet()});
    }
    std::vector<DetectionEvent> out;
    if (window_.size() == 3) {
        finalize_sheet(next_sheet_ - 1, out);
    }
    ++next_sheet_;
    std::sort(out.begin(), out.end(), stream_order_less);
    return out;
}

SyndromeResult extract_detection_events(const MeasurementStream& stream) {
    ParityAccumulator acc(stream.header.dims, stream.header.baseline());
    SyndromeResult result;
    for (const DetectorFrame& f : stream.frames) {
        auto events = acc.push(f);
        result.events.insert(result.events.end(), std::make_move_iterator(events.begin()),
                             std::make_move_iterator(events.end()));
    }
    if (!acc.done()) {
        throw std::runtime_error("stream ended before the last sheet");
    }
    result.heralded_failure = acc.heralded_failure();
    result.boundary_absorbed = acc.boundary_absorbed();
    return result;
}

SyndromeResult detection_events_from_errors(const LatticeDims& dims,
                                            const ErrorConfiguration& errors) {
    std::unordered_map<CellCoord, int, CellCoordHash> flips;
    for (const QubitSite& q : errors.z_errors) {
        const AdjacentCells adj = qubit_adjacent_cells(dims, q);
        flips[adj.first] ^= 1;
        if (adj.second) {
            flips[*adj.second] ^= 1;
        }
    }
    return assemble_events(dims, flips, LossGroups(dims, errors.losses));
}

SyndromeResult detection_events_batch(const MeasurementStream& stream) {
    const LatticeDims& dims = stream.header.dims;
    const Baseline baseline = stream.header.baseline();
    std::vector<QubitSite> losses;
    for (const DetectorFrame& f : stream.frames) {
        for (const auto& [x, y] : f.loss_flags()) {
            losses.push_back({x, y, f.sheet()});
        }
    }
    std::sort(losses.begin(), losses.end());
    auto outcome = [&](const QubitSite& q) { return stream.frames[q.z].at(q.x, q.y); };

    std::unordered_map<CellCoord, int, CellCoordHash> flips;
    for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
        for_each_cell(dims, kind, [&](const CellCoord& cell) {
            int parity = baseline.parity(cell);
            for (const QubitSite& f : cell_face_qubits(dims, cell)) {
                if (outcome(f) == DetectorFrame::kOne) {
                    parity ^= 1;
                }
            }
            if (parity != 0) {
                flips[cell] = 1;
            }
        });
    }
    return assemble_events(dims, flips, LossGroups(dims, losses));
}

void write_events(std::ostream& out, const std::vector<DetectionEvent>& events) {
    for (const DetectionEvent& e : events) {
        out << "E " << kind_letter(e.cell.kind) << ' ' << e.cell.i << ' ' << e.cell.j << ' '
            << e.cell.t;
        for (const CellCoord& m : e.supercell_members) {
            out << ' ' << m.i << ' ' << m.j << ' ' << m.t;
        }
        out << '\n';
    }
}

std::vector<DetectionEvent> read_events(std::istream& in) {
    std::vector<DetectionEvent> events;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        std::string kind;
        DetectionEvent e;
        if (!(ls >> tag >> kind >> e.cell.i >> e.cell.j >> e.cell.t) || tag != "E" ||
            kind.size() != 1) {
            throw std::runtime_error("event line " + std::to_string(line_no) + ": malformed");
        }
        try {
            e.cell.kind = kind_from_letter(kind[0]);
        } catch (const std::invalid_argument& err) {
            throw std::runtime_error("event line " + std::to_string(line_no) + ": " + err.what());
        }
        std::vector<int> rest;
        int v = 0;
        while (ls >> v) {
            rest.push_back(v);
        }
        if (!ls.eof() || rest.size() % 3 != 0) {
            throw std::runtime_error("event line " + std::to_string(line_no) +
                                     ": bad supercell member list");
        }
        for (size_t k = 0; k < rest.size(); k += 3) {
            e.supercell_members.push_back({rest[k], rest[k + 1], rest[k + 2], e.cell.kind});
        }
        if (!e.supercell_members.empty() &&
            std::find(e.supercell_members.begin(), e.supercell_members.end(), e.cell) ==
                e.supercell_members.end()) {
            throw std::runtime_error("event line " + std::to_string(line_no) +
                                     ": representative missing from member list");
        }
        events.push_back(std::move(e));
    }
    return events;
}

}  // namespace tcq
