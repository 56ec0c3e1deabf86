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

#ifndef TCQ_SYNDROME_H
#define TCQ_SYNDROME_H

#include <array>
#include <deque>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tcq/errorsim.h"
#include "tcq/lattice.h"

namespace tcq {

/// A cell (or loss-merged group of cells) whose parity differs from its
/// recorded baseline. For a merged group `cell` is the representative member:
/// the one finalised last (largest t, then smallest i, j).
struct DetectionEvent {
    CellCoord cell;
    /// Empty for an ordinary cell; all members, sorted, for a merged check.
    std::vector<CellCoord> supercell_members;

    /// The cells this event stands for (just `cell` unless merged).
    std::vector<CellCoord> members() const;
    bool operator==(const DetectionEvent&) const = default;
};

/// Emission order: nondecreasing centre sheet, then kind, then (j, i).
bool stream_order_less(const DetectionEvent& a, const DetectionEvent& b);

struct SyndromeResult {
    std::vector<DetectionEvent> events;
    /// Loss merged a check across the whole lattice; the trial cannot be
    /// decoded.
    bool heralded_failure = false;
    /// Merged checks absorbed into the lattice boundary (no parity available).
    int boundary_absorbed = 0;
};

/// Parity of six face outcomes, mod 2.
int cell_parity(const std::array<int, 6>& bits);

/// Parity of cell (i, j, T) from the three detector sheets around its centre.
/// Throws std::invalid_argument if the frames are not consecutive sheets
/// around the cell, and std::runtime_error if a face was lost.
int cell_parity(const DetectorFrame& below, const DetectorFrame& at, const DetectorFrame& above,
                const CellCoord& cell);

/// A parity check extended around heralded losses.
struct MergedCheck {
    std::vector<CellCoord> cells;
    /// Symmetric difference of the member cells' faces.
    std::vector<QubitSite> sites;
    /// A lost site on the lattice surface joined the check to the boundary.
    bool touches_boundary = false;
    /// The merged cells reach from one face of the lattice to the opposite one.
    bool spans_lattice = false;
};

/// Grows the check around `lost_site`, recursively absorbing every cell joined
/// to it through lost sites of the same kind. Throws std::invalid_argument if
/// `lost_site` is not in `losses`.
MergedCheck form_supercell(const LatticeDims& dims, const std::vector<QubitSite>& losses,
                           const QubitSite& lost_site);

/// Layer-one streaming processor. Frames are pushed in sheet order; a cell is
/// finalised once the sheet above its centre has arrived, and a loss-merged
/// group once every member is final.
class ParityAccumulator {
public:
    ParityAccumulator(const LatticeDims& dims, const Baseline& baseline);

    /// Consumes the next sheet and returns the events finalised by it.
    std::vector<DetectionEvent> push(const DetectorFrame& frame);
    bool done() const { return next_sheet_ > 2 * dims_.nt; }
    bool heralded_failure() const { return heralded_failure_; }
    int boundary_absorbed() const { return boundary_absorbed_; }

private:
    struct Group {
        std::vector<CellCoord> cells;
        int parity = 0;
        int pending = 0;
        int max_sheet = 0;
        bool touches_boundary = false;
    };

    void finalize_sheet(int center_sheet, std::vector<DetectionEvent>& out);
    void register_loss(const QubitSite& q);
    int find(int g);
    int group_of(const CellCoord& c);

    LatticeDims dims_;
    Baseline baseline_;
    int next_sheet_ = 0;
    std::deque<DetectorFrame> window_;
    // Union-find over loss groups.
    std::vector<int> parent_;
    std::vector<Group> groups_;
    std::unordered_map<CellCoord, int, CellCoordHash> cell_group_;
    bool heralded_failure_ = false;
    int boundary_absorbed_ = 0;
};

/// Runs the accumulator over a full stream.
SyndromeResult extract_detection_events(const MeasurementStream& stream);

/// Same events computed directly from the error configuration (baseline
/// cancels). Used by the Monte Carlo driver and as the batch reference.
SyndromeResult detection_events_from_errors(const LatticeDims& dims,
                                            const ErrorConfiguration& errors);

/// Batch recomputation: parities of every cell from the fully stored stream.
SyndromeResult detection_events_batch(const MeasurementStream& stream);

/// Line format "E kind i j t [i j t ...]" with kind 'p' or 'd' and the merged
/// members, if any, appended as triples. Header lines start with '#'.
void write_events(std::ostream& out, const std::vector<DetectionEvent>& events);
/// Throws std::runtime_error on a malformed record.
std::vector<DetectionEvent> read_events(std::istream& in);

}  // namespace tcq

#endif  // TCQ_SYNDROME_H
