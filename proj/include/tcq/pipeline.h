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

#ifndef TCQ_PIPELINE_H
#define TCQ_PIPELINE_H

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tcq/errorsim.h"
#include "tcq/lattice.h"
#include "tcq/matchprep.h"
#include "tcq/syndrome.h"

namespace tcq {

/// One matched pair, as the correction it implies. `a` and `b` are the
/// representative cells of the two events (b empty for a boundary match);
/// `from` and `to` are the member cells the correction path joins.
struct Correction {
    CellCoord a;
    std::optional<CellCoord> b;
    CellCoord from;
    std::optional<CellCoord> to;
    int weight = 0;
    auto operator<=>(const Correction&) const = default;
};

struct DecodeResult {
    /// Sorted, without duplicates.
    std::vector<Correction> corrections;
    int components = 0;
    /// Parallel mode: components no window could close, decoded globally.
    int oversize = 0;
    /// Components with no perfect matching; left uncorrected.
    int unmatchable = 0;
    double tree_seconds = 0.0;
    double match_seconds = 0.0;
};

/// Exact matching of every component of the full-volume bounded graph.
DecodeResult decode_global(const LatticeDims& dims, const std::vector<DetectionEvent>& events,
                           int m_e);

/// Interlaced-window decoding: each window matches the components that have
/// an event in its inner box and close inside its outer box; results are
/// merged and deduplicated. Components no window closes fall back to global
/// decoding and are counted in `oversize`. `jobs` > 1 runs windows on that
/// many threads.
DecodeResult decode_parallel(const LatticeDims& dims, const std::vector<DetectionEvent>& events,
                             int m_e, int n, int jobs = 1);

/// Accumulated corrections as a set of flipped sites.
class PauliFrame {
public:
    void flip(const QubitSite& q);
    bool contains(const QubitSite& q) const { return sites_.count(q) != 0; }
    size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    const std::set<QubitSite>& sites() const { return sites_; }
    bool operator==(const PauliFrame&) const = default;

private:
    std::set<QubitSite> sites_;
};

/// Sites a correction flips: an axis-by-axis path through shared faces
/// (axis order given by `axis_order`), or a straight run to the nearest face
/// for a boundary match.
std::vector<QubitSite> correction_path(const LatticeDims& dims, const Correction& c,
                                       const std::array<int, 3>& axis_order = {0, 1, 2});

PauliFrame apply_correction(PauliFrame frame, const LatticeDims& dims,
                            const std::vector<Correction>& corrections,
                            const std::array<int, 3>& axis_order = {0, 1, 2});

/// Failure flags indexed [kind][axis].
struct LogicalFailure {
    std::array<std::array<bool, 3>, 2> flags{};
    bool any() const;
    bool on(CellKind kind, int axis) const { return flags[static_cast<int>(kind)][axis]; }
};

/// Residual = phase errors xor frame, lost sites excluded. A failure on
/// (kind, axis) is a connected piece of residual that touches both faces
/// normal to the axis and crosses the mid-lattice plane an odd number of
/// times. Lost sites join cells but never count as crossings.
LogicalFailure check_logical_failure(const LatticeDims& dims, const ErrorConfiguration& errors,
                                     const PauliFrame& frame);

enum class DecodeMode : uint8_t { kGlobal, kParallel, kBoth };
const char* to_string(DecodeMode mode);
DecodeMode decode_mode_from_string(const std::string& s);

struct TrialConfig {
    LatticeDims dims = LatticeDims::cube(20);
    double p_z = 1e-4;
    double p_loss = 0.0;
    int m_e = 6;
    /// Window edge for parallel decoding.
    int n = 23;
    int64_t trials = 100;
    uint64_t seed = 1;
    DecodeMode mode = DecodeMode::kGlobal;
    /// Worker threads over trials.
    int jobs = 1;
    /// Route every trial through the measurement stream and the streaming
    /// accumulator instead of computing events from the errors directly.
    bool through_stream = false;
    BaselineMode baseline = BaselineMode::kRandom;

    void validate() const;
};

struct TrialReport {
    int64_t trial = 0;
    uint64_t seed = 0;
    int z_errors = 0;
    int losses = 0;
    int events = 0;
    int components = 0;
    int oversize = 0;
    int unmatchable = 0;
    /// Loss merged a check across the lattice.
    bool heralded_loss = false;
    LogicalFailure failure;
    /// 1 if parallel and global corrections were identical, 0 if not, -1 when
    /// not compared.
    int agreement = -1;
    double syndrome_seconds = 0.0;
    double tree_seconds = 0.0;
    double match_seconds = 0.0;

    /// The decoder gave up on this trial.
    bool gave_up() const { return heralded_loss || unmatchable > 0; }
    /// Counted as a logical failure: gave up or a residual chain spans.
    bool failed() const { return gave_up() || failure.any(); }
};

/// Per-trial seed derived from the run seed.
uint64_t trial_seed(uint64_t seed, int64_t trial);

/// Runs one trial.
TrialReport run_trial(const TrialConfig& config, int64_t trial);

/// Runs config.trials trials on config.jobs threads; the result is ordered by
/// trial index and does not depend on the thread count.
std::vector<TrialReport> run_trials(const TrialConfig& config);

struct TrialSummary {
    int64_t trials = 0;
    int64_t failures = 0;
    int64_t gave_up = 0;
    int64_t oversize_trials = 0;
    int64_t oversize_components = 0;
    int64_t compared = 0;
    /// Agreement among compared trials with no oversize component.
    int64_t bounded_compared = 0;
    int64_t bounded_agreed = 0;
    double mean_events = 0.0;
    double mean_components = 0.0;
    std::array<std::array<int64_t, 3>, 2> failures_by_axis{};
    double tree_seconds = 0.0;
    double match_seconds = 0.0;

    double failure_rate() const { return trials ? static_cast<double>(failures) / trials : 0.0; }
};

TrialSummary summarize(const std::vector<TrialReport>& reports);

/// Blossom against exhaustive search on random small instances: 4 to 12
/// primal events at distinct random cells of a 10^3 lattice, m_e drawn from
/// {4, 6, 10}. Instances neither solver can match count as agreeing.
struct OracleCheck {
    int64_t instances = 0;
    int64_t weight_agreed = 0;
    int64_t pairs_agreed = 0;
    int64_t unmatchable = 0;
};

OracleCheck compare_with_oracle(int64_t instances, uint64_t seed);

}  // namespace tcq

#endif  // TCQ_PIPELINE_H
