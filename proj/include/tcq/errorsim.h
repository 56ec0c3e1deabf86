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

#ifndef TCQ_ERRORSIM_H
#define TCQ_ERRORSIM_H

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "tcq/lattice.h"

namespace tcq {

/// Independent per-qubit noise: heralded loss with probability p_loss,
/// otherwise a phase flip with probability p_z.
struct ErrorModel {
    double p_z = 0.0;
    double p_loss = 0.0;
    uint64_t seed = 0;

    void validate() const;
};

/// Sampled phase-flipped and lost qubits; both lists sorted and disjoint.
struct ErrorConfiguration {
    std::vector<QubitSite> z_errors;
    std::vector<QubitSite> losses;

    void validate(const LatticeDims& dims) const;
    bool empty() const { return z_errors.empty() && losses.empty(); }
};

/// Draws an error configuration. Each site's fate depends only on
/// (seed, site), so the result is independent of enumeration order.
ErrorConfiguration sample_errors(const LatticeDims& dims, const ErrorModel& model);

/// Initial cell parities fed forward from the preparation network. In random
/// mode roughly half the cells start odd.
enum class BaselineMode : uint8_t { kAllEven, kRandom };

const char* to_string(BaselineMode mode);
BaselineMode baseline_mode_from_string(const std::string& s);

struct Baseline {
    BaselineMode mode = BaselineMode::kAllEven;
    uint64_t seed = 0;

    int parity(const CellCoord& cell) const;
};

/// Outcomes of one sheet of detectors (one doubled z coordinate).
///
/// Addressed by the cross-section coordinate (x, y) of the detector, which is
/// the doubled in-plane coordinate of the qubit measured at this sheet.
class DetectorFrame {
public:
    enum Outcome : uint8_t { kZero = 0, kOne = 1, kLost = 2, kNoQubit = 3 };

    DetectorFrame() = default;
    DetectorFrame(const LatticeDims& dims, int sheet);

    int sheet() const { return sheet_; }
    int width() const { return width_; }
    int height() const { return height_; }

    Outcome at(int x, int y) const {
        if (x < 0 || y < 0 || x >= width_ || y >= height_) {
            return kNoQubit;
        }
        return static_cast<Outcome>(cells_[static_cast<size_t>(y) * width_ + x]);
    }
    void set(int x, int y, Outcome v) { cells_[static_cast<size_t>(y) * width_ + x] = v; }

    struct Bit {
        int x;
        int y;
        int value;
    };
    /// Clicked detectors in row-major (y, then x) order.
    std::vector<Bit> bits() const;
    /// Detectors with no click, row-major.
    std::vector<std::pair<int, int>> loss_flags() const;

    bool operator==(const DetectorFrame&) const = default;

private:
    int sheet_ = 0;
    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> cells_;
};

struct StreamHeader {
    LatticeDims dims;
    uint64_t error_seed = 0;
    BaselineMode baseline_mode = BaselineMode::kAllEven;
    uint64_t baseline_seed = 0;

    Baseline baseline() const { return {baseline_mode, baseline_seed}; }
    bool operator==(const StreamHeader&) const = default;
};

struct MeasurementStream {
    StreamHeader header;
    /// One frame per sheet, sheet 0 .. 2*nt in order.
    std::vector<DetectorFrame> frames;

    bool operator==(const MeasurementStream&) const = default;
};

/// Ideal sigma-x outcomes for the whole volume. Individual bits are uniformly
/// random; the six-face sum of every cell equals its baseline parity plus the
/// number of phase flips on its faces, mod 2. Lost sites are reported as
/// kLost and carry no bit.
MeasurementStream measurement_stream(const LatticeDims& dims,
                                     const ErrorConfiguration& errors,
                                     const StreamHeader& header);

/// Line format: "H nx ny nt error_seed baseline_mode baseline_seed", then per
/// frame in sheet order "B t x y v" and "L t x y" records in row-major order.
void write_stream(std::ostream& out, const MeasurementStream& stream);
/// Throws std::runtime_error on a malformed record.
MeasurementStream read_stream(std::istream& in);

}  // namespace tcq

#endif  // TCQ_ERRORSIM_H
