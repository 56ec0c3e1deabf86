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

#include "tcq/errorsim.h"

#include <algorithm>
#include <iterator>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tcq/hash.h"

namespace tcq {

void ErrorModel::validate() const {
    if (!(p_z >= 0.0 && p_z <= 1.0) || !(p_loss >= 0.0 && p_loss <= 1.0)) {
        throw std::invalid_argument("error probabilities must lie in [0, 1]");
    }
    if (p_z + p_loss > 1.0 + 1e-12) {
        throw std::invalid_argument("p_z + p_loss must not exceed 1");
    }
}

void ErrorConfiguration::validate(const LatticeDims& dims) const {
    for (const auto* list : {&z_errors, &losses}) {
        for (const QubitSite& q : *list) {
            if (!is_valid_site(dims, q)) {
                throw std::invalid_argument("error configuration contains an invalid site");
            }
        }
        if (!std::is_sorted(list->begin(), list->end()) ||
            std::adjacent_find(list->begin(), list->end()) != list->end()) {
            throw std::invalid_argument("error configuration lists must be sorted and unique");
        }
    }
    std::vector<QubitSite> both;
    std::set_intersection(z_errors.begin(), z_errors.end(), losses.begin(), losses.end(),
                          std::back_inserter(both));
    if (!both.empty()) {
        throw std::invalid_argument("a lost site cannot also carry a phase error");
    }
}

ErrorConfiguration sample_errors(const LatticeDims& dims, const ErrorModel& model) {
    dims.validate();
    model.validate();
    ErrorConfiguration out;
    if (model.p_z <= 0.0 && model.p_loss <= 0.0) {
        return out;
    }
    const uint64_t key = model.seed ^ kErrorStream;
    const double loss_cut = model.p_loss;
    const double z_cut = model.p_loss + model.p_z;
    for_each_site(dims, [&](const QubitSite& q) {
        const double u = to_unit_interval(hash_combine(key, pack_coords(q.x, q.y, q.z)));
        if (u < loss_cut) {
            out.losses.push_back(q);
        } else if (u < z_cut) {
            out.z_errors.push_back(q);
        }
    });
    std::sort(out.z_errors.begin(), out.z_errors.end());
    std::sort(out.losses.begin(), out.losses.end());
    return out;
}

const char* to_string(BaselineMode mode) {
    return mode == BaselineMode::kAllEven ? "even" : "random";
}

BaselineMode baseline_mode_from_string(const std::string& s) {
    if (s == "even" || s == "all-even") {
        return BaselineMode::kAllEven;
    }
    if (s == "random") {
        return BaselineMode::kRandom;
    }
    throw std::invalid_argument("unknown baseline mode '" + s + "'");
}

int Baseline::parity(const CellCoord& cell) const {
    if (mode == BaselineMode::kAllEven) {
        return 0;
    }
    const QubitSite c = cell.center();
    return static_cast<int>(hash_combine(seed ^ kBaselineStream, pack_coords(c.x, c.y, c.z)) & 1);
}

DetectorFrame::DetectorFrame(const LatticeDims& dims, int sheet)
    : sheet_(sheet),
      width_(2 * dims.nx + 1),
      height_(2 * dims.ny + 1),
      cells_(static_cast<size_t>(width_) * height_, kNoQubit) {
}

std::vector<DetectorFrame::Bit> DetectorFrame::bits() const {
    std::vector<Bit> out;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const Outcome v = at(x, y);
            if (v == kZero || v == kOne) {
                out.push_back({x, y, static_cast<int>(v)});
            }
        }
    }
    return out;
}

std::vector<std::pair<int, int>> DetectorFrame::loss_flags() const {
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (at(x, y) == kLost) {
                out.emplace_back(x, y);
            }
        }
    }
    return out;
}

namespace {

// Dense scratch volume over the doubled-coordinate box.
class Volume {
public:
    explicit Volume(const LatticeDims& dims)
        : sx_(2 * dims.nx + 1), sy_(2 * dims.ny + 1), sz_(2 * dims.nt + 1),
          data_(static_cast<size_t>(sx_) * sy_ * sz_, 0) {}

    uint8_t& operator[](const QubitSite& q) {
        return data_[(static_cast<size_t>(q.z) * sy_ + q.y) * sx_ + q.x];
    }

private:
    int sx_;
    int sy_;
    int sz_;
    std::vector<uint8_t> data_;
};

}  // namespace

MeasurementStream measurement_stream(const LatticeDims& dims,
                                     const ErrorConfiguration& errors,
                                     const StreamHeader& header) {
    dims.validate();
    errors.validate(dims);
    if (!(header.dims == dims)) {
        throw std::invalid_argument("stream header dims do not match lattice dims");
    }
    const Baseline baseline = header.baseline();
    const uint64_t outcome_key = header.baseline_seed ^ kOutcomeStream;

    Volume value(dims);
    Volume lost(dims);
    Volume flipped(dims);
    for (const QubitSite& q : errors.losses) {
        lost[q] = 1;
    }
    for (const QubitSite& q : errors.z_errors) {
        flipped[q] = 1;
    }
    for_each_site(dims, [&](const QubitSite& q) {
        value[q] = static_cast<uint8_t>(hash_combine(outcome_key, pack_coords(q.x, q.y, q.z)) & 1);
    });

    // Uniform random bits, then sweep each row along +x pushing parity defects
    // onto the +x face. The +x face of a cell is shared only with the next cell
    // in the row (or the boundary), so earlier cells stay fixed; the result is
    // uniform over all assignments meeting the cell constraints.
    for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
        for_each_cell(dims, kind, [&](const CellCoord& cell) {
            const auto faces = cell_face_qubits(dims, cell);
            int parity = 0;
            int target = baseline.parity(cell);
            for (const QubitSite& f : faces) {
                parity ^= value[f];
                target ^= flipped[f];
            }
            if (parity != target) {
                value[faces[1]] ^= 1;
            }
        });
    }

    MeasurementStream stream;
    stream.header = header;
    stream.frames.reserve(static_cast<size_t>(2 * dims.nt + 1));
    for (int z = 0; z <= 2 * dims.nt; ++z) {
        stream.frames.emplace_back(dims, z);
    }
    for_each_site(dims, [&](const QubitSite& q) {
        DetectorFrame& f = stream.frames[static_cast<size_t>(q.z)];
        f.set(q.x, q.y, lost[q] ? DetectorFrame::kLost : static_cast<DetectorFrame::Outcome>(value[q]));
    });
    return stream;
}

void write_stream(std::ostream& out, const MeasurementStream& stream) {
    const StreamHeader& h = stream.header;
    out << "H " << h.dims.nx << ' ' << h.dims.ny << ' ' << h.dims.nt << ' ' << h.error_seed << ' '
        << to_string(h.baseline_mode) << ' ' << h.baseline_seed << '\n';
    for (const DetectorFrame& f : stream.frames) {
        for (int y = 0; y < f.height(); ++y) {
            for (int x = 0; x < f.width(); ++x) {
                const auto v = f.at(x, y);
                if (v == DetectorFrame::kLost) {
                    out << "L " << f.sheet() << ' ' << x << ' ' << y << '\n';
                } else if (v != DetectorFrame::kNoQubit) {
                    out << "B " << f.sheet() << ' ' << x << ' ' << y << ' ' << static_cast<int>(v)
                        << '\n';
                }
            }
        }
    }
}

namespace {

[[noreturn]] void malformed(size_t line_no, const std::string& why) {
    throw std::runtime_error("stream line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

MeasurementStream read_stream(std::istream& in) {
    MeasurementStream stream;
    std::string line;
    size_t line_no = 0;
    bool have_header = false;
    size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        char tag = 0;
        ls >> tag;
        if (tag == 'H') {
            if (have_header) {
                malformed(line_no, "duplicate header");
            }
            StreamHeader& h = stream.header;
            std::string mode;
            if (!(ls >> h.dims.nx >> h.dims.ny >> h.dims.nt >> h.error_seed >> mode >>
                  h.baseline_seed)) {
                malformed(line_no, "bad header");
            }
            try {
                h.dims.validate();
                h.baseline_mode = baseline_mode_from_string(mode);
            } catch (const std::invalid_argument& e) {
                malformed(line_no, e.what());
            }
            for (int z = 0; z <= 2 * h.dims.nt; ++z) {
                stream.frames.emplace_back(h.dims, z);
            }
            have_header = true;
            continue;
        }
        if (!have_header) {
            malformed(line_no, "record before header");
        }
        int t = 0;
        int x = 0;
        int y = 0;
        int v = 0;
        if (tag == 'B') {
            if (!(ls >> t >> x >> y >> v) || (v != 0 && v != 1)) {
                malformed(line_no, "bad bit record");
            }
        } else if (tag == 'L') {
            if (!(ls >> t >> x >> y)) {
                malformed(line_no, "bad loss record");
            }
        } else {
            malformed(line_no, std::string("unknown record tag '") + tag + "'");
        }
        std::string trailing;
        if (ls >> trailing) {
            malformed(line_no, "trailing data");
        }
        if (!is_valid_site(stream.header.dims, {x, y, t})) {
            malformed(line_no, "no qubit at this address");
        }
        DetectorFrame& f = stream.frames[static_cast<size_t>(t)];
        if (f.at(x, y) != DetectorFrame::kNoQubit) {
            malformed(line_no, "duplicate record");
        }
        f.set(x, y, tag == 'L' ? DetectorFrame::kLost : static_cast<DetectorFrame::Outcome>(v));
        ++records;
    }
    if (!have_header) {
        throw std::runtime_error("stream has no header");
    }
    if (static_cast<int64_t>(records) != site_count(stream.header.dims)) {
        throw std::runtime_error("stream is missing detector records");
    }
    return stream;
}

}  // namespace tcq
