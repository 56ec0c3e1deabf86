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
#include <cmath>
#include <set>
#include <sstream>

#include "tcq/errorsim.h"

namespace tcq {
namespace {

const DetectorFrame& frame_at(const MeasurementStream& s, int z) { return s.frames[z]; }

int outcome(const MeasurementStream& s, const QubitSite& q) {
    return frame_at(s, q.z).at(q.x, q.y);
}

TEST(ErrorSim, ZeroRatesGiveEmptyConfiguration) {
    EXPECT_TRUE(sample_errors(LatticeDims::cube(8), {0.0, 0.0, 5}).empty());
}

TEST(ErrorSim, UnitRateErrsEverySite) {
    const LatticeDims dims{3, 4, 5};
    const ErrorConfiguration e = sample_errors(dims, {1.0, 0.0, 5});
    EXPECT_EQ(static_cast<int64_t>(e.z_errors.size()), site_count(dims));
    EXPECT_TRUE(e.losses.empty());
    e.validate(dims);
}

TEST(ErrorSim, LossSupersedesPhaseError) {
    const LatticeDims dims = LatticeDims::cube(6);
    const ErrorConfiguration e = sample_errors(dims, {0.5, 0.5, 9});
    EXPECT_EQ(static_cast<int64_t>(e.z_errors.size() + e.losses.size()), site_count(dims));
    e.validate(dims);
}

TEST(ErrorSim, RejectsBadModel) {
    EXPECT_THROW((ErrorModel{-0.1, 0.0, 0}).validate(), std::invalid_argument);
    EXPECT_THROW((ErrorModel{0.7, 0.4, 0}).validate(), std::invalid_argument);
    EXPECT_THROW(sample_errors(LatticeDims{1, 3, 3}, {0.1, 0.0, 0}), std::invalid_argument);
}

TEST(ErrorSim, MeanErrorCountIsBinomial) {
    // Expectation from the exact site count (74.27 at 50^3, not 6 * 50^3 * p).
    const LatticeDims dims = LatticeDims::cube(50);
    const double p = 1e-4;
    const int seeds = 200;
    const double n = static_cast<double>(site_count(dims));
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
        sum += static_cast<double>(sample_errors(dims, {p, 0.0, static_cast<uint64_t>(s)}).z_errors.size());
    }
    const double mean = sum / seeds;
    const double sigma = std::sqrt(n * p * (1 - p) / seeds);
    EXPECT_NEAR(mean, n * p, 3 * sigma);
}

TEST(ErrorSim, SiteFateDoesNotDependOnLatticeSize) {
    const ErrorConfiguration small = sample_errors(LatticeDims::cube(6), {0.05, 0.02, 3});
    const ErrorConfiguration large = sample_errors(LatticeDims::cube(9), {0.05, 0.02, 3});
    const LatticeDims dims = LatticeDims::cube(6);
    // Sites strictly inside the small box exist in both lattices.
    auto inner = [&](const std::vector<QubitSite>& v) {
        std::vector<QubitSite> out;
        for (const QubitSite& q : v) {
            if (q.x > 0 && q.y > 0 && q.z > 0 && q.x < 2 * dims.nx && q.y < 2 * dims.ny &&
                q.z < 2 * dims.nt && is_valid_site(dims, q)) {
                out.push_back(q);
            }
        }
        return out;
    };
    EXPECT_EQ(inner(small.z_errors), inner(large.z_errors));
    EXPECT_EQ(inner(small.losses), inner(large.losses));
}

class StreamParity : public ::testing::TestWithParam<BaselineMode> {};

TEST_P(StreamParity, CellParityIsBaselinePlusFlips) {
    const LatticeDims dims{5, 4, 6};
    const ErrorConfiguration e = sample_errors(dims, {0.05, 0.0, 21});
    const StreamHeader header{dims, 21, GetParam(), 77};
    const MeasurementStream s = measurement_stream(dims, e, header);
    ASSERT_EQ(static_cast<int>(s.frames.size()), 2 * dims.nt + 1);
    const std::set<QubitSite> erred(e.z_errors.begin(), e.z_errors.end());
    for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
        for_each_cell(dims, kind, [&](const CellCoord& c) {
            const QubitSite m = c.center();
            const QubitSite faces[6] = {{m.x - 1, m.y, m.z}, {m.x + 1, m.y, m.z},
                                        {m.x, m.y - 1, m.z}, {m.x, m.y + 1, m.z},
                                        {m.x, m.y, m.z - 1}, {m.x, m.y, m.z + 1}};
            int bits = 0;
            int flips = 0;
            for (const QubitSite& q : faces) {
                bits += outcome(s, q);
                flips += static_cast<int>(erred.count(q));
            }
            EXPECT_EQ(bits % 2, (header.baseline().parity(c) + flips) % 2);
        });
    }
}

INSTANTIATE_TEST_SUITE_P(Baselines, StreamParity,
                         ::testing::Values(BaselineMode::kAllEven, BaselineMode::kRandom));

TEST(ErrorSim, ErrorFreeAllEvenStreamHasEvenCells) {
    const LatticeDims dims = LatticeDims::cube(4);
    const MeasurementStream s =
        measurement_stream(dims, {}, {dims, 0, BaselineMode::kAllEven, 0});
    for (CellKind kind : {CellKind::kPrimal, CellKind::kDual}) {
        for_each_cell(dims, kind, [&](const CellCoord& c) {
            int sum = 0;
            for (const QubitSite& q : cell_face_qubits(dims, c)) {
                sum += outcome(s, q);
            }
            EXPECT_EQ(sum % 2, 0);
        });
    }
}

TEST(ErrorSim, RandomBaselineIsRoughlyHalfOdd) {
    const Baseline b{BaselineMode::kRandom, 4};
    int odd = 0;
    int total = 0;
    for_each_cell(LatticeDims::cube(20), CellKind::kPrimal, [&](const CellCoord& c) {
        odd += b.parity(c);
        ++total;
    });
    EXPECT_NEAR(static_cast<double>(odd) / total, 0.5, 0.03);
}

TEST(ErrorSim, BitsAreMarginallyUniform) {
    const LatticeDims dims = LatticeDims::cube(10);
    const MeasurementStream s =
        measurement_stream(dims, {}, {dims, 1, BaselineMode::kAllEven, 0});
    int64_t ones = 0;
    int64_t total = 0;
    for (const DetectorFrame& f : s.frames) {
        for (const auto& b : f.bits()) {
            ones += b.value;
            ++total;
        }
    }
    EXPECT_EQ(total, site_count(dims));
    EXPECT_NEAR(static_cast<double>(ones) / static_cast<double>(total), 0.5, 0.01);
}

TEST(ErrorSim, LostSiteIsFlaggedNotMeasured) {
    const LatticeDims dims = LatticeDims::cube(4);
    ErrorConfiguration e;
    e.losses = {{3, 3, 4}};
    const MeasurementStream s = measurement_stream(dims, e, {dims, 0, BaselineMode::kRandom, 2});
    const DetectorFrame& f = s.frames[4];
    EXPECT_EQ(f.at(3, 3), DetectorFrame::kLost);
    const auto flags = f.loss_flags();
    ASSERT_EQ(flags.size(), 1u);
    EXPECT_EQ(flags[0], std::make_pair(3, 3));
    for (const auto& b : f.bits()) {
        EXPECT_FALSE(b.x == 3 && b.y == 3);
    }
}

TEST(ErrorSim, FrameDomainCoversCrossSection) {
    const LatticeDims dims{3, 4, 3};
    const MeasurementStream s =
        measurement_stream(dims, sample_errors(dims, {0.0, 0.2, 8}), {dims, 8, BaselineMode::kRandom, 8});
    std::set<QubitSite> seen;
    for (const DetectorFrame& f : s.frames) {
        for (const auto& b : f.bits()) {
            EXPECT_TRUE(seen.insert({b.x, b.y, f.sheet()}).second);
        }
        for (const auto& [x, y] : f.loss_flags()) {
            EXPECT_TRUE(seen.insert({x, y, f.sheet()}).second);
        }
    }
    EXPECT_EQ(static_cast<int64_t>(seen.size()), site_count(dims));
}

TEST(ErrorSim, StreamIsDeterministicAndRoundTrips) {
    const LatticeDims dims{4, 5, 3};
    const ErrorConfiguration e = sample_errors(dims, {0.03, 0.02, 12});
    const StreamHeader h{dims, 12, BaselineMode::kRandom, 99};
    const MeasurementStream a = measurement_stream(dims, e, h);
    const MeasurementStream b = measurement_stream(dims, sample_errors(dims, {0.03, 0.02, 12}), h);
    EXPECT_EQ(a, b);
    std::stringstream buf;
    write_stream(buf, a);
    const std::string text = buf.str();
    const MeasurementStream back = read_stream(buf);
    EXPECT_EQ(back, a);
    std::stringstream again;
    write_stream(again, back);
    EXPECT_EQ(again.str(), text);
}

TEST(ErrorSim, MalformedStreamThrows) {
    std::stringstream bad("H 4 4 4 1 random 2\nQ 0 1 1\n");
    EXPECT_THROW(read_stream(bad), std::runtime_error);
}

}  // namespace
}  // namespace tcq
