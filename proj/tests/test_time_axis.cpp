#include <gtest/gtest.h>

#include <array>

#include "fdwave/grid.hpp"
#include "fdwave/time_axis.hpp"

namespace {

fdwave::Grid square_grid(double h = 0.5, int order = 2) {
    return fdwave::build_grid(std::array<double, 4>{0, 400, 0, 400},
                              std::array<double, 2>{h, h}, order,
                              fdwave::Precision::Double);
}

}  // namespace

TEST(TimeAxis, VerificationWindowSampleCount) {
    const auto axis = fdwave::build_time_axis(0.15, 1e-4, 0, 1500.0, square_grid());
    EXPECT_EQ(axis.n_steps, 1500u);
    EXPECT_EQ(axis.sample_count(), 1501u);
    EXPECT_DOUBLE_EQ(axis.time(1500), 0.15);
}

TEST(TimeAxis, ExactDivisionDoesNotGainAStep) {
    const auto axis = fdwave::build_time_axis(1.0, 0.002, 0, 1500.0, square_grid());
    EXPECT_EQ(axis.n_steps, 500u);
    const auto axis2 = fdwave::build_time_axis(0.3, 0.1, 0, 1500.0, square_grid());
    EXPECT_EQ(axis2.n_steps, 3u);
}

TEST(TimeAxis, OvershootsByLessThanOneStep) {
    const auto axis = fdwave::build_time_axis(0.15, 4e-5, 0, 1500.0, square_grid());
    EXPECT_EQ(axis.n_steps, 3750u);
    const auto odd = fdwave::build_time_axis(0.15015, 1e-4, 0, 1500.0, square_grid());
    EXPECT_EQ(odd.n_steps, 1502u);
    EXPECT_GE(odd.time(odd.n_steps), 0.15015);
    EXPECT_LT(odd.time(odd.n_steps) - 0.15015, 1e-4);
}

TEST(TimeAxis, DefaultsToCriticalDt) {
    const auto axis = fdwave::build_time_axis(0.1, std::nullopt, 0, 1500.0,
                                              square_grid());
    EXPECT_DOUBLE_EQ(axis.dt, axis.stable_bound);
    EXPECT_FALSE(axis.dt_overridden);
}

TEST(TimeAxis, UserDtAboveBoundIsAcceptedButFlagged) {
    const auto grid = square_grid();
    const double bound = fdwave::stable_dt(1500.0, std::span(grid.spacing.data(), 2),
                                           2, 2);
    const auto axis = fdwave::build_time_axis(0.1, bound * 1.5, 0, 1500.0, grid);
    EXPECT_TRUE(axis.dt_overridden);
    const auto safe = fdwave::build_time_axis(0.1, bound * 0.9, 0, 1500.0, grid);
    EXPECT_FALSE(safe.dt_overridden);
}

TEST(TimeAxis, SnapshotCountConvention) {
    const auto axis0 = fdwave::build_time_axis(0.15, 1e-4, 0, 1500.0, square_grid());
    EXPECT_EQ(axis0.snapshot_count(), 1u);  // stride 0: final level only
    const auto axis1 = fdwave::build_time_axis(0.15, 1e-4, 1, 1500.0, square_grid());
    EXPECT_EQ(axis1.snapshot_count(), 1501u);  // every step
    const auto axis7 = fdwave::build_time_axis(0.15, 1e-4, 7, 1500.0, square_grid());
    EXPECT_EQ(axis7.snapshot_count(), 1500u / 7u + 1u);
}

TEST(TimeAxis, StrideClampedToStepCount) {
    const auto axis = fdwave::build_time_axis(0.001, 1e-4, 500, 1500.0, square_grid());
    EXPECT_EQ(axis.n_steps, 10u);
    EXPECT_LE(axis.saving_stride, axis.n_steps);
}

TEST(TimeAxis, RejectsBadInput) {
    EXPECT_THROW(fdwave::build_time_axis(0.0, 1e-4, 0, 1500.0, square_grid()),
                 std::invalid_argument);
    EXPECT_THROW(fdwave::build_time_axis(-1.0, 1e-4, 0, 1500.0, square_grid()),
                 std::invalid_argument);
    EXPECT_THROW(fdwave::build_time_axis(0.1, -1e-4, 0, 1500.0, square_grid()),
                 std::invalid_argument);
}
