#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "fdwave/grid.hpp"
#include "fdwave/stencil.hpp"

namespace fdwave {

/// Uniform time axis t_n = n dt, n = 0..N with N = ceil(tf/dt); simulated
/// time may overshoot tf by less than one step. saving_stride 0 keeps only
/// the final snapshot, 1 keeps every step, k keeps every k-th.
struct TimeAxis {
    double tf = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t saving_stride = 0;
    double stable_bound = 0.0;  // the critical dt this axis was checked against
    bool dt_overridden = false; // user dt exceeds the stable bound

    double time(std::size_t n) const { return static_cast<double>(n) * dt; }
    std::size_t sample_count() const { return n_steps + 1; }
    std::size_t snapshot_count() const {
        return saving_stride == 0 ? 1 : n_steps / saving_stride + 1;
    }
};

inline TimeAxis build_time_axis(double tf, std::optional<double> dt,
                                std::size_t saving_stride, double c_max,
                                const Grid& grid) {
    if (!(tf > 0.0)) throw std::invalid_argument("build_time_axis: tf must be > 0");
    if (dt && !(*dt > 0.0))
        throw std::invalid_argument("build_time_axis: dt must be > 0");

    TimeAxis axis;
    axis.tf = tf;
    axis.stable_bound = stable_dt(c_max, std::span(grid.spacing.data(), grid.ndim),
                                  grid.space_order, grid.ndim);
    axis.dt = dt.value_or(axis.stable_bound);
    axis.dt_overridden = axis.dt > axis.stable_bound * (1.0 + 1e-12);
    // relative epsilon so an exactly divisible tf does not gain a step
    axis.n_steps =
        static_cast<std::size_t>(std::ceil(tf / axis.dt * (1.0 - 1e-12)));
    if (axis.n_steps == 0) axis.n_steps = 1;
    axis.saving_stride = std::min(saving_stride, axis.n_steps);
    return axis;
}

}  // namespace fdwave
