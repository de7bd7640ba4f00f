#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace fdwave {

enum class Precision { Single, Double };

/// Axis-aligned regular Cartesian grid. Axis order is fixed: Z (depth)
/// first, then X, then Y. The extended shape covers physical domain plus
/// absorbing-layer cells; the stencil halo is tracked separately and never
/// counts as grid points.
struct Grid {
    int ndim = 2;
    std::array<std::array<double, 2>, 3> bbox{};           // {min, max} meters
    std::array<double, 3> spacing{1.0, 1.0, 1.0};          // meters
    std::array<std::size_t, 3> interior_shape{1, 1, 1};
    std::array<std::array<std::size_t, 2>, 3> damping_cells{};  // [axis][low,high]
    std::array<std::array<double, 2>, 3> damping_length{};      // meters
    int halo = 1;
    int space_order = 2;
    Precision precision = Precision::Double;
    std::array<std::size_t, 3> extended_shape{1, 1, 1};

    std::size_t interior_points() const {
        return interior_shape[0] * interior_shape[1] * interior_shape[2];
    }
    std::size_t extended_points() const {
        return extended_shape[0] * extended_shape[1] * extended_shape[2];
    }
    /// Allocation shape: extended grid plus halo on every side of each axis.
    std::array<std::size_t, 3> padded_shape() const {
        std::array<std::size_t, 3> p{1, 1, 1};
        for (int a = 0; a < ndim; ++a)
            p[a] = extended_shape[a] + 2 * static_cast<std::size_t>(halo);
        return p;
    }
    /// Physical coordinate of extended-grid node i along axis (halo excluded).
    double node_coordinate(int axis, std::size_t i) const {
        const double low_cells = static_cast<double>(damping_cells[axis][0]);
        return bbox[axis][0] + (static_cast<double>(i) - low_cells) * spacing[axis];
    }
};

inline Grid build_grid(std::span<const double> bbox, std::span<const double> spacing,
                       int space_order, Precision precision) {
    if (bbox.size() != 4 && bbox.size() != 6)
        throw std::invalid_argument("build_grid: bounding box needs 4 or 6 entries");
    const int ndim = static_cast<int>(bbox.size() / 2);
    if (spacing.size() != static_cast<std::size_t>(ndim))
        throw std::invalid_argument("build_grid: spacing must have one entry per axis");
    if (space_order < 2 || space_order > 20 || space_order % 2 != 0)
        throw std::invalid_argument("build_grid: space order must be even in [2, 20]");

    Grid g;
    g.ndim = ndim;
    g.space_order = space_order;
    g.halo = space_order / 2;
    g.precision = precision;
    for (int a = 0; a < ndim; ++a) {
        const double lo = bbox[2 * a], hi = bbox[2 * a + 1];
        if (!(hi > lo))
            throw std::invalid_argument("build_grid: bbox max must exceed min (axis " +
                                        std::to_string(a) + ")");
        if (!(spacing[a] > 0.0))
            throw std::invalid_argument("build_grid: spacing must be positive (axis " +
                                        std::to_string(a) + ")");
        g.bbox[a] = {lo, hi};
        g.spacing[a] = spacing[a];
        g.interior_shape[a] =
            static_cast<std::size_t>(std::llround((hi - lo) / spacing[a])) + 1;
    }
    g.extended_shape = g.interior_shape;
    return g;
}

/// Adds absorbing-layer cells per side. `lengths` is ordered
/// Z-low, Z-high, X-low, X-high[, Y-low, Y-high] in meters; cell counts are
/// rounded to the nearest whole cell.
inline Grid extend_with_damping(const Grid& grid, std::span<const double> lengths) {
    if (lengths.size() != static_cast<std::size_t>(2 * grid.ndim))
        throw std::invalid_argument(
            "extend_with_damping: need two lengths per axis");
    Grid g = grid;
    for (int a = 0; a < g.ndim; ++a) {
        for (int side = 0; side < 2; ++side) {
            const double len = lengths[2 * a + side];
            if (len < 0.0)
                throw std::invalid_argument(
                    "extend_with_damping: damping length must be >= 0");
            g.damping_length[a][side] = len;
            g.damping_cells[a][side] =
                static_cast<std::size_t>(std::llround(len / g.spacing[a]));
        }
        g.extended_shape[a] =
            g.interior_shape[a] + g.damping_cells[a][0] + g.damping_cells[a][1];
    }
    return g;
}

}  // namespace fdwave
