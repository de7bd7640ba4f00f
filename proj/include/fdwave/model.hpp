#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdwave/field.hpp"
#include "fdwave/grid.hpp"

namespace fdwave {

namespace detail {

// Clamped per-axis sample position of an interior grid node inside the raw
// array: raw sample i sits at bbox_min + i * extent/(raw_n - 1).
inline void axis_weights(double coord, double lo, double hi, std::size_t raw_n,
                         std::size_t& i0, double& w) {
    const double pos = (coord - lo) / (hi - lo) * static_cast<double>(raw_n - 1);
    const double clamped = std::clamp(pos, 0.0, static_cast<double>(raw_n - 1));
    i0 = std::min(static_cast<std::size_t>(clamped), raw_n - 2);
    w = clamped - static_cast<double>(i0);
}

}  // namespace detail

/// Multilinear resampling of a raw array (shape >= 2 per axis, spanning the
/// physical bounding box) onto the grid. Interior nodes are interpolated;
/// absorbing-layer and halo nodes take the value of the nearest interior
/// node (edge replication).
template <typename T>
Field<T> resample_model(std::span<const double> raw,
                        std::span<const std::size_t> raw_shape, const Grid& grid) {
    if (raw_shape.size() != static_cast<std::size_t>(grid.ndim))
        throw std::invalid_argument("resample_model: dimension mismatch with grid");
    std::size_t count = 1;
    for (std::size_t n : raw_shape) {
        if (n < 2)
            throw std::invalid_argument("resample_model: raw shape must be >= 2 per axis");
        count *= n;
    }
    if (count != raw.size())
        throw std::invalid_argument("resample_model: raw size does not match shape");

    const auto padded = grid.padded_shape();
    Field<T> out(grid.ndim, padded);
    const std::size_t h = static_cast<std::size_t>(grid.halo);

    // offset of interior node 0 inside the padded array, per axis
    std::array<std::size_t, 3> lo{0, 0, 0};
    std::array<std::size_t, 3> n_int{1, 1, 1};
    for (int a = 0; a < grid.ndim; ++a) {
        lo[a] = h + grid.damping_cells[a][0];
        n_int[a] = grid.interior_shape[a];
    }

    const bool is3d = grid.ndim == 3;
    const std::size_t rsz = is3d ? raw_shape[2] : 1;
    const std::size_t rsx = raw_shape[1];

    auto raw_at = [&](std::size_t iz, std::size_t ix, std::size_t iy) {
        return raw[(iz * rsx + ix) * rsz + iy];
    };

    for (std::size_t pz = 0; pz < padded[0]; ++pz) {
        // clamp padded index to the interior range, then interpolate
        const std::size_t cz = std::clamp(pz, lo[0], lo[0] + n_int[0] - 1) - lo[0];
        std::size_t z0;
        double wz;
        detail::axis_weights(grid.bbox[0][0] + static_cast<double>(cz) * grid.spacing[0],
                             grid.bbox[0][0], grid.bbox[0][1], raw_shape[0], z0, wz);
        for (std::size_t px = 0; px < padded[1]; ++px) {
            const std::size_t cx = std::clamp(px, lo[1], lo[1] + n_int[1] - 1) - lo[1];
            std::size_t x0;
            double wx;
            detail::axis_weights(
                grid.bbox[1][0] + static_cast<double>(cx) * grid.spacing[1],
                grid.bbox[1][0], grid.bbox[1][1], raw_shape[1], x0, wx);
            for (std::size_t py = 0; py < padded[2]; ++py) {
                double value;
                if (!is3d) {
                    value = (1 - wz) * ((1 - wx) * raw_at(z0, x0, 0) + wx * raw_at(z0, x0 + 1, 0)) +
                            wz * ((1 - wx) * raw_at(z0 + 1, x0, 0) + wx * raw_at(z0 + 1, x0 + 1, 0));
                } else {
                    const std::size_t cy = std::clamp(py, lo[2], lo[2] + n_int[2] - 1) - lo[2];
                    std::size_t y0;
                    double wy;
                    detail::axis_weights(
                        grid.bbox[2][0] + static_cast<double>(cy) * grid.spacing[2],
                        grid.bbox[2][0], grid.bbox[2][1], raw_shape[2], y0, wy);
                    double c00 = (1 - wy) * raw_at(z0, x0, y0) + wy * raw_at(z0, x0, y0 + 1);
                    double c01 = (1 - wy) * raw_at(z0, x0 + 1, y0) + wy * raw_at(z0, x0 + 1, y0 + 1);
                    double c10 = (1 - wy) * raw_at(z0 + 1, x0, y0) + wy * raw_at(z0 + 1, x0, y0 + 1);
                    double c11 = (1 - wy) * raw_at(z0 + 1, x0 + 1, y0) + wy * raw_at(z0 + 1, x0 + 1, y0 + 1);
                    value = (1 - wz) * ((1 - wx) * c00 + wx * c01) +
                            wz * ((1 - wx) * c10 + wx * c11);
                }
                out(pz, px, py) = static_cast<T>(value);
            }
        }
    }
    return out;
}

/// Velocity (m/s) and optional density (g/cm^3) on the padded grid.
template <typename T>
struct MaterialModel {
    Field<T> velocity;
    std::optional<Field<T>> density;
    T c_max = T(0);
};

template <typename T>
MaterialModel<T> make_material_model(Field<T> velocity,
                                     std::optional<Field<T>> density = std::nullopt) {
    MaterialModel<T> m;
    T cmax = T(0);
    for (const T v : velocity.values()) {
        if (!(v > T(0)))
            throw std::invalid_argument("material model: velocity must be > 0 everywhere");
        cmax = std::max(cmax, v);
    }
    if (density) {
        if (density->size() != velocity.size())
            throw std::invalid_argument("material model: density shape mismatch");
        for (const T d : density->values())
            if (!(d > T(0)))
                throw std::invalid_argument("material model: density must be > 0 everywhere");
    }
    m.velocity = std::move(velocity);
    m.density = std::move(density);
    m.c_max = cmax;
    return m;
}

/// Damping profile eta = alpha * d(x)^power, where d is the Euclidean
/// distance (meters) from the point to the physical box; zero inside it.
template <typename T>
struct DampingField {
    Field<T> eta;  // 1/s, on the padded grid
    double alpha = 0.0;
    double power = 0.0;
};

template <typename T>
DampingField<T> damping_field(const Grid& grid, double alpha, double power) {
    if (alpha < 0.0 || power < 0.0)
        throw std::invalid_argument("damping_field: alpha and power must be >= 0");
    DampingField<T> df;
    df.alpha = alpha;
    df.power = power;
    const auto padded = grid.padded_shape();
    df.eta = Field<T>(grid.ndim, padded);
    const std::size_t h = static_cast<std::size_t>(grid.halo);

    // Per-axis excess distance beyond the physical box, in meters. The box is
    // taken as the span of the interior nodes so that every interior node has
    // distance zero even when the extent is not an exact multiple of the
    // spacing.
    auto excess = [&](int axis, std::size_t p) {
        const auto rel = static_cast<std::ptrdiff_t>(p) -
                         static_cast<std::ptrdiff_t>(h) -
                         static_cast<std::ptrdiff_t>(grid.damping_cells[axis][0]);
        if (rel < 0) return static_cast<double>(-rel) * grid.spacing[axis];
        const auto n = static_cast<std::ptrdiff_t>(grid.interior_shape[axis]);
        if (rel >= n) return static_cast<double>(rel - n + 1) * grid.spacing[axis];
        return 0.0;
    };

    for (std::size_t pz = 0; pz < padded[0]; ++pz) {
        const double dz = excess(0, pz);
        for (std::size_t px = 0; px < padded[1]; ++px) {
            const double dx = excess(1, px);
            for (std::size_t py = 0; py < padded[2]; ++py) {
                const double dy = grid.ndim == 3 ? excess(2, py) : 0.0;
                const double d = std::sqrt(dz * dz + dx * dx + dy * dy);
                df.eta(pz, px, py) =
                    d > 0.0 ? static_cast<T>(alpha * std::pow(d, power)) : T(0);
            }
        }
    }
    return df;
}

}  // namespace fdwave
