#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdwave/field.hpp"
#include "fdwave/grid.hpp"
#include "fdwave/special.hpp"
#include "fdwave/time_axis.hpp"

// Off-grid source/receiver handling: Kaiser-windowed sinc interpolation
// (Hicks 2002) and wavelet generation.

namespace fdwave {

/// Kaiser window W(x) = I0(b sqrt(1 - (x/r)^2)) / I0(b) for |x| <= r, else 0.
inline double kaiser_window(double x, int radius, double b) {
    if (radius < 1) throw std::invalid_argument("kaiser_window: radius must be >= 1");
    if (!(b > 0.0)) throw std::invalid_argument("kaiser_window: b must be > 0");
    const double u = x / static_cast<double>(radius);
    if (std::abs(u) > 1.0) return 0.0;
    return bessel_i0(b * std::sqrt(1.0 - u * u)) / bessel_i0(b);
}

/// Optimal Kaiser b per window radius, from Hicks (2002), Table 1
/// (monopole sources, k_max = pi/2).
inline double default_kaiser_b(int radius) {
    static constexpr std::array<double, 10> table = {
        1.24, 2.94, 4.53, 6.31, 7.91, 9.42, 10.88, 12.33, 13.80, 14.93};
    if (radius < 1 || radius > 10)
        throw std::invalid_argument("window radius must be in [1, 10]");
    return table[static_cast<std::size_t>(radius - 1)];
}

/// 1D windowed-sinc weights w_n = W(n + alpha) sinc(n + alpha) at integer
/// offsets n around the nearest node, alpha in (-0.5, 0.5]. Offsets run
/// n_min..n_min + size - 1; taps outside the window support are omitted.
struct HicksWeights {
    int n_min = 0;
    std::vector<double> w;
};

inline HicksWeights hicks_weights_1d(double alpha, int radius, double b) {
    HicksWeights hw;
    const double r = static_cast<double>(radius);
    const int n_lo = static_cast<int>(std::ceil(-r - alpha));
    const int n_hi = static_cast<int>(std::floor(r - alpha));
    hw.n_min = n_lo;
    hw.w.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (int n = n_lo; n <= n_hi; ++n) {
        const double x = static_cast<double>(n) + alpha;
        hw.w.push_back(kaiser_window(x, radius, b) * sinc(x));
    }
    return hw;
}

/// A set of physical point coordinates plus the interpolation parameters.
struct PointSet {
    std::vector<std::array<double, 3>> coordinates;  // meters, Z,X[,Y]
    int window_radius = 4;
    double kaiser_b = 6.31;
};

inline PointSet make_point_set(std::vector<std::array<double, 3>> coordinates,
                               int window_radius) {
    PointSet ps;
    ps.coordinates = std::move(coordinates);
    ps.window_radius = window_radius;
    ps.kaiser_b = default_kaiser_b(window_radius);
    return ps;
}

/// Per-point sparse weights on the padded grid. For a point exactly on a
/// node this degenerates to one unit-weight entry.
struct InterpolationMap {
    struct Entry {
        std::size_t index;  // flat index into the padded field
        double weight;
    };
    std::vector<std::vector<Entry>> points;
};

/// Tensor product of per-axis windowed-sinc stencils. Taps protruding past
/// the extended grid are dropped without renormalizing the rest.
inline InterpolationMap build_injection_map(const PointSet& set, const Grid& grid) {
    if (set.window_radius < 1 || set.window_radius > 10)
        throw std::invalid_argument("window radius must be in [1, 10]");
    InterpolationMap map;
    map.points.reserve(set.coordinates.size());

    const auto padded = grid.padded_shape();
    const std::array<std::size_t, 3> strides = {padded[1] * padded[2], padded[2], 1};
    const auto h = static_cast<std::ptrdiff_t>(grid.halo);

    for (const auto& coord : set.coordinates) {
        std::array<HicksWeights, 3> axis_w;
        std::array<std::ptrdiff_t, 3> nearest{0, 0, 0};
        for (int a = 0; a < grid.ndim; ++a) {
            if (coord[a] < grid.bbox[a][0] - 1e-9 || coord[a] > grid.bbox[a][1] + 1e-9)
                throw std::invalid_argument("point coordinate outside physical bounding box");
            // position in extended-grid units
            const double pos = (coord[a] - grid.bbox[a][0]) / grid.spacing[a] +
                               static_cast<double>(grid.damping_cells[a][0]);
            // nearest = floor(pos + 1/2) puts alpha = nearest - pos in (-1/2, 1/2]
            nearest[a] = static_cast<std::ptrdiff_t>(std::floor(pos + 0.5));
            const double alpha = static_cast<double>(nearest[a]) - pos;
            axis_w[a] = hicks_weights_1d(alpha, set.window_radius, set.kaiser_b);
        }
        if (grid.ndim == 2) {
            axis_w[2] = HicksWeights{0, {1.0}};
            nearest[2] = 0;
        }

        std::vector<InterpolationMap::Entry> entries;
        const auto ext = grid.extended_shape;
        auto in_range = [&](int a, std::ptrdiff_t i) {
            return i >= 0 && i < static_cast<std::ptrdiff_t>(ext[a]);
        };
        for (std::size_t kz = 0; kz < axis_w[0].w.size(); ++kz) {
            const std::ptrdiff_t iz = nearest[0] + axis_w[0].n_min + static_cast<std::ptrdiff_t>(kz);
            if (!in_range(0, iz)) continue;
            for (std::size_t kx = 0; kx < axis_w[1].w.size(); ++kx) {
                const std::ptrdiff_t ix = nearest[1] + axis_w[1].n_min + static_cast<std::ptrdiff_t>(kx);
                if (!in_range(1, ix)) continue;
                for (std::size_t ky = 0; ky < axis_w[2].w.size(); ++ky) {
                    const std::ptrdiff_t iy = grid.ndim == 3
                        ? nearest[2] + axis_w[2].n_min + static_cast<std::ptrdiff_t>(ky)
                        : 0;
                    if (grid.ndim == 3 && !in_range(2, iy)) continue;
                    const double w = axis_w[0].w[kz] * axis_w[1].w[kx] * axis_w[2].w[ky];
                    if (w == 0.0) continue;
                    const std::size_t flat =
                        static_cast<std::size_t>(iz + h) * strides[0] +
                        static_cast<std::size_t>(ix + h) * strides[1] +
                        static_cast<std::size_t>(iy + (grid.ndim == 3 ? h : 0));
                    entries.push_back({flat, w});
                }
            }
        }
        map.points.push_back(std::move(entries));
    }
    return map;
}

/// Dot product of the per-point weights with a field level; one value per point.
template <typename T>
std::vector<T> sample_receivers(const Field<T>& level, const InterpolationMap& map) {
    std::vector<T> out;
    out.reserve(map.points.size());
    for (const auto& entries : map.points) {
        double acc = 0.0;
        for (const auto& e : entries)
            acc += e.weight * static_cast<double>(level[e.index]);
        out.push_back(static_cast<T>(acc));
    }
    return out;
}

/// Ricker wavelet s(t) = (1 - 2 pi^2 f^2 tau^2) exp(-pi^2 f^2 tau^2),
/// tau = t - 1/f. The 1/f delay makes the wavelet start near zero amplitude.
inline std::vector<double> ricker_samples(std::size_t count, double dt,
                                          double peak_frequency) {
    if (!(peak_frequency > 0.0))
        throw std::invalid_argument("ricker: peak frequency must be > 0");
    std::vector<double> s(count);
    const double t0 = 1.0 / peak_frequency;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double tau = static_cast<double>(n) * dt - t0;
        const double q = M_PI * M_PI * peak_frequency * peak_frequency * tau * tau;
        s[n] = (1.0 - 2.0 * q) * std::exp(-q);
    }
    return s;
}

inline std::vector<double> ricker_wavelet(const TimeAxis& axis, double peak_frequency) {
    return ricker_samples(axis.sample_count(), axis.dt, peak_frequency);
}

/// Resamples raw amplitudes (assumed uniform over [0, tf]) onto the time
/// axis by linear interpolation.
inline std::vector<double> resample_wavelet(std::span<const double> samples,
                                            const TimeAxis& axis) {
    if (samples.size() < 2)
        throw std::invalid_argument("wavelet file needs at least two samples");
    std::vector<double> s(axis.sample_count());
    const double scale = static_cast<double>(samples.size() - 1) / axis.tf;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double pos = std::min(axis.time(n) * scale,
                                    static_cast<double>(samples.size() - 1));
        const auto i = std::min(static_cast<std::size_t>(pos), samples.size() - 2);
        const double w = pos - static_cast<double>(i);
        s[n] = (1.0 - w) * samples[i] + w * samples[i + 1];
    }
    return s;
}

}  // namespace fdwave
