#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdwave/acquisition.hpp"
#include "fdwave/fft.hpp"
#include "fdwave/grid.hpp"
#include "fdwave/kernel.hpp"
#include "fdwave/model.hpp"
#include "fdwave/special.hpp"
#include "fdwave/stencil.hpp"
#include "fdwave/time_axis.hpp"

// Built-in correctness harness: analytical 2D reference traces, manufactured
// solutions for the variable-density equation, error norms, and
// convergence-rate estimation.

namespace fdwave {

/// Reference trace for a point source in an unbounded homogeneous 2D medium,
///   u(r, t) = -(i/2) sum_w H0^(2)(w r / c) s^(w) e^{iwt},
/// synthesized discretely: forward DFT of the wavelet (zero-padded by
/// `pad_factor`, rounded up to a power of two), multiply positive
/// frequencies w_k = 2 pi k / (M dt) by -(i/2) H0^(2)(w_k r / c), zero the DC
/// and Nyquist bins, enforce conjugate symmetry, inverse DFT, real part.
inline std::vector<double> analytical_response(std::span<const double> wavelet,
                                               double dt, double distance, double c,
                                               std::size_t pad_factor = 4) {
    if (!(distance > 0.0))
        throw std::invalid_argument("analytical_response: distance must be > 0");
    const std::size_t n = wavelet.size();
    const std::size_t m = next_pow2(std::max<std::size_t>(pad_factor * n, 4));
    std::vector<std::complex<double>> spec(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) spec[i] = wavelet[i];
    fft(spec);

    std::vector<std::complex<double>> u(m, {0.0, 0.0});
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double omega = 2.0 * M_PI * static_cast<double>(k) /
                             (static_cast<double>(m) * dt);
        const double x = omega * distance / c;
        const std::complex<double> hankel2(bessel_j0(x), -bessel_y0(x));
        u[k] = std::complex<double>(0.0, -0.5) * hankel2 * spec[k];
        u[m - k] = std::conj(u[k]);
    }
    fft(u, /*inverse=*/true);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i].real();
    return out;
}

/// Euclidean norm of the difference between two equally long traces.
inline double l2_error(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l2_error: trace lengths must match");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

struct ConvergencePoint {
    double resolution;  // h in meters or dt in seconds
    double error;
};

struct ConvergenceReport {
    std::string label;
    double nominal = 0.0;  // theoretical order
    std::vector<ConvergencePoint> points;
    double slope = 0.0;
    double seconds = 0.0;
};

/// Least-squares slope of log(error) against log(resolution).
inline double convergence_rate(std::span<const ConvergencePoint> points) {
    if (points.size() < 2)
        throw std::invalid_argument("convergence_rate: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = std::log(p.resolution);
        const double y = std::log(p.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Manufactured solution for the variable-density equation on [0, 440]^2 with
// c = 2000 m/s:
//   u*(x, z, t) = sin(pi x/440) sin(pi z/440) sin(20 pi t) sin(20 pi (t+dt))
//   rho(x, z)   = (1000 + sin(pi x/440)) (1000 + sin(pi z/440))
// The forcing comes from substituting u* and rho into the expanded equation
//   (1/c^2) u_tt + (grad rho / rho) . grad u - lap u = f
// in closed form. The time factor vanishes at t = 0 and t = -dt, so the
// quiescent two-level start is exact.
// ---------------------------------------------------------------------------
namespace mms {

inline constexpr double kExtent = 440.0;
inline constexpr double kVelocity = 2000.0;
inline constexpr double kWaveNumber = M_PI / kExtent;
inline constexpr double kOmega = 20.0 * M_PI;

inline double space_factor(double x, double z) {
    return std::sin(kWaveNumber * x) * std::sin(kWaveNumber * z);
}
inline double time_factor(double t, double dt) {
    return std::sin(kOmega * t) * std::sin(kOmega * (t + dt));
}
inline double time_factor_dd(double t, double dt) {
    return 2.0 * kOmega * kOmega * std::cos(kOmega * (2.0 * t + dt));
}
inline double density(double x, double z) {
    return (1000.0 + std::sin(kWaveNumber * x)) * (1000.0 + std::sin(kWaveNumber * z));
}
inline double solution(double x, double z, double t, double dt) {
    return space_factor(x, z) * time_factor(t, dt);
}
// spatially dependent factor of the grad(rho)/rho . grad(u) term
inline double density_coupling(double x, double z) {
    const double gx = kWaveNumber * std::cos(kWaveNumber * x) /
                      (1000.0 + std::sin(kWaveNumber * x));
    const double gz = kWaveNumber * std::cos(kWaveNumber * z) /
                      (1000.0 + std::sin(kWaveNumber * z));
    return gx * kWaveNumber * std::cos(kWaveNumber * x) * std::sin(kWaveNumber * z) +
           gz * kWaveNumber * std::sin(kWaveNumber * x) * std::cos(kWaveNumber * z);
}
inline double forcing(double x, double z, double t, double dt) {
    const double s = space_factor(x, z);
    return s * (time_factor_dd(t, dt) / (kVelocity * kVelocity) +
                2.0 * kWaveNumber * kWaveNumber * time_factor(t, dt)) +
           density_coupling(x, z) * time_factor(t, dt);
}

}  // namespace mms

struct MmsPointValues {
    double u;
    double rho;
    double f;
};

inline MmsPointValues mms_fields(double x, double z, double t, double dt) {
    return {mms::solution(x, z, t, dt), mms::density(x, z),
            mms::forcing(x, z, t, dt)};
}

// ---------------------------------------------------------------------------
// Study presets. The studies target the continuum problem
//   (1/c^2) p_tt - lap p = 2 s(t) delta(x - x_src),
// the source convention implied by the -(i/2) H0^(2) reference. A source
// injected with unit-sum nodal weights carries a cell-area factor, so the
// wavelet is injected with gain 2 / (dz dx); this makes runs at different
// grid spacings (and the analytical reference) directly comparable.
// ---------------------------------------------------------------------------

inline double discrete_source_gain(double dz, double dx) { return 2.0 / (dz * dx); }

namespace detail {

/// Homogeneous-medium receiver trace for the verification studies.
template <typename T>
std::vector<double> homogeneous_trace(double extent, double h, double c, int order,
                                      double dt, double tf, double peak_frequency,
                                      std::array<double, 2> src,
                                      std::array<double, 2> rec) {
    const std::array<double, 4> bbox{0.0, extent, 0.0, extent};
    const std::array<double, 2> spacing{h, h};
    Grid grid = build_grid(bbox, spacing, order,
                           sizeof(T) == 4 ? Precision::Single : Precision::Double);
    const std::array<double, 4> no_damping{0.0, 0.0, 0.0, 0.0};
    grid = extend_with_damping(grid, no_damping);

    Field<T> velocity(grid.ndim, grid.padded_shape());
    velocity.fill(static_cast<T>(c));
    MaterialModel<T> materials = make_material_model<T>(std::move(velocity));
    DampingField<T> damping = damping_field<T>(grid, 0.0, 0.0);

    TimeAxis axis = build_time_axis(tf, dt, 0, materials.c_max, grid);
    Solver<T> solver(grid, std::move(materials), std::move(damping),
                     BoundarySpec::uniform(BoundaryCondition::NullDirichlet), axis,
                     make_stencil(order));

    PointSet src_set = make_point_set({{src[0], src[1], 0.0}}, 4);
    PointSet rec_set = make_point_set({{rec[0], rec[1], 0.0}}, 4);
    std::vector<double> wavelet = ricker_wavelet(axis, peak_frequency);
    const double gain = discrete_source_gain(h, h);
    for (double& s : wavelet) s *= gain;
    solver.set_sources(build_injection_map(src_set, grid), std::move(wavelet));
    solver.set_receivers(build_injection_map(rec_set, grid));

    ForwardResult<T> result = solver.forward();
    std::vector<double> trace(result.seismogram.data.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        trace[i] = static_cast<double>(result.seismogram.data[i]);
    return trace;
}

}  // namespace detail

struct TemporalStudyPresets {
    double extent = 400.0;        // meters per side
    double c = 1500.0;            // m/s
    double h = 0.5;               // fixed grid spacing
    int order = 8;                // spatial order, far above the time error
    double tf = 0.15;             // seconds
    double peak_frequency = 60.0; // Hz
    std::array<double, 2> source{200.0, 200.0};
    std::array<double, 2> receiver{200.0, 285.0};  // 85 m offset, on-node
    std::vector<double> dts{1e-4, 5e-5, 2.5e-5};
    std::size_t reference_pad = 32;
};

/// Fixes h, sweeps dt, measures the receiver-trace error against the
/// analytical reference. Traces are compared on the coarsest common time
/// sampling so the norms are commensurable. Expected slope: 2.
inline ConvergenceReport temporal_convergence_study(const TemporalStudyPresets& p = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceReport report;
    report.label = "temporal";
    report.nominal = 2.0;
    const double dt_coarse = *std::max_element(p.dts.begin(), p.dts.end());
    const double offset = std::hypot(p.receiver[0] - p.source[0],
                                     p.receiver[1] - p.source[1]);
    for (const double dt : p.dts) {
        const std::vector<double> trace = detail::homogeneous_trace<double>(
            p.extent, p.h, p.c, p.order, dt, p.tf, p.peak_frequency, p.source,
            p.receiver);
        const std::vector<double> wavelet =
            ricker_samples(trace.size(), dt, p.peak_frequency);
        const std::vector<double> ref =
            analytical_response(wavelet, dt, offset, p.c, p.reference_pad);

        const auto stride = static_cast<std::size_t>(std::llround(dt_coarse / dt));
        std::vector<double> a, b;
        for (std::size_t i = 0; i < trace.size(); i += stride) {
            a.push_back(trace[i]);
            b.push_back(ref[i]);
        }
        report.points.push_back({dt, l2_error(a, b)});
    }
    report.slope = convergence_rate(report.points);
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct SpatialStudyPresets {
    double extent = 400.0;
    double c = 1500.0;
    double dt = 2.5e-5;            // fixed, small enough to expose space error
    double tf = 0.15;
    double peak_frequency = 60.0;
    std::array<double, 2> source{200.0, 200.0};
    std::array<double, 2> receiver{200.0, 284.0};  // on-node for h in {2,1,.5,.25}
    std::vector<double> spacings{2.0, 1.0, 0.5};
    double reference_h = 0.25;
    int reference_order = 8;
};

/// Fixes dt, sweeps h per spatial order. The error is measured against a
/// fine-grid run (reference_h, reference_order) at the same dt, which
/// cancels the shared time-discretization error that would otherwise floor
/// the higher orders. Expected slope: the spatial order.
inline std::vector<ConvergenceReport> spatial_convergence_study(
    std::span<const int> orders, const SpatialStudyPresets& p = {}) {
    const std::vector<double> reference = detail::homogeneous_trace<double>(
        p.extent, p.reference_h, p.c, p.reference_order, p.dt, p.tf,
        p.peak_frequency, p.source, p.receiver);

    std::vector<ConvergenceReport> reports;
    for (const int order : orders) {
        const auto t0 = std::chrono::steady_clock::now();
        ConvergenceReport report;
        report.label = "spatial order " + std::to_string(order);
        report.nominal = static_cast<double>(order);
        for (const double h : p.spacings) {
            const std::vector<double> trace = detail::homogeneous_trace<double>(
                p.extent, h, p.c, order, p.dt, p.tf, p.peak_frequency, p.source,
                p.receiver);
            report.points.push_back({h, l2_error(trace, reference)});
        }
        report.slope = convergence_rate(report.points);
        report.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        reports.push_back(std::move(report));
    }
    return reports;
}

struct AnalyticalCasePresets {
    double extent = 400.0;
    double c = 1500.0;
    double h = 0.5;
    double dt = 1e-4;
    double tf = 0.15;
    int order = 8;
    double peak_frequency = 15.0;
    std::array<double, 2> source{200.0, 200.0};
    std::array<double, 2> receiver{200.0, 285.0};
    std::size_t reference_pad = 4;
};

struct AnalyticalCaseReport {
    double max_abs_diff = 0.0;
    double reference_peak = 0.0;
    double relative_error = 0.0;  // max_abs_diff / reference_peak
    double seconds = 0.0;
};

/// Single-precision propagation against the Hankel-function reference.
inline AnalyticalCaseReport analytical_agreement_case(const AnalyticalCasePresets& p = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> trace = detail::homogeneous_trace<float>(
        p.extent, p.h, p.c, p.order, p.dt, p.tf, p.peak_frequency, p.source,
        p.receiver);
    const std::size_t n = trace.size();
    const std::vector<double> wavelet = ricker_samples(n, p.dt, p.peak_frequency);
    const double offset = std::hypot(p.receiver[0] - p.source[0],
                                     p.receiver[1] - p.source[1]);
    const std::vector<double> ref =
        analytical_response(wavelet, p.dt, offset, p.c, p.reference_pad);

    AnalyticalCaseReport report;
    for (std::size_t i = 0; i < n; ++i) {
        report.max_abs_diff = std::max(report.max_abs_diff, std::abs(trace[i] - ref[i]));
        report.reference_peak = std::max(report.reference_peak, std::abs(ref[i]));
    }
    report.relative_error = report.max_abs_diff / report.reference_peak;
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

struct MmsStudyPresets {
    double dt = 5e-5;
    double tf = 0.2;
    int order = 2;
    std::array<double, 2> receiver{280.0, 280.0};
    std::vector<double> spacings{8.0, 4.0, 2.0};
};

/// Variable-density check by manufactured solution, double precision.
/// Error is the L2 trace distance to u* at the receiver per grid spacing.
inline ConvergenceReport mms_convergence_study(const MmsStudyPresets& p = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceReport report;
    report.label = "mms variable density";
    report.nominal = static_cast<double>(p.order);

    for (const double h : p.spacings) {
        const std::array<double, 4> bbox{0.0, mms::kExtent, 0.0, mms::kExtent};
        const std::array<double, 2> spacing{h, h};
        Grid grid = build_grid(bbox, spacing, p.order, Precision::Double);
        grid = extend_with_damping(grid, std::array<double, 4>{0, 0, 0, 0});

        const auto padded = grid.padded_shape();
        Field<double> velocity(grid.ndim, padded);
        velocity.fill(mms::kVelocity);
        Field<double> rho(grid.ndim, padded);
        Field<double> f_dd(grid.ndim, padded);   // multiplies T''(t)
        Field<double> f_t(grid.ndim, padded);    // multiplies T(t)
        const auto halo = static_cast<std::ptrdiff_t>(grid.halo);
        for (std::size_t iz = 0; iz < padded[0]; ++iz) {
            const double z = grid.bbox[0][0] +
                             (static_cast<double>(static_cast<std::ptrdiff_t>(iz) - halo)) * h;
            for (std::size_t ix = 0; ix < padded[1]; ++ix) {
                const double x = grid.bbox[1][0] +
                                 (static_cast<double>(static_cast<std::ptrdiff_t>(ix) - halo)) * h;
                rho(iz, ix) = mms::density(x, z);
                const double s = mms::space_factor(x, z);
                f_dd(iz, ix) = s / (mms::kVelocity * mms::kVelocity);
                f_t(iz, ix) = 2.0 * mms::kWaveNumber * mms::kWaveNumber * s +
                              mms::density_coupling(x, z);
            }
        }

        MaterialModel<double> materials =
            make_material_model<double>(std::move(velocity), std::move(rho));
        DampingField<double> damping = damping_field<double>(grid, 0.0, 0.0);
        TimeAxis axis = build_time_axis(p.tf, p.dt, 0, materials.c_max, grid);

        Solver<double> solver(grid, std::move(materials), std::move(damping),
                              BoundarySpec::uniform(BoundaryCondition::NullDirichlet),
                              axis, make_stencil(p.order));

        std::vector<double> amp_dd(axis.n_steps), amp_t(axis.n_steps);
        for (std::size_t n = 0; n < axis.n_steps; ++n) {
            const double t = axis.time(n);
            amp_dd[n] = mms::time_factor_dd(t, p.dt);
            amp_t[n] = mms::time_factor(t, p.dt);
        }
        solver.add_volume_source({std::move(f_dd), std::move(amp_dd)});
        solver.add_volume_source({std::move(f_t), std::move(amp_t)});

        PointSet rec_set = make_point_set({{p.receiver[0], p.receiver[1], 0.0}}, 4);
        solver.set_receivers(build_injection_map(rec_set, grid));

        ForwardResult<double> result = solver.forward();
        std::vector<double> trace(result.seismogram.data.begin(),
                                  result.seismogram.data.end());
        std::vector<double> exact(axis.sample_count());
        for (std::size_t n = 0; n < exact.size(); ++n)
            exact[n] = mms::solution(p.receiver[1], p.receiver[0], axis.time(n), p.dt);
        report.points.push_back({h, l2_error(trace, exact)});
    }
    report.slope = convergence_rate(report.points);
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace fdwave
