#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fdwave/acquisition.hpp"
#include "fdwave/field.hpp"
#include "fdwave/grid.hpp"
#include "fdwave/model.hpp"
#include "fdwave/stencil.hpp"
#include "fdwave/time_axis.hpp"

namespace fdwave {

enum class BoundaryCondition { NullDirichlet, NullNeumann, None };

inline BoundaryCondition boundary_condition_from_string(const std::string& s) {
    if (s == "null_dirichlet") return BoundaryCondition::NullDirichlet;
    if (s == "null_neumann") return BoundaryCondition::NullNeumann;
    if (s == "none") return BoundaryCondition::None;
    throw std::invalid_argument("unknown boundary condition: " + s);
}

/// One condition per face, [axis][low/high].
struct BoundarySpec {
    std::array<std::array<BoundaryCondition, 2>, 3> face{};

    static BoundarySpec uniform(BoundaryCondition bc) {
        BoundarySpec spec;
        for (auto& axis : spec.face) axis = {bc, bc};
        return spec;
    }
};

/// Thrown when the field develops non-finite values (unstable timestep).
class instability_error : public std::runtime_error {
public:
    instability_error(std::size_t step, double max_abs)
        : std::runtime_error("non-finite wavefield at step " + std::to_string(step) +
                             " (max |p| = " + std::to_string(max_abs) +
                             "); timestep is likely unstable"),
          step_(step),
          max_abs_(max_abs) {}
    std::size_t step() const { return step_; }
    double max_abs() const { return max_abs_; }

private:
    std::size_t step_;
    double max_abs_;
};

/// Fills the halo of a field according to the boundary conditions and forces
/// null-Dirichlet faces to zero. Ghost values mirror about the face node:
/// dirichlet antisymmetric, neumann symmetric, none zero.
template <typename T>
void apply_boundary(Field<T>& f, const Grid& grid, const BoundarySpec& spec) {
    const auto padded = grid.padded_shape();
    const auto h = static_cast<std::ptrdiff_t>(grid.halo);
    for (int axis = 0; axis < grid.ndim; ++axis) {
        const auto stride = static_cast<std::ptrdiff_t>(f.strides()[axis]);
        const auto n_ext = static_cast<std::ptrdiff_t>(grid.extended_shape[axis]);
        // iterate every line along `axis` across the full padded extent of
        // the other axes
        const int a1 = axis == 0 ? 1 : 0;
        const int a2 = axis == 2 ? 1 : 2;
        for (std::size_t i1 = 0; i1 < padded[a1]; ++i1) {
            for (std::size_t i2 = 0; i2 < padded[a2]; ++i2) {
                T* line = f.data() + i1 * f.strides()[a1] + i2 * f.strides()[a2];
                for (int side = 0; side < 2; ++side) {
                    const BoundaryCondition bc = spec.face[axis][side];
                    // face node position along the line, and outward direction
                    const std::ptrdiff_t face = side == 0 ? h : h + n_ext - 1;
                    const std::ptrdiff_t out = side == 0 ? -1 : 1;
                    T* fp = line + face * stride;
                    if (bc == BoundaryCondition::NullDirichlet) {
                        *fp = T(0);
                        for (std::ptrdiff_t k = 1; k <= h; ++k)
                            fp[out * k * stride] = -fp[-out * k * stride];
                    } else if (bc == BoundaryCondition::NullNeumann) {
                        for (std::ptrdiff_t k = 1; k <= h; ++k)
                            fp[out * k * stride] = fp[-out * k * stride];
                    } else {
                        for (std::ptrdiff_t k = 1; k <= h; ++k)
                            fp[out * k * stride] = T(0);
                    }
                }
            }
        }
    }
}

/// Per-axis grad(rho)/rho on the padded grid, evaluated with the
/// first-derivative stencil. Computed once before the time loop.
template <typename T>
std::array<Field<T>, 3> density_log_gradient(const Field<T>& rho, const Grid& grid,
                                             const StencilCoeffs& coeffs) {
    std::array<Field<T>, 3> g;
    const auto padded = grid.padded_shape();
    const auto h = static_cast<std::size_t>(grid.halo);
    const int r = coeffs.radius;
    for (int axis = 0; axis < grid.ndim; ++axis) {
        g[axis] = Field<T>(grid.ndim, padded);
        const auto stride = static_cast<std::ptrdiff_t>(rho.strides()[axis]);
        const double inv2h = 1.0 / (2.0 * grid.spacing[axis]);
        std::array<std::size_t, 3> lo{0, 0, 0}, hi{1, 1, 1};
        for (int a = 0; a < grid.ndim; ++a) {
            lo[a] = h;
            hi[a] = h + grid.extended_shape[a];
        }
        for (std::size_t iz = lo[0]; iz < hi[0]; ++iz)
            for (std::size_t ix = lo[1]; ix < hi[1]; ++ix)
                for (std::size_t iy = lo[2]; iy < hi[2]; ++iy) {
                    const std::size_t i = rho.index(iz, ix, iy);
                    double acc = 0.0;
                    for (int j = 1; j <= r; ++j)
                        acc += coeffs.first[j - 1] *
                               (static_cast<double>(rho[i + j * stride]) -
                                static_cast<double>(rho[i - j * stride]));
                    g[axis][i] = static_cast<T>(acc * inv2h /
                                                static_cast<double>(rho[i]));
                }
    }
    return g;
}

/// Dense forcing field modulated by a per-step amplitude (used by the
/// manufactured-solution verification).
template <typename T>
struct ModulatedField {
    Field<T> field;                  // padded shape
    std::vector<double> amplitude;   // one entry per step, evaluated at t_n
};

template <typename T>
struct Seismogram {
    std::size_t n_receivers = 0;
    std::vector<T> data;  // (n_steps + 1) rows * n_receivers, row-major
    std::vector<std::array<double, 3>> coordinates;

    T at(std::size_t row, std::size_t rec) const { return data[row * n_receivers + rec]; }
};

template <typename T>
struct ForwardResult {
    std::vector<Field<T>> snapshots;        // extended-grid copies, halo stripped
    std::vector<std::size_t> snapshot_steps;
    Seismogram<T> seismogram;
    double kernel_seconds = 0.0;            // time loop only
};

enum class Backend { Serial, Parallel };

/// Explicit second-order time stepper for the damped acoustic equation,
///   p+ = [c^2 dt^2 (lap p - grad(rho)/rho . grad p + F) + 2 p - (1 - eta dt) p-]
///        / (1 + eta dt),
/// evaluated at every extended-grid point. The density term is active only
/// when the material model carries a density field.
template <typename T>
class Solver {
public:
    Solver(Grid grid, MaterialModel<T> materials, DampingField<T> damping,
           BoundarySpec boundary, TimeAxis time, StencilCoeffs coeffs)
        : grid_(std::move(grid)),
          materials_(std::move(materials)),
          damping_(std::move(damping)),
          boundary_(boundary),
          time_(time),
          coeffs_(std::move(coeffs)),
          prev_(grid_.ndim, grid_.padded_shape()),
          curr_(grid_.ndim, grid_.padded_shape()) {
        if (coeffs_.order != grid_.space_order)
            throw std::invalid_argument("stencil order does not match grid order");
        precompute();
    }

    void set_sources(InterpolationMap sources, std::vector<double> wavelet) {
        if (!sources.points.empty() && wavelet.size() < time_.sample_count())
            throw std::invalid_argument("wavelet shorter than the time axis");
        sources_ = std::move(sources);
        wavelet_ = std::move(wavelet);
    }
    void set_receivers(InterpolationMap receivers,
                       std::vector<std::array<double, 3>> coordinates = {}) {
        receivers_ = std::move(receivers);
        receiver_coordinates_ = std::move(coordinates);
    }
    void add_volume_source(ModulatedField<T> source) {
        if (source.amplitude.size() < time_.n_steps)
            throw std::invalid_argument("volume source amplitude shorter than run");
        volume_sources_.push_back(std::move(source));
    }
    void set_backend(Backend backend, int workers) {
        backend_ = backend;
#ifdef _OPENMP
        workers_ = workers >= 1 ? workers : omp_get_max_threads();
#else
        workers_ = workers >= 1 ? workers : 1;
#endif
    }
    void set_verbose(bool verbose) { verbose_ = verbose; }
    void set_snapshot_cap(std::size_t bytes) { snapshot_cap_bytes_ = bytes; }

    const Grid& grid() const { return grid_; }
    const TimeAxis& time_axis() const { return time_; }
    Field<T>& current_level() { return curr_; }
    Field<T>& previous_level() { return prev_; }
    std::size_t step_index() const { return step_; }

    /// Re-fills the halo of the current level; call after writing initial
    /// conditions directly into the level buffers.
    void refresh_boundary() { apply_boundary(curr_, grid_, boundary_); }

    /// Advances one step: stencil sweep, source injection, boundary fill.
    void step() {
        sweep();
        inject(step_);
        std::swap(prev_, curr_);
        ++step_;
        apply_boundary(curr_, grid_, boundary_);
        if (step_ % check_interval_ == 0 || step_ == time_.n_steps) check_health();
    }

    /// Runs the full time loop. Receivers are sampled every step; snapshots
    /// are stored per saving stride (stride 0 keeps only the final level).
    ForwardResult<T> forward() {
        ForwardResult<T> result;
        result.seismogram.n_receivers = receivers_.points.size();
        result.seismogram.coordinates = receiver_coordinates_;
        result.seismogram.data.reserve(time_.sample_count() * receivers_.points.size());

        const std::size_t snap_bytes =
            time_.snapshot_count() * grid_.extended_points() * sizeof(T);
        if (snap_bytes > snapshot_cap_bytes_)
            throw std::invalid_argument(
                "snapshot storage (" + std::to_string(snap_bytes) +
                " bytes) exceeds the configured cap; raise the cap or the stride");

        refresh_boundary();
        record(result);

        const auto t_start = std::chrono::steady_clock::now();
        loop_start_ = t_start;
        for (std::size_t n = 0; n < time_.n_steps; ++n) {
            step();
            record(result);
        }
        result.kernel_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                .count();
        return result;
    }

    double max_abs() const {
        double m = 0.0;
        for (const T v : curr_.values()) {
            const double a = std::abs(static_cast<double>(v));
            if (!std::isfinite(a)) return a;  // inf/nan must not be masked by max
            m = std::max(m, a);
        }
        return m;
    }

private:
    void precompute() {
        const auto padded = grid_.padded_shape();
        c2dt2_ = Field<T>(grid_.ndim, padded);
        one_minus_eta_dt_ = Field<T>(grid_.ndim, padded);
        inv_one_plus_eta_dt_ = Field<T>(grid_.ndim, padded);
        const double dt = time_.dt;
        for (std::size_t i = 0; i < c2dt2_.size(); ++i) {
            const double c = static_cast<double>(materials_.velocity[i]);
            const double eta_dt = static_cast<double>(damping_.eta[i]) * dt;
            c2dt2_[i] = static_cast<T>(c * c * dt * dt);
            one_minus_eta_dt_[i] = static_cast<T>(1.0 - eta_dt);
            inv_one_plus_eta_dt_[i] = static_cast<T>(1.0 / (1.0 + eta_dt));
        }
        for (int a = 0; a < grid_.ndim; ++a) {
            inv_h2_[a] = static_cast<T>(1.0 / (grid_.spacing[a] * grid_.spacing[a]));
            inv_2h_[a] = static_cast<T>(1.0 / (2.0 * grid_.spacing[a]));
        }
        v_.assign(coeffs_.second.begin(), coeffs_.second.end());
        w_.assign(coeffs_.first.begin(), coeffs_.first.end());
        if (materials_.density)
            grad_rho_ = density_log_gradient(*materials_.density, grid_, coeffs_);
    }

    void record(ForwardResult<T>& result) {
        if (!receivers_.points.empty()) {
            const std::vector<T> row = sample_receivers(curr_, receivers_);
            result.seismogram.data.insert(result.seismogram.data.end(), row.begin(),
                                          row.end());
        }
        const std::size_t stride = time_.saving_stride;
        const bool store = stride == 0 ? step_ == time_.n_steps : step_ % stride == 0;
        if (store) {
            result.snapshots.push_back(extract_extended());
            result.snapshot_steps.push_back(step_);
        }
    }

    Field<T> extract_extended() const {
        Field<T> out(grid_.ndim, grid_.extended_shape);
        const auto h = static_cast<std::size_t>(grid_.halo);
        const auto ext = grid_.extended_shape;
        for (std::size_t iz = 0; iz < ext[0]; ++iz)
            for (std::size_t ix = 0; ix < ext[1]; ++ix)
                for (std::size_t iy = 0; iy < ext[2]; ++iy)
                    out(iz, ix, iy) = curr_(iz + h, ix + h,
                                            grid_.ndim == 3 ? iy + h : iy);
        return out;
    }

    // One stencil sweep over the extended grid; writes the new level into
    // the prev buffer (each output point reads prev only at itself).
    void sweep() {
        const auto h = static_cast<std::ptrdiff_t>(grid_.halo);
        const auto ext = grid_.extended_shape;
        const bool variable_density = materials_.density.has_value();
        if (grid_.ndim == 2) {
            if (variable_density)
                sweep_2d<true>(h, ext);
            else
                sweep_2d<false>(h, ext);
        } else {
            if (variable_density)
                sweep_3d<true>(h, ext);
            else
                sweep_3d<false>(h, ext);
        }
    }

    template <bool VariableDensity>
    void sweep_2d(std::ptrdiff_t h, const std::array<std::size_t, 3>& ext) {
        const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(curr_.strides()[0]);
        const int r = coeffs_.radius;
        const T* u = curr_.data();
        T* out = prev_.data();
        const bool par = backend_ == Backend::Parallel;
        const auto nz = static_cast<std::ptrdiff_t>(ext[0]);
        const auto nx = static_cast<std::ptrdiff_t>(ext[1]);
#pragma omp parallel for schedule(static) if (par) num_threads(workers_)
        for (std::ptrdiff_t bz = 0; bz < nz; ++bz) {
            const std::ptrdiff_t iz = bz + h;
            for (std::ptrdiff_t ix = h; ix < nx + h; ++ix) {
                const std::size_t i = static_cast<std::size_t>(iz * sz + ix);
                T lap_z = v_[0] * u[i];
                T lap_x = v_[0] * u[i];
                for (int j = 1; j <= r; ++j) {
                    lap_z += v_[j] * (u[i + j * sz] + u[i - j * sz]);
                    lap_x += v_[j] * (u[i + j] + u[i - j]);
                }
                T rhs = lap_z * inv_h2_[0] + lap_x * inv_h2_[1];
                if constexpr (VariableDensity) {
                    T dz = T(0), dx = T(0);
                    for (int j = 1; j <= r; ++j) {
                        dz += w_[j - 1] * (u[i + j * sz] - u[i - j * sz]);
                        dx += w_[j - 1] * (u[i + j] - u[i - j]);
                    }
                    rhs -= grad_rho_[0][i] * dz * inv_2h_[0] +
                           grad_rho_[1][i] * dx * inv_2h_[1];
                }
                out[i] = (c2dt2_[i] * rhs + T(2) * u[i] -
                          one_minus_eta_dt_[i] * out[i]) *
                         inv_one_plus_eta_dt_[i];
            }
        }
    }

    template <bool VariableDensity>
    void sweep_3d(std::ptrdiff_t h, const std::array<std::size_t, 3>& ext) {
        const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(curr_.strides()[0]);
        const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(curr_.strides()[1]);
        const int r = coeffs_.radius;
        const T* u = curr_.data();
        T* out = prev_.data();
        const bool par = backend_ == Backend::Parallel;
        const auto nz = static_cast<std::ptrdiff_t>(ext[0]);
        const auto nx = static_cast<std::ptrdiff_t>(ext[1]);
        const auto ny = static_cast<std::ptrdiff_t>(ext[2]);
#pragma omp parallel for schedule(static) if (par) num_threads(workers_)
        for (std::ptrdiff_t bz = 0; bz < nz; ++bz) {
            const std::ptrdiff_t iz = bz + h;
            for (std::ptrdiff_t ix = h; ix < nx + h; ++ix) {
                for (std::ptrdiff_t iy = h; iy < ny + h; ++iy) {
                    const std::size_t i = static_cast<std::size_t>(iz * sz + ix * sx + iy);
                    T lap_z = v_[0] * u[i];
                    T lap_x = v_[0] * u[i];
                    T lap_y = v_[0] * u[i];
                    for (int j = 1; j <= r; ++j) {
                        lap_z += v_[j] * (u[i + j * sz] + u[i - j * sz]);
                        lap_x += v_[j] * (u[i + j * sx] + u[i - j * sx]);
                        lap_y += v_[j] * (u[i + j] + u[i - j]);
                    }
                    T rhs = lap_z * inv_h2_[0] + lap_x * inv_h2_[1] + lap_y * inv_h2_[2];
                    if constexpr (VariableDensity) {
                        T dz = T(0), dx = T(0), dy = T(0);
                        for (int j = 1; j <= r; ++j) {
                            dz += w_[j - 1] * (u[i + j * sz] - u[i - j * sz]);
                            dx += w_[j - 1] * (u[i + j * sx] - u[i - j * sx]);
                            dy += w_[j - 1] * (u[i + j] - u[i - j]);
                        }
                        rhs -= grad_rho_[0][i] * dz * inv_2h_[0] +
                               grad_rho_[1][i] * dx * inv_2h_[1] +
                               grad_rho_[2][i] * dy * inv_2h_[2];
                    }
                    out[i] = (c2dt2_[i] * rhs + T(2) * u[i] -
                              one_minus_eta_dt_[i] * out[i]) *
                             inv_one_plus_eta_dt_[i];
                }
            }
        }
    }

    // Point sources and dense modulated sources enter the bracketed forcing
    // slot: next += c^2 dt^2 * F / (1 + eta dt). Single-threaded on purpose:
    // windows of distinct sources may overlap.
    void inject(std::size_t n) {
        T* out = prev_.data();
        if (!sources_.points.empty()) {
            const double amp = wavelet_[n];
            for (const auto& entries : sources_.points)
                for (const auto& e : entries)
                    out[e.index] += c2dt2_[e.index] *
                                    static_cast<T>(e.weight * amp) *
                                    inv_one_plus_eta_dt_[e.index];
        }
        if (!volume_sources_.empty()) {
            const auto h = static_cast<std::size_t>(grid_.halo);
            const auto ext = grid_.extended_shape;
            for (const auto& vs : volume_sources_) {
                const T amp = static_cast<T>(vs.amplitude[n]);
                for (std::size_t iz = 0; iz < ext[0]; ++iz)
                    for (std::size_t ix = 0; ix < ext[1]; ++ix)
                        for (std::size_t iy = 0; iy < ext[2]; ++iy) {
                            const std::size_t i = curr_.index(
                                iz + h, ix + h, grid_.ndim == 3 ? iy + h : iy);
                            out[i] += c2dt2_[i] * vs.field[i] * amp *
                                      inv_one_plus_eta_dt_[i];
                        }
            }
        }
    }

    void check_health() {
        const double m = max_abs();
        if (!std::isfinite(m)) throw instability_error(step_, m);
        if (verbose_) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              loop_start_)
                    .count();
            std::fprintf(stderr, "step %zu/%zu  %.3fs  max|p| = %.6e\n", step_,
                         time_.n_steps, elapsed, m);
        }
    }

    Grid grid_;
    MaterialModel<T> materials_;
    DampingField<T> damping_;
    BoundarySpec boundary_;
    TimeAxis time_;
    StencilCoeffs coeffs_;

    Field<T> prev_, curr_;
    Field<T> c2dt2_, one_minus_eta_dt_, inv_one_plus_eta_dt_;
    std::array<Field<T>, 3> grad_rho_;
    std::array<T, 3> inv_h2_{T(1), T(1), T(1)};
    std::array<T, 3> inv_2h_{T(1), T(1), T(1)};
    std::vector<T> v_, w_;

    InterpolationMap sources_, receivers_;
    std::vector<std::array<double, 3>> receiver_coordinates_;
    std::vector<double> wavelet_;
    std::vector<ModulatedField<T>> volume_sources_;

    Backend backend_ = Backend::Serial;
    int workers_ = 1;
    bool verbose_ = false;
    std::size_t check_interval_ = 100;
    std::size_t snapshot_cap_bytes_ = std::size_t(4) << 30;
    std::size_t step_ = 0;
    std::chrono::steady_clock::time_point loop_start_ = std::chrono::steady_clock::now();
};

}  // namespace fdwave
