#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "fdwave/acquisition.hpp"
#include "fdwave/grid.hpp"
#include "fdwave/kernel.hpp"
#include "fdwave/model.hpp"
#include "fdwave/stencil.hpp"
#include "fdwave/time_axis.hpp"

// Stencil benchmark harness: times the propagation loop on a synthetic
// homogeneous medium; model setup and output writing are excluded from the
// timing.

namespace fdwave {

struct BenchOptions {
    std::vector<std::size_t> shape{128, 128, 128};  // interior points per axis
    std::vector<int> orders{2, 4, 8};
    std::size_t steps = 100;
    std::size_t repetitions = 10;
    bool run_serial = true;
    bool run_parallel = true;
    int workers = 0;  // 0: all hardware threads
    double c = 1500.0;
    double h = 10.0;
};

struct BenchResult {
    std::vector<std::size_t> shape;
    int order = 2;
    std::size_t steps = 0;
    std::string backend;
    int workers = 1;
    std::size_t repetitions = 0;
    double mean_seconds = 0.0;
    double throughput = 0.0;  // grid points * steps per second
    double speedup = 1.0;     // serial_time / parallel_time
};

namespace detail {

template <typename T>
Solver<T> make_bench_solver(const BenchOptions& opt, int order) {
    std::vector<double> bbox;
    std::vector<double> spacing;
    for (std::size_t n : opt.shape) {
        bbox.push_back(0.0);
        bbox.push_back(static_cast<double>(n - 1) * opt.h);
        spacing.push_back(opt.h);
    }
    Grid grid = build_grid(bbox, spacing, order,
                           sizeof(T) == 4 ? Precision::Single : Precision::Double);
    std::vector<double> no_damping(2 * grid.ndim, 0.0);
    grid = extend_with_damping(grid, no_damping);

    Field<T> velocity(grid.ndim, grid.padded_shape());
    velocity.fill(static_cast<T>(opt.c));
    MaterialModel<T> materials = make_material_model<T>(std::move(velocity));
    DampingField<T> damping = damping_field<T>(grid, 0.0, 0.0);

    TimeAxis axis;
    axis.stable_bound = stable_dt(opt.c, std::span(grid.spacing.data(), grid.ndim),
                                  order, grid.ndim);
    axis.dt = axis.stable_bound;
    axis.n_steps = opt.steps;
    axis.tf = axis.dt * static_cast<double>(opt.steps);
    axis.saving_stride = 0;

    Solver<T> solver(grid, std::move(materials), std::move(damping),
                     BoundarySpec::uniform(BoundaryCondition::NullDirichlet), axis,
                     make_stencil(order));

    // centered point source, receiver offset a few cells
    std::array<double, 3> src{0.0, 0.0, 0.0};
    std::array<double, 3> rec{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.ndim; ++a) {
        src[a] = 0.5 * (grid.bbox[a][0] + grid.bbox[a][1]);
        rec[a] = src[a];
    }
    rec[grid.ndim - 1] += 8.0 * opt.h;
    PointSet src_set = make_point_set({src}, 4);
    PointSet rec_set = make_point_set({rec}, 4);
    solver.set_sources(build_injection_map(src_set, grid),
                       ricker_wavelet(axis, opt.c / (40.0 * opt.h)));
    solver.set_receivers(build_injection_map(rec_set, grid));
    return solver;
}

}  // namespace detail

/// Runs serial and parallel backends on a shrunken grid and returns the
/// maximum relative seismogram difference. Gates the timed benchmark.
inline double backend_equivalence_probe(const BenchOptions& opt) {
    BenchOptions probe = opt;
    for (auto& n : probe.shape) n = std::min<std::size_t>(n, 48);
    probe.steps = std::min<std::size_t>(probe.steps, 60);

    const int order = probe.orders.empty() ? 4 : probe.orders.front();
    auto run = [&](Backend backend) {
        Solver<double> solver = detail::make_bench_solver<double>(probe, order);
        solver.set_backend(backend, probe.workers);
        return solver.forward();
    };
    const ForwardResult<double> serial = run(Backend::Serial);
    const ForwardResult<double> parallel = run(Backend::Parallel);

    double peak = 0.0;
    for (const double v : serial.seismogram.data) peak = std::max(peak, std::abs(v));
    double max_rel = 0.0;
    for (std::size_t i = 0; i < serial.seismogram.data.size(); ++i)
        max_rel = std::max(max_rel, std::abs(serial.seismogram.data[i] -
                                             parallel.seismogram.data[i]));
    return peak > 0.0 ? max_rel / peak : max_rel;
}

/// Times the requested backends; repetitions are averaged. Speedup is
/// reported against the serial mean of the same order.
inline std::vector<BenchResult> run_bench(const BenchOptions& opt) {
    if (opt.repetitions < 1)
        throw std::invalid_argument("bench: need at least one repetition");
    std::vector<BenchResult> results;
    for (const int order : opt.orders) {
        double serial_mean = 0.0;
        for (const bool parallel : {false, true}) {
            if (parallel && !opt.run_parallel) continue;
            if (!parallel && !opt.run_serial) continue;
            double total = 0.0;
            std::size_t points = 0;
            for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
                Solver<double> solver = detail::make_bench_solver<double>(opt, order);
                solver.set_backend(parallel ? Backend::Parallel : Backend::Serial,
                                   opt.workers);
                const ForwardResult<double> result = solver.forward();
                total += result.kernel_seconds;
                points = solver.grid().extended_points();
            }
            BenchResult row;
            row.shape = opt.shape;
            row.order = order;
            row.steps = opt.steps;
            row.backend = parallel ? "parallel" : "serial";
            row.workers = parallel ? opt.workers : 1;
            row.repetitions = opt.repetitions;
            row.mean_seconds = total / static_cast<double>(opt.repetitions);
            row.throughput = static_cast<double>(points) *
                             static_cast<double>(opt.steps) / row.mean_seconds;
            if (!parallel) serial_mean = row.mean_seconds;
            row.speedup = (parallel && serial_mean > 0.0)
                              ? serial_mean / row.mean_seconds
                              : 1.0;
            results.push_back(row);
        }
    }
    return results;
}

inline std::string bench_markdown(const std::vector<BenchResult>& rows) {
    std::ostringstream out;
    out << "| grid | order | steps | backend | workers | mean s | points*steps/s | speedup |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        out << "| ";
        for (std::size_t i = 0; i < r.shape.size(); ++i)
            out << (i ? "x" : "") << r.shape[i];
        out << " | " << r.order << " | " << r.steps << " | " << r.backend << " | "
            << r.workers << " | " << std::fixed << std::setprecision(4)
            << r.mean_seconds << " | " << std::scientific << std::setprecision(3)
            << r.throughput << " | " << std::fixed << std::setprecision(2)
            << r.speedup << " |\n";
        out.unsetf(std::ios::floatfield);
    }
    return out.str();
}

inline std::string bench_csv(const std::vector<BenchResult>& rows) {
    std::ostringstream out;
    out << "grid,order,steps,backend,workers,repetitions,mean_seconds,throughput,speedup\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.shape.size(); ++i)
            out << (i ? "x" : "") << r.shape[i];
        out << "," << r.order << "," << r.steps << "," << r.backend << ","
            << r.workers << "," << r.repetitions << "," << r.mean_seconds << ","
            << r.throughput << "," << r.speedup << "\n";
    }
    return out.str();
}

}  // namespace fdwave
