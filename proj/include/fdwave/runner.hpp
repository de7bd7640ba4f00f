#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdwave/acquisition.hpp"
#include "fdwave/config.hpp"
#include "fdwave/grid.hpp"
#include "fdwave/io.hpp"
#include "fdwave/kernel.hpp"
#include "fdwave/model.hpp"
#include "fdwave/time_axis.hpp"

// Drives a full simulation from a RunConfig: grid construction, model
// resampling, propagation, artifact output (seismogram, snapshots, images,
// manifest).

namespace fdwave {

inline std::vector<double> read_wavelet_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open wavelet file: " + path.string());
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        samples.push_back(std::stod(line));
    }
    if (samples.size() < 2)
        throw io_error("wavelet file needs at least two samples");
    return samples;
}

namespace detail {

template <typename T>
nlohmann::json run_simulation_typed(const RunConfig& cfg,
                                    const std::filesystem::path& out_dir,
                                    bool verbose) {
    Grid grid = build_grid(cfg.bounding_box, cfg.grid_spacing, cfg.space_order,
                           cfg.precision);
    grid = extend_with_damping(grid, cfg.damping_length);

    const ModelData vel_raw = load_model(cfg.velocity_model.path,
                                         cfg.velocity_model.sidecar);
    if (vel_raw.units != "m/s")
        throw io_error("velocity model units must be m/s, got " + vel_raw.units);
    Field<T> velocity = resample_model<T>(vel_raw.values, vel_raw.shape, grid);

    std::optional<Field<T>> density;
    if (cfg.density_model) {
        const ModelData den_raw =
            load_model(cfg.density_model->path, cfg.density_model->sidecar);
        if (den_raw.units != "g/cm3")
            throw io_error("density model units must be g/cm3, got " + den_raw.units);
        density = resample_model<T>(den_raw.values, den_raw.shape, grid);
    }
    MaterialModel<T> materials =
        make_material_model<T>(std::move(velocity), std::move(density));

    const double alpha =
        cfg.damping_alpha.value_or(1e-6 * static_cast<double>(materials.c_max));
    DampingField<T> damping =
        damping_field<T>(grid, alpha, cfg.damping_polynomial_degree);

    BoundarySpec boundary;
    for (int a = 0; a < grid.ndim; ++a)
        for (int side = 0; side < 2; ++side)
            boundary.face[a][side] =
                cfg.boundary_condition[static_cast<std::size_t>(2 * a + side)];

    const TimeAxis axis = build_time_axis(cfg.tf, cfg.dt, cfg.saving_stride,
                                          static_cast<double>(materials.c_max), grid);

    Solver<T> solver(grid, std::move(materials), std::move(damping), boundary, axis,
                     make_stencil(cfg.space_order));
    solver.set_backend(cfg.backend, cfg.workers);
    solver.set_verbose(verbose);
    solver.set_snapshot_cap(
        static_cast<std::size_t>(cfg.snapshot_memory_cap_gib * 1024.0 * 1024.0 * 1024.0));

    if (cfg.sources) {
        PointSet set;
        set.coordinates = cfg.sources->coordinates;
        set.window_radius = cfg.sources->window_radius;
        set.kaiser_b =
            cfg.sources->kaiser_b.value_or(default_kaiser_b(set.window_radius));
        std::vector<double> wavelet;
        if (cfg.wavelet->type == "ricker")
            wavelet = ricker_wavelet(axis, cfg.wavelet->peak_frequency);
        else
            wavelet = resample_wavelet(read_wavelet_file(cfg.wavelet->path), axis);
        solver.set_sources(build_injection_map(set, grid), std::move(wavelet));
    }
    if (cfg.receivers) {
        PointSet set;
        set.coordinates = cfg.receivers->coordinates;
        set.window_radius = cfg.receivers->window_radius;
        set.kaiser_b =
            cfg.receivers->kaiser_b.value_or(default_kaiser_b(set.window_radius));
        solver.set_receivers(build_injection_map(set, grid), set.coordinates);
    }

    ForwardResult<T> result = solver.forward();

    std::filesystem::create_directories(out_dir);
    write_seismogram_csv(result.seismogram, axis, out_dir / "seismogram.csv");
    write_seismogram_bin(result.seismogram, axis, out_dir / "seismogram.bin",
                         out_dir / "seismogram.json");

    std::vector<std::string> snapshot_files;
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        std::ostringstream name;
        name << "snapshot_" << std::setw(4) << std::setfill('0') << i;
        const Field<T>& snap = result.snapshots[i];
        std::vector<double> values(snap.values().begin(), snap.values().end());
        std::vector<std::size_t> shape(snap.shape().begin(),
                                       snap.shape().begin() + grid.ndim);
        write_model(out_dir / (name.str() + ".bin"), out_dir / (name.str() + ".json"),
                    values, shape, sizeof(T) == 4 ? "f32" : "f64", "m/s");
        write_snapshot_image(snap, out_dir / (name.str() + ".pgm"));
        snapshot_files.push_back(name.str());
    }

    nlohmann::json manifest;
    manifest["interior_shape"] =
        std::vector<std::size_t>(grid.interior_shape.begin(),
                                 grid.interior_shape.begin() + grid.ndim);
    manifest["extended_shape"] =
        std::vector<std::size_t>(grid.extended_shape.begin(),
                                 grid.extended_shape.begin() + grid.ndim);
    manifest["interior_points"] = grid.interior_points();
    manifest["extended_points"] = grid.extended_points();
    manifest["halo"] = grid.halo;
    manifest["space_order"] = cfg.space_order;
    manifest["dtype"] = cfg.precision == Precision::Single ? "float32" : "float64";
    manifest["dt"] = axis.dt;
    manifest["stable_dt"] = axis.stable_bound;
    manifest["stability"] = axis.dt_overridden ? "overridden" : "ok";
    manifest["n_steps"] = axis.n_steps;
    manifest["saving_stride"] = axis.saving_stride;
    manifest["snapshots"] = result.snapshots.size();
    manifest["snapshot_steps"] = result.snapshot_steps;
    manifest["snapshot_files"] = snapshot_files;
    manifest["receivers"] = result.seismogram.n_receivers;
    manifest["backend"] = cfg.backend == Backend::Parallel ? "parallel" : "serial";
    manifest["workers"] = cfg.workers;
    manifest["kernel_seconds"] = result.kernel_seconds;

    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
    return manifest;
}

}  // namespace detail

inline nlohmann::json run_simulation(const RunConfig& cfg,
                                     const std::filesystem::path& out_dir,
                                     bool verbose = false) {
    if (cfg.precision == Precision::Single)
        return detail::run_simulation_typed<float>(cfg, out_dir, verbose);
    return detail::run_simulation_typed<double>(cfg, out_dir, verbose);
}

}  // namespace fdwave
