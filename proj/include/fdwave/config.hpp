#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdwave/grid.hpp"
#include "fdwave/kernel.hpp"

// JSON run configuration. Unknown keys are rejected; validation errors carry
// the JSON-pointer path of the offending element.

namespace fdwave {

class config_error : public std::runtime_error {
public:
    config_error(const std::string& pointer, const std::string& message)
        : std::runtime_error(pointer + ": " + message), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

struct ModelRef {
    std::string path;
    std::string sidecar;
};

struct PointSetConfig {
    std::vector<std::array<double, 3>> coordinates;
    int window_radius = 4;
    std::optional<double> kaiser_b;  // defaults to the per-radius Hicks value
};

struct WaveletConfig {
    std::string type;  // "ricker" or "file"
    double peak_frequency = 10.0;
    std::string path;
};

struct RunConfig {
    int ndim = 2;
    std::vector<double> bounding_box;          // 2 per axis
    std::vector<double> grid_spacing;          // 1 per axis
    int space_order = 2;
    Precision precision = Precision::Single;
    ModelRef velocity_model;
    std::optional<ModelRef> density_model;

    std::vector<double> damping_length;        // 2 per axis, zeros if absent
    std::vector<BoundaryCondition> boundary_condition;  // 2 per axis
    double damping_polynomial_degree = 3.0;
    std::optional<double> damping_alpha;       // default 1e-6 * c_max

    double tf = 0.0;
    std::optional<double> dt;
    std::size_t saving_stride = 0;

    std::optional<PointSetConfig> sources;
    std::optional<PointSetConfig> receivers;
    std::optional<WaveletConfig> wavelet;

    Backend backend = Backend::Serial;
    int workers = 0;  // 0: all hardware threads

    double snapshot_memory_cap_gib = 4.0;
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::string& pointer,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key))
            throw config_error(pointer + "/" + key, "unknown key");
    }
}

inline const nlohmann::json& require(const nlohmann::json& obj,
                                     const std::string& pointer,
                                     const std::string& key) {
    if (!obj.contains(key)) throw config_error(pointer + "/" + key, "missing");
    return obj[key];
}

inline std::vector<double> number_array(const nlohmann::json& j,
                                        const std::string& pointer,
                                        std::size_t expected) {
    if (!j.is_array() || j.size() != expected)
        throw config_error(pointer,
                           "expected an array of " + std::to_string(expected) + " numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw config_error(pointer, "expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline PointSetConfig parse_point_set(const nlohmann::json& j,
                                      const std::string& pointer, int ndim) {
    require_keys(j, pointer, {"coordinates", "window_radius", "kaiser_b"});
    PointSetConfig ps;
    const auto& coords = require(j, pointer, "coordinates");
    if (!coords.is_array() || coords.empty())
        throw config_error(pointer + "/coordinates", "expected a non-empty array");
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::vector<double> c =
            number_array(coords[i], pointer + "/coordinates/" + std::to_string(i),
                         static_cast<std::size_t>(ndim));
        std::array<double, 3> point{0.0, 0.0, 0.0};
        std::copy(c.begin(), c.end(), point.begin());
        ps.coordinates.push_back(point);
    }
    if (j.contains("window_radius")) {
        ps.window_radius = j["window_radius"].get<int>();
        if (ps.window_radius < 1 || ps.window_radius > 10)
            throw config_error(pointer + "/window_radius", "must be in [1, 10]");
    }
    if (j.contains("kaiser_b")) {
        const double b = j["kaiser_b"].get<double>();
        if (!(b > 0.0)) throw config_error(pointer + "/kaiser_b", "must be > 0");
        ps.kaiser_b = b;
    }
    return ps;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::number_array;
    using detail::require;
    using detail::require_keys;

    if (!j.is_object()) throw config_error("", "config must be a JSON object");
    require_keys(j, "",
                 {"bounding_box", "grid_spacing", "space_order", "dtype",
                  "velocity_model", "density_model", "boundary", "time", "sources",
                  "receivers", "wavelet", "backend", "snapshot_memory_cap_gib"});

    RunConfig cfg;

    const auto& bbox = require(j, "", "bounding_box");
    if (!bbox.is_array() || (bbox.size() != 4 && bbox.size() != 6))
        throw config_error("/bounding_box", "expected 4 (2D) or 6 (3D) numbers");
    cfg.ndim = static_cast<int>(bbox.size() / 2);
    cfg.bounding_box = number_array(bbox, "/bounding_box", bbox.size());

    cfg.grid_spacing = number_array(require(j, "", "grid_spacing"), "/grid_spacing",
                                    static_cast<std::size_t>(cfg.ndim));

    cfg.space_order = require(j, "", "space_order").get<int>();
    if (cfg.space_order < 2 || cfg.space_order > 20 || cfg.space_order % 2 != 0)
        throw config_error("/space_order", "must be even and in [2, 20]");

    const std::string dtype = require(j, "", "dtype").get<std::string>();
    if (dtype == "float32")
        cfg.precision = Precision::Single;
    else if (dtype == "float64")
        cfg.precision = Precision::Double;
    else
        throw config_error("/dtype", "must be \"float32\" or \"float64\"");

    const auto& vel = require(j, "", "velocity_model");
    require_keys(vel, "/velocity_model", {"path", "sidecar"});
    cfg.velocity_model = {require(vel, "/velocity_model", "path").get<std::string>(),
                          require(vel, "/velocity_model", "sidecar").get<std::string>()};
    if (j.contains("density_model")) {
        const auto& den = j["density_model"];
        require_keys(den, "/density_model", {"path", "sidecar"});
        cfg.density_model =
            ModelRef{require(den, "/density_model", "path").get<std::string>(),
                     require(den, "/density_model", "sidecar").get<std::string>()};
    }

    const auto sides = static_cast<std::size_t>(2 * cfg.ndim);
    cfg.damping_length.assign(sides, 0.0);
    cfg.boundary_condition.assign(sides, BoundaryCondition::None);
    if (j.contains("boundary")) {
        const auto& b = j["boundary"];
        require_keys(b, "/boundary",
                     {"damping_length", "boundary_condition",
                      "damping_polynomial_degree", "damping_alpha"});
        if (b.contains("damping_length")) {
            cfg.damping_length =
                number_array(b["damping_length"], "/boundary/damping_length", sides);
            for (double v : cfg.damping_length)
                if (v < 0.0)
                    throw config_error("/boundary/damping_length", "must be >= 0");
        }
        if (b.contains("boundary_condition")) {
            const auto& bc = b["boundary_condition"];
            if (!bc.is_array() || bc.size() != sides)
                throw config_error("/boundary/boundary_condition",
                                   "expected " + std::to_string(sides) + " entries");
            for (std::size_t i = 0; i < sides; ++i) {
                try {
                    cfg.boundary_condition[i] =
                        boundary_condition_from_string(bc[i].get<std::string>());
                } catch (const std::exception& e) {
                    throw config_error(
                        "/boundary/boundary_condition/" + std::to_string(i), e.what());
                }
            }
        }
        if (b.contains("damping_polynomial_degree")) {
            cfg.damping_polynomial_degree = b["damping_polynomial_degree"].get<double>();
            if (cfg.damping_polynomial_degree < 0.0)
                throw config_error("/boundary/damping_polynomial_degree", "must be >= 0");
        }
        if (b.contains("damping_alpha")) {
            cfg.damping_alpha = b["damping_alpha"].get<double>();
            if (*cfg.damping_alpha < 0.0)
                throw config_error("/boundary/damping_alpha", "must be >= 0");
        }
    }

    const auto& time = require(j, "", "time");
    require_keys(time, "/time", {"tf", "dt", "saving_stride"});
    cfg.tf = require(time, "/time", "tf").get<double>();
    if (!(cfg.tf > 0.0)) throw config_error("/time/tf", "must be > 0");
    if (time.contains("dt")) {
        cfg.dt = time["dt"].get<double>();
        if (!(*cfg.dt > 0.0)) throw config_error("/time/dt", "must be > 0");
    }
    if (time.contains("saving_stride")) {
        const auto s = time["saving_stride"].get<long long>();
        if (s < 0) throw config_error("/time/saving_stride", "must be >= 0");
        cfg.saving_stride = static_cast<std::size_t>(s);
    }

    if (j.contains("sources"))
        cfg.sources = detail::parse_point_set(j["sources"], "/sources", cfg.ndim);
    if (j.contains("receivers"))
        cfg.receivers = detail::parse_point_set(j["receivers"], "/receivers", cfg.ndim);

    if (j.contains("wavelet")) {
        const auto& w = j["wavelet"];
        require_keys(w, "/wavelet", {"type", "peak_frequency", "path"});
        WaveletConfig wc;
        wc.type = require(w, "/wavelet", "type").get<std::string>();
        if (wc.type == "ricker") {
            wc.peak_frequency = require(w, "/wavelet", "peak_frequency").get<double>();
            if (!(wc.peak_frequency > 0.0))
                throw config_error("/wavelet/peak_frequency", "must be > 0");
        } else if (wc.type == "file") {
            wc.path = require(w, "/wavelet", "path").get<std::string>();
        } else {
            throw config_error("/wavelet/type", "must be \"ricker\" or \"file\"");
        }
        cfg.wavelet = wc;
    }
    if (cfg.sources && !cfg.wavelet)
        throw config_error("/wavelet", "required when sources are present");

    if (j.contains("backend")) {
        const auto& b = j["backend"];
        require_keys(b, "/backend", {"type", "workers"});
        const std::string type = require(b, "/backend", "type").get<std::string>();
        if (type == "serial")
            cfg.backend = Backend::Serial;
        else if (type == "parallel")
            cfg.backend = Backend::Parallel;
        else
            throw config_error("/backend/type", "must be \"serial\" or \"parallel\"");
        if (b.contains("workers")) {
            cfg.workers = b["workers"].get<int>();
            if (cfg.workers < 0) throw config_error("/backend/workers", "must be >= 0");
        }
    }

    if (j.contains("snapshot_memory_cap_gib")) {
        cfg.snapshot_memory_cap_gib = j["snapshot_memory_cap_gib"].get<double>();
        if (!(cfg.snapshot_memory_cap_gib > 0.0))
            throw config_error("/snapshot_memory_cap_gib", "must be > 0");
    }

    return cfg;
}

}  // namespace fdwave
