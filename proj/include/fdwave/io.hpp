#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdwave/field.hpp"
#include "fdwave/kernel.hpp"
#include "fdwave/time_axis.hpp"

// Raw-array material models (little-endian IEEE floats plus a JSON sidecar
// {shape, dtype, units}), seismogram writers, and quick-look PGM images.

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts unsupported");

namespace fdwave {

struct ModelData {
    std::vector<double> values;       // converted to double on load
    std::vector<std::size_t> shape;
    std::string dtype;                // "f32" or "f64"
    std::string units;                // "m/s" or "g/cm3"
};

class io_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    return bytes;
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open sidecar: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error("malformed sidecar JSON (" + path.string() + "): " + e.what());
    }
}

}  // namespace detail

inline ModelData load_model(const std::filesystem::path& data_path,
                            const std::filesystem::path& sidecar_path) {
    const nlohmann::json sidecar = detail::read_json(sidecar_path);
    ModelData model;
    if (!sidecar.contains("shape") || !sidecar["shape"].is_array())
        throw io_error("sidecar missing \"shape\" array");
    for (const auto& v : sidecar["shape"])
        model.shape.push_back(v.get<std::size_t>());
    model.dtype = sidecar.value("dtype", "f32");
    model.units = sidecar.value("units", "m/s");
    if (model.dtype != "f32" && model.dtype != "f64")
        throw io_error("unknown dtype in sidecar: " + model.dtype);

    std::size_t count = 1;
    for (std::size_t n : model.shape) count *= n;

    const std::vector<char> bytes = detail::read_all(data_path);
    const std::size_t elem = model.dtype == "f32" ? 4 : 8;
    if (bytes.size() != count * elem)
        throw io_error("size mismatch: sidecar shape implies " +
                       std::to_string(count * elem) + " bytes, file has " +
                       std::to_string(bytes.size()));

    model.values.resize(count);
    if (model.dtype == "f32") {
        for (std::size_t i = 0; i < count; ++i) {
            float f;
            std::memcpy(&f, bytes.data() + i * 4, 4);
            model.values[i] = static_cast<double>(f);
        }
    } else {
        std::memcpy(model.values.data(), bytes.data(), count * 8);
    }
    return model;
}

inline void write_model(const std::filesystem::path& data_path,
                        const std::filesystem::path& sidecar_path,
                        const std::vector<double>& values,
                        const std::vector<std::size_t>& shape,
                        const std::string& dtype, const std::string& units) {
    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw io_error("cannot write file: " + data_path.string());
    if (dtype == "f32") {
        for (double v : values) {
            const float f = static_cast<float>(v);
            out.write(reinterpret_cast<const char*>(&f), 4);
        }
    } else if (dtype == "f64") {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * 8));
    } else {
        throw io_error("unknown dtype: " + dtype);
    }
    nlohmann::json sidecar;
    sidecar["shape"] = shape;
    sidecar["dtype"] = dtype;
    sidecar["units"] = units;
    std::ofstream side(sidecar_path);
    side << sidecar.dump(2) << "\n";
}

/// CSV seismogram: header "t,rec0,rec1,...", one row per timestep,
/// 9 significant digits.
template <typename T>
void write_seismogram_csv(const Seismogram<T>& seis, const TimeAxis& axis,
                          const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write seismogram: " + path.string());
    out << "t";
    for (std::size_t r = 0; r < seis.n_receivers; ++r) out << ",rec" << r;
    out << "\n";
    out << std::setprecision(9);
    for (std::size_t n = 0; n < axis.sample_count(); ++n) {
        out << axis.time(n);
        for (std::size_t r = 0; r < seis.n_receivers; ++r)
            out << "," << static_cast<double>(seis.at(n, r));
        out << "\n";
    }
}

/// Binary seismogram: f64 little-endian row-major plus a JSON sidecar with
/// the layout and receiver coordinates.
template <typename T>
void write_seismogram_bin(const Seismogram<T>& seis, const TimeAxis& axis,
                          const std::filesystem::path& data_path,
                          const std::filesystem::path& sidecar_path) {
    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw io_error("cannot write seismogram: " + data_path.string());
    for (const T v : seis.data) {
        const double d = static_cast<double>(v);
        out.write(reinterpret_cast<const char*>(&d), 8);
    }
    nlohmann::json sidecar;
    sidecar["shape"] = {axis.sample_count(), seis.n_receivers};
    sidecar["dtype"] = "f64";
    sidecar["dt"] = axis.dt;
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& c : seis.coordinates)
        coords.push_back(std::vector<double>(c.begin(), c.begin() + 3));
    sidecar["receiver_coordinates"] = coords;
    std::ofstream side(sidecar_path);
    side << sidecar.dump(2) << "\n";
}

template <typename T>
Seismogram<T> read_seismogram_bin(const std::filesystem::path& data_path,
                                  const std::filesystem::path& sidecar_path) {
    const nlohmann::json sidecar = detail::read_json(sidecar_path);
    const std::vector<char> bytes = detail::read_all(data_path);
    Seismogram<T> seis;
    const std::size_t rows = sidecar["shape"][0].get<std::size_t>();
    seis.n_receivers = sidecar["shape"][1].get<std::size_t>();
    if (bytes.size() != rows * seis.n_receivers * 8)
        throw io_error("seismogram size mismatch");
    seis.data.resize(rows * seis.n_receivers);
    for (std::size_t i = 0; i < seis.data.size(); ++i) {
        double d;
        std::memcpy(&d, bytes.data() + i * 8, 8);
        seis.data[i] = static_cast<T>(d);
    }
    return seis;
}

/// Mid-Y slice of a 3D field (identity for 2D fields).
template <typename T>
Field<T> image_slice(const Field<T>& f) {
    if (f.ndim() == 2) return f;
    const auto& s = f.shape();
    Field<T> out(2, {s[0], s[1], 1});
    const std::size_t mid = s[2] / 2;
    for (std::size_t iz = 0; iz < s[0]; ++iz)
        for (std::size_t ix = 0; ix < s[1]; ++ix)
            out(iz, ix) = f(iz, ix, mid);
    return out;
}

/// Binary 8-bit PGM with linear min-max normalization; a constant field
/// maps to mid-gray (128). 3D fields are sliced at mid-Y first.
template <typename T>
void write_snapshot_image(const Field<T>& field, const std::filesystem::path& path) {
    const Field<T> slice = image_slice(field);
    const auto& s = slice.shape();
    double lo = static_cast<double>(slice[0]), hi = lo;
    for (const T v : slice.values()) {
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write image: " + path.string());
    out << "P5\n" << s[1] << " " << s[0] << "\n255\n";
    const double span = hi - lo;
    std::vector<unsigned char> row(s[1]);
    for (std::size_t iz = 0; iz < s[0]; ++iz) {
        for (std::size_t ix = 0; ix < s[1]; ++ix) {
            const double v = static_cast<double>(slice(iz, ix));
            const double g = span > 0.0 ? (v - lo) / span * 255.0 : 128.0;
            row[ix] = static_cast<unsigned char>(std::lround(g));
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace fdwave
