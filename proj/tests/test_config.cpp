#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "fdwave/config.hpp"

using fdwave::config_error;
using fdwave::parse_run_config;
using nlohmann::json;

namespace {

json minimal_config() {
    return json{
        {"bounding_box", {0, 400, 0, 400}},
        {"grid_spacing", {10, 10}},
        {"space_order", 4},
        {"dtype", "float32"},
        {"velocity_model", {{"path", "v.bin"}, {"sidecar", "v.json"}}},
        {"time", {{"tf", 0.5}}},
    };
}

}  // namespace

TEST(RunConfig, MinimalConfigParses) {
    const auto cfg = parse_run_config(minimal_config());
    EXPECT_EQ(cfg.ndim, 2);
    EXPECT_EQ(cfg.space_order, 4);
    EXPECT_EQ(cfg.precision, fdwave::Precision::Single);
    EXPECT_FALSE(cfg.dt.has_value());
    EXPECT_EQ(cfg.saving_stride, 0u);
    EXPECT_EQ(cfg.backend, fdwave::Backend::Serial);
    EXPECT_EQ(cfg.damping_length, (std::vector<double>{0, 0, 0, 0}));
}

TEST(RunConfig, FullConfigParses) {
    json j = minimal_config();
    j["dtype"] = "float64";
    j["density_model"] = {{"path", "d.bin"}, {"sidecar", "d.json"}};
    j["boundary"] = {{"damping_length", {0, 700, 700, 700}},
                     {"boundary_condition",
                      {"null_neumann", "null_dirichlet", "null_dirichlet",
                       "null_dirichlet"}},
                     {"damping_polynomial_degree", 3},
                     {"damping_alpha", 0.0015}};
    j["time"] = {{"tf", 2.0}, {"dt", 0.002}, {"saving_stride", 10}};
    j["sources"] = {{"coordinates", {{10.0, 200.0}}}, {"window_radius", 4}};
    j["receivers"] = {{"coordinates", {{10.0, 25.0}, {10.0, 50.0}}},
                      {"window_radius", 7},
                      {"kaiser_b", 10.88}};
    j["wavelet"] = {{"type", "ricker"}, {"peak_frequency", 10.0}};
    j["backend"] = {{"type", "parallel"}, {"workers", 8}};

    const auto cfg = parse_run_config(j);
    EXPECT_EQ(cfg.precision, fdwave::Precision::Double);
    ASSERT_TRUE(cfg.density_model.has_value());
    EXPECT_EQ(cfg.boundary_condition[0], fdwave::BoundaryCondition::NullNeumann);
    EXPECT_EQ(cfg.boundary_condition[1], fdwave::BoundaryCondition::NullDirichlet);
    EXPECT_DOUBLE_EQ(*cfg.damping_alpha, 0.0015);
    EXPECT_EQ(cfg.saving_stride, 10u);
    ASSERT_TRUE(cfg.sources.has_value());
    EXPECT_EQ(cfg.sources->coordinates.size(), 1u);
    ASSERT_TRUE(cfg.receivers.has_value());
    EXPECT_EQ(cfg.receivers->window_radius, 7);
    EXPECT_DOUBLE_EQ(*cfg.receivers->kaiser_b, 10.88);
    EXPECT_EQ(cfg.backend, fdwave::Backend::Parallel);
    EXPECT_EQ(cfg.workers, 8);
}

TEST(RunConfig, UnknownKeysAreRejectedWithPointer) {
    json j = minimal_config();
    j["velocity"] = "typo";
    try {
        parse_run_config(j);
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.pointer(), "/velocity");
    }

    json nested = minimal_config();
    nested["time"]["stride"] = 2;
    try {
        parse_run_config(nested);
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.pointer(), "/time/stride");
    }
}

TEST(RunConfig, MissingRequiredKeysReportPath) {
    json j = minimal_config();
    j.erase("grid_spacing");
    try {
        parse_run_config(j);
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.pointer(), "/grid_spacing");
    }
}

TEST(RunConfig, ValidatesShapesAndRanges) {
    json j = minimal_config();
    j["bounding_box"] = {0, 400, 0};
    EXPECT_THROW(parse_run_config(j), config_error);

    j = minimal_config();
    j["grid_spacing"] = {10};
    EXPECT_THROW(parse_run_config(j), config_error);

    j = minimal_config();
    j["space_order"] = 7;
    EXPECT_THROW(parse_run_config(j), config_error);

    j = minimal_config();
    j["dtype"] = "float16";
    EXPECT_THROW(parse_run_config(j), config_error);

    j = minimal_config();
    j["time"]["tf"] = -1.0;
    EXPECT_THROW(parse_run_config(j), config_error);

    j = minimal_config();
    j["boundary"] = {{"damping_length", {0, 700}}};  // needs 4 entries in 2d
    EXPECT_THROW(parse_run_config(j), config_error);

    j = minimal_config();
    j["boundary"] = {{"boundary_condition", {"null_neumann", "bad", "none", "none"}}};
    EXPECT_THROW(parse_run_config(j), config_error);
}

TEST(RunConfig, SourcesRequireWavelet) {
    json j = minimal_config();
    j["sources"] = {{"coordinates", {{10.0, 200.0}}}};
    try {
        parse_run_config(j);
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.pointer(), "/wavelet");
    }
    j["wavelet"] = {{"type", "ricker"}, {"peak_frequency", 12.0}};
    EXPECT_NO_THROW(parse_run_config(j));
}

TEST(RunConfig, ThreeDimensionalCoordinates) {
    json j = minimal_config();
    j["bounding_box"] = {0, 400, 0, 400, 0, 400};
    j["grid_spacing"] = {10, 10, 10};
    j["sources"] = {{"coordinates", {{10.0, 200.0, 200.0}}}};
    j["wavelet"] = {{"type", "ricker"}, {"peak_frequency", 10.0}};
    const auto cfg = parse_run_config(j);
    EXPECT_EQ(cfg.ndim, 3);
    EXPECT_EQ(cfg.boundary_condition.size(), 6u);

    // 2d coordinates in a 3d config are rejected with the element path
    j["sources"] = {{"coordinates", {{10.0, 200.0}}}};
    try {
        parse_run_config(j);
        FAIL() << "expected config_error";
    } catch (const config_error& e) {
        EXPECT_EQ(e.pointer(), "/sources/coordinates/0");
    }
}

TEST(RunConfig, WaveletVariants) {
    json j = minimal_config();
    j["wavelet"] = {{"type", "file"}, {"path", "w.txt"}};
    const auto cfg = parse_run_config(j);
    ASSERT_TRUE(cfg.wavelet.has_value());
    EXPECT_EQ(cfg.wavelet->type, "file");

    j["wavelet"] = {{"type", "sine"}};
    EXPECT_THROW(parse_run_config(j), config_error);
}
