// fdwave command-line driver: run simulations from a JSON config, run the
// verification suites, benchmark the stencil kernels, print finite-difference
// coefficients.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fdwave/bench.hpp"
#include "fdwave/config.hpp"
#include "fdwave/kernel.hpp"
#include "fdwave/runner.hpp"
#include "fdwave/stencil.hpp"
#include "fdwave/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

std::vector<int> parse_order_list(const std::string& csv) {
    std::vector<int> orders;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) orders.push_back(std::stoi(item));
    }
    return orders;
}

void write_convergence_csv(const std::vector<fdwave::ConvergenceReport>& reports,
                           const std::string& path) {
    std::ofstream out(path);
    out << "study,resolution,error\n";
    out << std::setprecision(12);
    for (const auto& r : reports)
        for (const auto& p : r.points)
            out << r.label << "," << p.resolution << "," << p.error << "\n";
}

void print_report(const fdwave::ConvergenceReport& r, bool gate, double tol,
                  bool& all_ok) {
    const bool ok = std::abs(r.slope - r.nominal) <= tol;
    std::printf("%-24s slope %6.3f (nominal %.0f)  [%s]%s  %.1fs\n", r.label.c_str(),
                r.slope, r.nominal, gate ? (ok ? "pass" : "FAIL") : "info",
                gate && !ok ? " *" : "", r.seconds);
    if (gate) all_ok &= ok;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool verbose, fdwave::Backend* backend_override, int workers_override) {
    nlohmann::json j;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config %s\n", config_path.c_str());
            return kExitUsage;
        }
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
            return kExitUsage;
        }
    }
    fdwave::RunConfig cfg;
    try {
        cfg = fdwave::parse_run_config(j);
    } catch (const fdwave::config_error& e) {
        std::fprintf(stderr, "config error at %s\n", e.what());
        return kExitUsage;
    }
    if (backend_override) cfg.backend = *backend_override;
    if (workers_override >= 0) cfg.workers = workers_override;

    try {
        const nlohmann::json manifest = fdwave::run_simulation(cfg, out_dir, verbose);
        std::printf("run complete: %zu steps, dt %.6e s, kernel %.3f s\n",
                    manifest["n_steps"].get<std::size_t>(),
                    manifest["dt"].get<double>(),
                    manifest["kernel_seconds"].get<double>());
        std::printf("artifacts in %s\n", out_dir.c_str());
    } catch (const fdwave::instability_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& orders_csv,
               const std::string& csv_path) {
    using namespace fdwave;
    bool all_ok = true;
    std::vector<ConvergenceReport> reports;
    try {
        if (suite == "temporal") {
            ConvergenceReport r = temporal_convergence_study();
            print_report(r, true, 0.2, all_ok);
            reports.push_back(r);
        } else if (suite == "spatial") {
            std::vector<int> orders = parse_order_list(orders_csv);
            if (orders.empty()) orders = {2, 4, 6, 8};
            for (const auto& r : spatial_convergence_study(orders)) {
                // order 10 is reported without gating: its spatial error can
                // sink below the shared time-discretization floor
                const bool gate = r.nominal <= 8.0;
                print_report(r, gate, 0.5, all_ok);
                reports.push_back(r);
            }
        } else if (suite == "analytical") {
            const AnalyticalCaseReport r = analytical_agreement_case();
            const bool ok = r.relative_error <= 0.01;
            std::printf("analytical agreement    max|diff|/peak %.5f  [%s]  %.1fs\n",
                        r.relative_error, ok ? "pass" : "FAIL", r.seconds);
            all_ok &= ok;
        } else if (suite == "mms") {
            ConvergenceReport r = mms_convergence_study();
            bool ok = true;
            for (std::size_t i = 1; i < r.points.size(); ++i)
                ok &= r.points[i - 1].error / r.points[i].error >= 1.5;
            print_report(r, false, 0.5, all_ok);
            std::printf("%-24s error ratios per halving >= 1.5  [%s]\n",
                        "mms variable density", ok ? "pass" : "FAIL");
            all_ok &= ok;
            reports.push_back(r);
        } else {
            std::fprintf(stderr,
                         "error: unknown suite \"%s\" (temporal|spatial|analytical|mms)\n",
                         suite.c_str());
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "verification failed to run: %s\n", e.what());
        return kExitNumerical;
    }
    if (!csv_path.empty() && !reports.empty())
        write_convergence_csv(reports, csv_path);
    return all_ok ? kExitOk : kExitNumerical;
}

int cmd_bench(const std::string& grid_csv, const std::string& orders_csv,
              std::size_t steps, std::size_t repetitions,
              const std::string& backends, int workers,
              const std::string& csv_path) {
    fdwave::BenchOptions opt;
    opt.shape.clear();
    {
        std::stringstream ss(grid_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) opt.shape.push_back(std::stoul(item));
    }
    if (opt.shape.size() != 2 && opt.shape.size() != 3) {
        std::fprintf(stderr, "error: --grid needs 2 or 3 comma-separated extents\n");
        return kExitUsage;
    }
    if (!orders_csv.empty()) opt.orders = parse_order_list(orders_csv);
    opt.steps = steps;
    opt.repetitions = repetitions;
    opt.workers = workers;
    opt.run_serial = backends.find("serial") != std::string::npos;
    opt.run_parallel = backends.find("parallel") != std::string::npos;
    if (!opt.run_serial && !opt.run_parallel) {
        std::fprintf(stderr, "error: --backends must mention serial and/or parallel\n");
        return kExitUsage;
    }

    if (opt.run_serial && opt.run_parallel) {
        const double rel = fdwave::backend_equivalence_probe(opt);
        std::printf("backend equivalence probe: max rel diff %.3e  [%s]\n", rel,
                    rel <= 1e-12 ? "pass" : "FAIL");
        if (rel > 1e-12) return kExitNumerical;
    }

    const std::vector<fdwave::BenchResult> rows = fdwave::run_bench(opt);
    std::printf("%s", fdwave::bench_markdown(rows).c_str());
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << fdwave::bench_csv(rows);
    }
    return kExitOk;
}

int cmd_coeff(int order, bool first) {
    try {
        const std::vector<double> c = first
                                          ? fdwave::first_derivative_coefficients(order)
                                          : fdwave::second_derivative_coefficients(order);
        for (const double v : c) std::printf("%.17g\n", v);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fdwave - finite-difference acoustic wave propagation"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a simulation from a JSON config");
    std::string config_path, out_dir = "out";
    bool verbose = false;
    std::string backend_name;
    int workers = -1;
    int seed = 0;  // reserved
    run->add_option("--config", config_path, "path to the JSON run config")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--verbose", verbose, "progress lines on stderr");
    run->add_option("--backend", backend_name, "override backend (serial|parallel)");
    run->add_option("--workers", workers, "override worker count");
    run->add_option("--seed", seed, "reserved");

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite, orders_csv, emit_csv;
    verify->add_option("suite", suite, "temporal|spatial|analytical|mms")->required();
    verify->add_option("--orders", orders_csv, "comma-separated spatial orders");
    verify->add_option("--emit-csv", emit_csv, "write (resolution, error) CSV");

    // bench
    auto* bench = app.add_subcommand("bench", "benchmark the stencil kernels");
    std::string grid_csv = "128,128,128", bench_orders, backends = "serial,parallel",
                bench_csv_path;
    std::size_t steps = 100, repetitions = 10;
    int bench_workers = 0;
    bench->add_option("--grid", grid_csv, "interior extents, e.g. 128,128,128");
    bench->add_option("--orders", bench_orders, "comma-separated spatial orders");
    bench->add_option("--steps", steps, "timesteps per run");
    bench->add_option("--repetitions", repetitions, "timed repetitions (default 10)");
    bench->add_option("--backends", backends, "serial,parallel");
    bench->add_option("--workers", bench_workers, "parallel worker count (0: all)");
    bench->add_option("--emit-csv", bench_csv_path, "write results CSV");

    // coeff
    auto* coeff = app.add_subcommand("coeff", "print finite-difference coefficients");
    int order = 2;
    bool first = false;
    coeff->add_option("--order", order, "even spatial order in [2, 20]")->required();
    coeff->add_flag("--first", first, "first-derivative weights instead");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        fdwave::Backend backend{};
        fdwave::Backend* override_ptr = nullptr;
        if (!backend_name.empty()) {
            if (backend_name == "serial")
                backend = fdwave::Backend::Serial;
            else if (backend_name == "parallel")
                backend = fdwave::Backend::Parallel;
            else {
                std::fprintf(stderr, "error: unknown backend %s\n", backend_name.c_str());
                return kExitUsage;
            }
            override_ptr = &backend;
        }
        return cmd_run(config_path, out_dir, verbose, override_ptr, workers);
    }
    if (verify->parsed()) return cmd_verify(suite, orders_csv, emit_csv);
    if (bench->parsed())
        return cmd_bench(grid_csv, bench_orders, steps, repetitions, backends,
                         bench_workers, bench_csv_path);
    if (coeff->parsed()) return cmd_coeff(order, first);
    return kExitUsage;
}
