// helisim: scenario runner and self-test harness for the finite-time
// backstepping helicopter controller library.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "heli/bounds.hpp"
#include "heli/config.hpp"
#include "heli/metrics.hpp"
#include "heli/plot.hpp"
#include "heli/simulate.hpp"
#include "heli/suites.hpp"
#include "heli/timeseries.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitOverflow = 2;
constexpr int kExitIo = 3;
constexpr int kExitThreshold = 4;

double rad2deg(double v) { return v * 180.0 / std::numbers::pi; }

void print_metrics(const std::string& label, const heli::Metrics& m) {
    std::printf("%s\n", label.c_str());
    if (m.settling_time) {
        std::printf("  settling time (|e1| < %.4f deg): %.4f s\n",
                    rad2deg(m.settle_threshold), *m.settling_time);
    } else {
        std::printf("  settling time (|e1| < %.4f deg): never\n", rad2deg(m.settle_threshold));
    }
    std::printf("  steady-state RMSE(e1):  %.6e rad  (%.6e deg)\n", m.rmse, rad2deg(m.rmse));
    std::printf("  max |e1| after settle:  %.6e rad  (%.6e deg)\n", m.max_e1_after_settling,
                rad2deg(m.max_e1_after_settling));
    std::printf("  final Lyapunov value:   %.6e\n", m.final_lyapunov);
    std::printf("  peak |u1|:              %.4f\n", m.peak_abs_u);
}

void report_overflow(const heli::OverflowInfo& info) {
    std::fprintf(stderr, "numerical overflow at step %ld (t = %.6f s), stage: %s\n  %s\n",
                 info.step, info.t, info.stage.c_str(), info.message.c_str());
}

heli::Metrics run_metrics(const heli::TimeSeries& ts, const heli::ScenarioConfig& cfg) {
    const double t_last = ts.rows.back().t;
    return heli::compute_metrics(ts, 0.5 * t_last, t_last,
                                 cfg.elevation.reference.amplitude());
}

int cmd_simulate(const std::string& config_path, const std::string& controller,
                 const std::string& out_dir, bool csv, bool plot, bool diag, bool deg) {
    heli::ScenarioConfig cfg = heli::load_scenario(config_path, deg);
    if (controller == "proposed") {
        cfg.variant = heli::Variant::proposed;
    } else if (controller == "baseline") {
        cfg.variant = heli::Variant::baseline;
    } else if (!controller.empty()) {
        throw heli::config_error("simulate: --controller must be proposed|baseline");
    }
    if (diag) {
        cfg.output.record_net = true;
    }

    const heli::RunResult res = heli::run_scenario(cfg);
    const std::string variant_name =
        cfg.variant == heli::Variant::proposed ? "proposed" : "baseline";

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw heli::io_error("simulate: cannot create output directory " + out_dir);
    }
    const std::filesystem::path csv_path =
        std::filesystem::path(out_dir) / (variant_name + ".csv");
    if (csv || plot) {
        heli::export_csv(res.series, csv_path, {.diagnostics = diag});
        std::printf("wrote %s (%zu rows)\n", csv_path.string().c_str(), res.series.rows.size());
    }
    if (plot) {
        const std::vector<std::pair<std::string, std::string>> runs{
            {variant_name, variant_name + ".csv"}};
        const std::filesystem::path script = std::filesystem::path(out_dir) / "plot_runs.py";
        heli::emit_plot_script(script, runs);
        std::printf("wrote %s\n", script.string().c_str());
    }

    if (!res.ok()) {
        report_overflow(*res.overflow);
        return kExitOverflow;
    }
    print_metrics("run metrics (" + variant_name + ", window = second half):",
                  run_metrics(res.series, cfg));
    return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir, bool diag,
                bool deg) {
    heli::ScenarioConfig cfg = heli::load_scenario(config_path, deg);
    if (diag) {
        cfg.output.record_net = true;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw heli::io_error("compare: cannot create output directory " + out_dir);
    }

    struct Entry {
        std::string name;
        heli::RunResult res;
        heli::Metrics metrics;
    };
    std::vector<Entry> entries;
    for (heli::Variant v : {heli::Variant::proposed, heli::Variant::baseline}) {
        heli::ScenarioConfig run_cfg = cfg;
        run_cfg.variant = v;
        Entry e;
        e.name = v == heli::Variant::proposed ? "proposed" : "baseline";
        e.res = heli::run_scenario(run_cfg);
        heli::export_csv(e.res.series, std::filesystem::path(out_dir) / (e.name + ".csv"),
                         {.diagnostics = diag});
        if (!e.res.ok()) {
            report_overflow(*e.res.overflow);
            return kExitOverflow;
        }
        e.metrics = run_metrics(e.res.series, run_cfg);
        entries.push_back(std::move(e));
    }

    const std::vector<std::pair<std::string, std::string>> runs{
        {"proposed", "proposed.csv"}, {"baseline", "baseline.csv"}};
    heli::emit_plot_script(std::filesystem::path(out_dir) / "plot_runs.py", runs);

    std::printf("%-10s %14s %14s %16s %12s %10s\n", "variant", "settling [s]", "RMSE [deg]",
                "max|e1| [deg]", "final V", "peak|u1|");
    const std::filesystem::path table_path = std::filesystem::path(out_dir) / "metrics.csv";
    std::ofstream table(table_path);
    if (!table) {
        throw heli::io_error("compare: cannot open " + table_path.string() + " for writing");
    }
    table << "variant,settling_s,rmse_deg,max_e1_deg,final_V,peak_u1\n";
    for (const Entry& e : entries) {
        const std::string settle =
            e.metrics.settling_time ? std::to_string(*e.metrics.settling_time) : "never";
        std::printf("%-10s %14s %14.6e %16.6e %12.4e %10.4f\n", e.name.c_str(), settle.c_str(),
                    rad2deg(e.metrics.rmse), rad2deg(e.metrics.max_e1_after_settling),
                    e.metrics.final_lyapunov, e.metrics.peak_abs_u);
        table << e.name << ',' << settle << ',' << rad2deg(e.metrics.rmse) << ','
              << rad2deg(e.metrics.max_e1_after_settling) << ',' << e.metrics.final_lyapunov
              << ',' << e.metrics.peak_abs_u << '\n';
    }
    if (!table) {
        throw heli::io_error("compare: write to " + table_path.string() + " failed");
    }
    std::printf("wrote %s, per-run CSVs and plot_runs.py under %s\n", table_path.string().c_str(),
                out_dir.c_str());
    return kExitOk;
}

int cmd_difftest(double dt, double t_end) {
    const heli::DifftestResult r = heli::run_difftest(dt, t_end);
    std::printf("differentiator sweep: input sin(t), %g s, dt = %g, settle %g s\n", r.t_end, r.dt,
                r.settle);
    const auto row = [](const char* name, double eps, const heli::HftdAccuracy& a) {
        std::printf("  eps = %-6g  max|signal err| = %.6e  max|deriv err| = %.6e  (%s)\n", eps,
                    a.max_signal_err, a.max_deriv_err, name);
    };
    row("tight", r.eps_tight, r.tight);
    row("nominal", r.eps_nominal, r.nominal);
    row("loose", r.eps_loose, r.loose);
    std::printf("[%s] signal accuracy at eps = %g: %.6e < %g\n", r.signal_ok() ? "PASS" : "FAIL",
                r.eps_nominal, r.nominal.max_signal_err, r.signal_tol);
    std::printf("[%s] derivative accuracy at eps = %g: %.6e < %g\n",
                r.deriv_ok() ? "PASS" : "FAIL", r.eps_nominal, r.nominal.max_deriv_err,
                r.deriv_tol);
    std::printf("[%s] errors shrink with eps (%g vs %g)\n", r.ordering_ok() ? "PASS" : "FAIL",
                r.eps_tight, r.eps_loose);
    return r.all_ok() ? kExitOk : kExitThreshold;
}

int cmd_traintest(std::size_t iters, std::size_t window) {
    const heli::TraintestResult r = heli::run_traintest(iters, window);
    const std::vector<double>& means = r.report.window_means;
    std::printf("offline trainer: %zu iterations, window %zu, %zu windows\n", r.report.iterations,
                r.report.window, means.size());
    std::printf("  first window mean cost: %.6e\n", means.front());
    std::printf("  last window mean cost:  %.6e\n", means.back());
    std::printf("[%s] monotone descent to below 10%% of start, then stays below 20%%\n",
                r.descent_ok ? "PASS" : "FAIL");
    std::printf("[%s] final/first window ratio: %.4e < %g\n", r.ratio_ok() ? "PASS" : "FAIL",
                r.final_ratio, r.ratio_tol);
    return r.all_ok() ? kExitOk : kExitThreshold;
}

int cmd_bounds(const std::string& config_path, double eta3, double kappa, bool deg) {
    const heli::ScenarioConfig cfg = heli::load_scenario(config_path, deg);
    heli::FiniteTimeBound b;
    try {
        b = heli::finite_time_bounds(cfg.elevation.gains, eta3, kappa);
    } catch (const std::domain_error& e) {
        throw heli::config_error(e.what());
    }
    std::printf("decay coefficients for the elevation gains:\n");
    std::printf("  eta1 = %.6f\n  eta2 = %.6f\n  eta3 = %.6f (supplied)\n  kappa = %.3f\n",
                b.eta1, b.eta2, b.eta3, b.kappa);
    if (b.valid) {
        std::printf("  residual |e1| radius: %.6e rad (%.6e deg)\n", b.e1_radius,
                    rad2deg(b.e1_radius));
    } else {
        std::printf(
            "  residual radius: not defined (needs eta1 > 0 and eta2 > 0; the fractional-decay\n"
            "  condition min_i(m_i - n_i/(1+h)) > 0 does not hold for these gains)\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-time backstepping helicopter controller: scenario runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string controller;
    std::string out_dir = "out";
    bool csv = false;
    bool plot = false;
    bool diag = false;
    bool deg = false;

    CLI::App* sim = app.add_subcommand("simulate", "run one scenario and report metrics");
    sim->add_option("--config", config_path, "scenario JSON file")->required();
    sim->add_option("--controller", controller, "override the configured variant")
        ->check(CLI::IsMember({"proposed", "baseline"}));
    sim->add_option("--out", out_dir, "output directory")->required();
    sim->add_flag("--csv", csv, "export the run as CSV");
    sim->add_flag("--plot", plot, "also emit a matplotlib plot script (implies --csv)");
    sim->add_flag("--diag", diag, "record extended diagnostics (pitch block, filters, network)");
    sim->add_flag("--deg", deg, "angle-valued config fields are in degrees");

    CLI::App* cmp = app.add_subcommand("compare",
                                       "run proposed and baseline on one scenario and tabulate");
    cmp->add_option("--config", config_path, "scenario JSON file")->required();
    cmp->add_option("--out", out_dir, "output directory")->required();
    cmp->add_flag("--diag", diag, "record extended diagnostics in the CSVs");
    cmp->add_flag("--deg", deg, "angle-valued config fields are in degrees");

    double dt = 1e-4;
    double t_end = 10.0;
    CLI::App* dft = app.add_subcommand("difftest", "differentiator accuracy self-test");
    dft->add_option("--dt", dt, "integration step");
    dft->add_option("--t-end", t_end, "sweep duration [s]");

    std::size_t iters = 100000;
    std::size_t window = 1000;
    CLI::App* trt = app.add_subcommand("traintest", "offline trainer self-test");
    trt->add_option("--iters", iters, "training iterations");
    trt->add_option("--window", window, "cost-averaging window");

    double eta3 = 0.0;
    double kappa = 0.0;
    CLI::App* bnd = app.add_subcommand("bounds", "evaluate the gain-derived residual bound");
    bnd->add_option("--config", config_path, "scenario JSON file")->required();
    bnd->add_option("--eta3", eta3, "residual-term bound estimate")->required();
    bnd->add_option("--kappa", kappa, "split parameter in (0,1)")->required();
    bnd->add_flag("--deg", deg, "angle-valued config fields are in degrees");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) {
            return cmd_simulate(config_path, controller, out_dir, csv, plot, diag, deg);
        }
        if (cmp->parsed()) {
            return cmd_compare(config_path, out_dir, diag, deg);
        }
        if (dft->parsed()) {
            return cmd_difftest(dt, t_end);
        }
        if (trt->parsed()) {
            return cmd_traintest(iters, window);
        }
        if (bnd->parsed()) {
            return cmd_bounds(config_path, eta3, kappa, deg);
        }
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const heli::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const heli::overflow_error& e) {
        std::fprintf(stderr, "numerical overflow: %s (stage: %s)\n", e.what(), e.stage().c_str());
        return kExitOverflow;
    } catch (const heli::io_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}
