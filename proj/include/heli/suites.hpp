#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "heli/hftd.hpp"
#include "heli/rbf.hpp"

namespace heli {

// ---------------------------------------------------------------------------
// difftest: differentiator accuracy sweep. Drives the stock differentiator
// with sin(t) for 10 s and measures worst-case signal / derivative errors
// after a 0.5 s settling interval, at the stock eps and at one tighter and
// one looser setting. Thresholds apply to the stock eps; the sweep must
// also show errors shrinking as eps shrinks.
// ---------------------------------------------------------------------------

struct DifftestResult {
    double dt = 0.0;
    double t_end = 0.0;
    double settle = 0.0;
    double eps_nominal = 0.01;
    double eps_tight = 0.005;
    double eps_loose = 0.02;
    HftdAccuracy nominal;
    HftdAccuracy tight;
    HftdAccuracy loose;
    double signal_tol = 1e-3;
    double deriv_tol = 5e-2;

    bool signal_ok() const { return nominal.max_signal_err < signal_tol; }
    bool deriv_ok() const { return nominal.max_deriv_err < deriv_tol; }
    bool ordering_ok() const {
        return tight.max_signal_err < loose.max_signal_err &&
               tight.max_deriv_err < loose.max_deriv_err;
    }
    bool all_ok() const { return signal_ok() && deriv_ok() && ordering_ok(); }
};

inline DifftestResult run_difftest(double dt = 1e-4, double t_end = 10.0, double settle = 0.5) {
    DifftestResult res;
    res.dt = dt;
    res.t_end = t_end;
    res.settle = settle;
    const auto input = [](double t) { return std::sin(t); };
    const auto dinput = [](double t) { return std::cos(t); };
    for (auto [eps, out] : {std::pair<double, HftdAccuracy*>{res.eps_nominal, &res.nominal},
                            {res.eps_tight, &res.tight},
                            {res.eps_loose, &res.loose}}) {
        HftdConfig cfg;
        cfg.eps = eps;
        *out = hftd_accuracy(cfg, input, dinput, dt, t_end, settle);
    }
    return res;
}

// ---------------------------------------------------------------------------
// traintest: offline trainer exercise (see offline_training_run). The cost
// must fall fast and stay down: window means strictly decrease until one
// drops below 10% of the first window's mean, every later window stays
// below 20% of the first, and the final window ends below 5% of the first.
// ---------------------------------------------------------------------------

struct TraintestResult {
    OfflineTrainingReport report;
    double final_ratio = 0.0;
    double ratio_tol = 0.05;
    bool descent_ok = false;

    bool ratio_ok() const { return final_ratio < ratio_tol; }
    bool all_ok() const { return ratio_ok() && descent_ok; }
};

inline TraintestResult run_traintest(std::size_t iterations = 100000, std::size_t window = 1000) {
    TraintestResult res;
    res.report = offline_training_run(iterations, window, TrainerConfig{});
    const std::vector<double>& means = res.report.window_means;
    res.final_ratio = means.back() / means.front();

    res.descent_ok = true;
    bool converged = false;
    for (std::size_t i = 1; i < means.size(); ++i) {
        if (!converged && means[i] < 0.1 * means.front()) {
            converged = true;
        }
        if (!converged && !(means[i] < means[i - 1])) {
            res.descent_ok = false;
        }
        if (converged && !(means[i] < 0.2 * means.front())) {
            res.descent_ok = false;
        }
    }
    if (!converged) {
        res.descent_ok = false;
    }
    return res;
}

}  // namespace heli
