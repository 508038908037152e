#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "heli/errors.hpp"
#include "heli/rk4.hpp"
#include "heli/sigpow.hpp"

namespace heli {

// Gains of the two-state finite-time differentiator
//   x1c' = x2c
//   eps^2 x2c' = -a0 e - a1 sig(e)^r1 - b0 eps x2c - b1 sig(eps x2c)^r2,
// with e = x1c - input. The linear pair (a0, b0) sets the transient, the
// fractional pair (a1, b1) sharpens convergence near zero error, and eps is
// the time-scale knob: smaller eps tracks tighter but stiffens the ODE —
// explicit integration needs dt on the order of eps^2 or below.
struct HftdConfig {
    double a0 = 5.0;
    double a1 = 0.5;
    double b0 = 2.0;
    double b1 = 0.5;
    double r1 = 0.5;
    double r2 = 0.5;
    double eps = 0.01;

    void validate() const {
        for (double v : {a0, a1, b0, b1}) {
            if (!std::isfinite(v) || !(v > 0.0)) {
                throw std::domain_error("HftdConfig: gains must be finite and > 0");
            }
        }
        for (double v : {r1, r2, eps}) {
            if (!std::isfinite(v) || !(v > 0.0) || !(v < 1.0)) {
                throw std::domain_error("HftdConfig: r1, r2, eps must lie in (0,1)");
            }
        }
    }
};

// signal tracks the input; deriv estimates its time derivative.
struct HftdState {
    double signal = 0.0;
    double deriv = 0.0;
};

inline HftdState hftd_derivatives(const HftdState& s, double input, const HftdConfig& c) {
    const double e = s.signal - input;
    const double ev = c.eps * s.deriv;
    const double num =
        -c.a0 * e - c.a1 * sig_pow(e, c.r1) - c.b0 * ev - c.b1 * sig_pow(ev, c.r2);
    const HftdState d{s.deriv, num / (c.eps * c.eps)};
    if (!std::isfinite(d.signal) || !std::isfinite(d.deriv)) {
        throw overflow_error("hftd_derivatives: non-finite derivative", "hftd");
    }
    return d;
}

inline std::pair<double, double> hftd_outputs(const HftdState& s) {
    return {s.signal, s.deriv};
}

// Accuracy probe: drive the differentiator with a known input, integrate
// with RK4 from the input's initial value (zero derivative estimate), and
// record the worst signal / derivative errors after a settling interval.
struct HftdAccuracy {
    double max_signal_err = 0.0;
    double max_deriv_err = 0.0;
};

template <typename F, typename DF>
HftdAccuracy hftd_accuracy(const HftdConfig& cfg, F&& input, DF&& input_deriv, double dt,
                           double t_end, double settle) {
    cfg.validate();
    if (!(dt > 0.0) || !(t_end > settle) || settle < 0.0) {
        throw std::domain_error("hftd_accuracy: need dt > 0 and t_end > settle >= 0");
    }
    std::array<double, 2> y{input(0.0), 0.0};
    const auto rhs = [&](const std::array<double, 2>& s, double t) {
        const HftdState d = hftd_derivatives({s[0], s[1]}, input(t), cfg);
        return std::array<double, 2>{d.signal, d.deriv};
    };
    HftdAccuracy acc;
    const long n = std::lround(t_end / dt);
    for (long k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        y = rk4_step<2>(rhs, y, t, dt);
        const double tn = static_cast<double>(k + 1) * dt;
        if (tn >= settle) {
            acc.max_signal_err = std::max(acc.max_signal_err, std::abs(y[0] - input(tn)));
            acc.max_deriv_err = std::max(acc.max_deriv_err, std::abs(y[1] - input_deriv(tn)));
        }
    }
    return acc;
}

}  // namespace heli
