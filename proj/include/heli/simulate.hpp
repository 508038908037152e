#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "heli/controller.hpp"
#include "heli/errors.hpp"
#include "heli/hftd.hpp"
#include "heli/plant.hpp"
#include "heli/rbf.hpp"
#include "heli/reference.hpp"
#include "heli/rk4.hpp"
#include "heli/timeseries.hpp"

namespace heli {

// Initial network layout: M zero-weight neurons on the diagonal of the
// expected operating box (angle x rate) with a common width.
struct RbfInitSpec {
    std::size_t neurons = 5;
    std::array<double, 2> angle_range{-0.5, 0.5};
    std::array<double, 2> rate_range{-1.0, 1.0};
    double initial_width = 1.0;

    void validate() const {
        if (neurons == 0) {
            throw std::domain_error("RbfInitSpec: need at least one neuron");
        }
        if (!(angle_range[0] < angle_range[1]) || !(rate_range[0] < rate_range[1])) {
            throw std::domain_error("RbfInitSpec: ranges must be ordered lo < hi");
        }
        if (!std::isfinite(angle_range[0]) || !std::isfinite(angle_range[1]) ||
            !std::isfinite(rate_range[0]) || !std::isfinite(rate_range[1])) {
            throw std::domain_error("RbfInitSpec: ranges must be finite");
        }
        if (!std::isfinite(initial_width) || !(initial_width > 0.0)) {
            throw std::domain_error("RbfInitSpec: initial_width must be > 0");
        }
    }
};

struct ChannelConfig {
    ControllerGains gains;
    HftdConfig hftd;  // shared by the command filter and the rate filter
    TrainerConfig trainer;
    RbfInitSpec rbf;
    DisturbanceSpec disturbance;  // none by default
    ReferenceSpec reference;      // constant 0 by default

    void validate() const {
        gains.validate();
        hftd.validate();
        trainer.validate();
        rbf.validate();
    }
};

struct OutputOptions {
    bool record_net = false;  // store per-sample elevation network snapshots
};

// A full experiment description. The default-constructed value IS the stock
// scenario: 20 s at dt = 1e-4, elevation starting 24 degrees low and
// tracking the stock sinusoid against the disturbance sin(2t), pitch
// regulating to zero, proposed controller.
struct ScenarioConfig {
    double dt = 1e-4;
    double t_end = 20.0;
    Variant variant = Variant::proposed;
    PlantParams plant;
    PlantState initial{-24.0 * std::numbers::pi / 180.0, 0.0, 0.0, 0.0};
    ChannelConfig elevation{.gains = {},
                            .hftd = {},
                            .trainer = {},
                            .rbf = {},
                            .disturbance = DisturbanceSpec::sinusoid(1.0, 2.0),
                            .reference = nominal_reference()};
    ChannelConfig pitch;
    std::optional<double> saturation;
    // Sanity envelope: a run aborts (overflow) if |x1| or |x3| leaves it.
    double angle_limit = std::numbers::pi;
    // Explicit integration of the differentiators needs dt <= margin*eps^2.
    double hftd_dt_margin = 1.0;
    OutputOptions output;

    void validate() const {
        if (!std::isfinite(dt) || !(dt > 0.0)) {
            throw config_error("scenario: dt must be finite and > 0");
        }
        if (!std::isfinite(t_end) || !(t_end >= dt)) {
            throw config_error("scenario: t_end must be >= dt");
        }
        if (!std::isfinite(angle_limit) || !(angle_limit > 0.0)) {
            throw config_error("scenario: angle_limit must be > 0");
        }
        if (!std::isfinite(hftd_dt_margin) || !(hftd_dt_margin > 0.0)) {
            throw config_error("scenario: hftd_dt_margin must be > 0");
        }
        try {
            plant.validate();
            elevation.validate();
            pitch.validate();
        } catch (const std::domain_error& e) {
            throw config_error(std::string("scenario: ") + e.what());
        }
        if (!initial.finite()) {
            throw config_error("scenario: initial state must be finite");
        }
        if (std::abs(initial.elevation) >= angle_limit ||
            std::abs(initial.pitch) >= angle_limit) {
            throw config_error("scenario: initial angles must lie inside the angle_limit");
        }
        if (saturation && (!std::isfinite(*saturation) || !(*saturation > 0.0))) {
            throw config_error("scenario: saturation must be finite and > 0");
        }
        for (const ChannelConfig* ch : {&elevation, &pitch}) {
            const double stiff = hftd_dt_margin * ch->hftd.eps * ch->hftd.eps;
            if (dt > stiff) {
                throw config_error(
                    "scenario: dt exceeds the differentiator stability budget "
                    "(need dt <= hftd_dt_margin * eps^2)");
            }
        }
    }
};

inline ScenarioConfig nominal_scenario() { return {}; }

inline ChannelController make_channel(const ChannelConfig& cc, Channel ch, Variant v) {
    ChannelController c;
    c.channel = ch;
    c.variant = v;
    c.gains = cc.gains;
    c.cmd_filter_cfg = cc.hftd;
    c.rate_filter_cfg = cc.hftd;
    c.trainer = cc.trainer;
    const std::array<double, 2> lo{cc.rbf.angle_range[0], cc.rbf.rate_range[0]};
    const std::array<double, 2> hi{cc.rbf.angle_range[1], cc.rbf.rate_range[1]};
    c.net = make_diagonal_net(cc.rbf.neurons, lo, hi, cc.rbf.initial_width);
    return c;
}

struct OverflowInfo {
    long step = -1;
    double t = 0.0;
    std::string stage;
    std::string message;
};

struct RunResult {
    TimeSeries series;
    std::optional<OverflowInfo> overflow;

    bool ok() const { return !overflow.has_value(); }
};

namespace detail {

inline constexpr std::size_t kAugmentedDim = 4 + 2 * kChannelOdeDim;

inline std::array<double, kAugmentedDim> pack_state(const PlantState& s,
                                                    const ChannelController& elev,
                                                    const ChannelController& pitch) {
    std::array<double, kAugmentedDim> y{};
    y[0] = s.elevation;
    y[1] = s.elevation_rate;
    y[2] = s.pitch;
    y[3] = s.pitch_rate;
    const auto ye = channel_ode_state(elev);
    const auto yp = channel_ode_state(pitch);
    for (std::size_t i = 0; i < kChannelOdeDim; ++i) {
        y[4 + i] = ye[i];
        y[4 + kChannelOdeDim + i] = yp[i];
    }
    return y;
}

inline std::array<double, kChannelOdeDim> slice_channel(const std::array<double, kAugmentedDim>& y,
                                                        std::size_t offset) {
    std::array<double, kChannelOdeDim> out;
    for (std::size_t i = 0; i < kChannelOdeDim; ++i) {
        out[i] = y[offset + i];
    }
    return out;
}

}  // namespace detail

// Runs a scenario to completion (or to the first numerical failure, which
// is reported in RunResult::overflow rather than thrown — the partial
// series up to the failing step is preserved).
//
// Each step: sample both channels at t from current states, train both
// networks on the time-t residuals, then advance plant + compensators +
// differentiators together as one RK4 vector with u and alpha_m held over
// [t, t+dt]. Disturbances and the rate-filter input z2 are evaluated live
// at the RK4 stage times. Identical configs produce bit-identical series.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    ChannelController elev = make_channel(cfg.elevation, Channel::elevation, cfg.variant);
    ChannelController pitch = make_channel(cfg.pitch, Channel::pitch, cfg.variant);
    PlantState s = cfg.initial;
    prime_channel(elev, s, cfg.elevation.reference.eval(0.0));
    prime_channel(pitch, s, cfg.pitch.reference.eval(0.0));

    const long n = std::lround(cfg.t_end / cfg.dt);
    TimeSeries ts;
    ts.dt = cfg.dt;
    if (cfg.output.record_net) {
        ts.net_neurons = elev.net.size();
        ts.net_inputs = elev.net.input_dim;
    }
    ts.rows.reserve(static_cast<std::size_t>(n) + 1);

    for (long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const RefPoint eref = cfg.elevation.reference.eval(t);
        const RefPoint pref = cfg.pitch.reference.eval(t);
        const ChannelSample es = channel_sample(elev, s, eref, cfg.plant);
        const ChannelSample ps = channel_sample(pitch, s, pref, cfg.plant);

        TimeRecord rec;
        rec.t = t;
        rec.state = s;
        rec.elev_ref = eref;
        rec.pitch_ref = pref;
        rec.elev = es;
        rec.pitch = ps;
        if (cfg.output.record_net) {
            rec.elev_net.reserve(elev.net.size() * (2 + elev.net.input_dim));
            rec.elev_net.insert(rec.elev_net.end(), elev.net.weights.begin(),
                                elev.net.weights.end());
            rec.elev_net.insert(rec.elev_net.end(), elev.net.centers.begin(),
                                elev.net.centers.end());
            rec.elev_net.insert(rec.elev_net.end(), elev.net.widths.begin(),
                                elev.net.widths.end());
        }
        ts.rows.push_back(std::move(rec));
        if (k == n) {
            break;
        }

        try {
            channel_train(elev, s, es.residual);
            channel_train(pitch, s, ps.residual);
            const ControlInput u{es.u, ps.u, cfg.saturation};
            const auto rhs = [&](const std::array<double, detail::kAugmentedDim>& y, double tt) {
                const PlantState sp{y[0], y[1], y[2], y[3]};
                const double d1 = cfg.elevation.disturbance.eval(tt);
                const double d2 = cfg.pitch.disturbance.eval(tt);
                const PlantState dp = plant_derivatives(sp, u, d1, d2, cfg.plant);
                const auto de = channel_ode_derivatives(
                    elev, detail::slice_channel(y, 4), {es.alpha_m, sp.elevation_rate});
                const auto dq = channel_ode_derivatives(
                    pitch, detail::slice_channel(y, 4 + kChannelOdeDim),
                    {ps.alpha_m, sp.pitch_rate});
                std::array<double, detail::kAugmentedDim> dy;
                dy[0] = dp.elevation;
                dy[1] = dp.elevation_rate;
                dy[2] = dp.pitch;
                dy[3] = dp.pitch_rate;
                for (std::size_t i = 0; i < kChannelOdeDim; ++i) {
                    dy[4 + i] = de[i];
                    dy[4 + kChannelOdeDim + i] = dq[i];
                }
                return dy;
            };
            const auto y1 = rk4_step<detail::kAugmentedDim>(
                rhs, detail::pack_state(s, elev, pitch), t, cfg.dt);
            s = {y1[0], y1[1], y1[2], y1[3]};
            set_channel_ode_state(elev, detail::slice_channel(y1, 4));
            set_channel_ode_state(pitch, detail::slice_channel(y1, 4 + kChannelOdeDim));
            if (std::abs(s.elevation) >= cfg.angle_limit || std::abs(s.pitch) >= cfg.angle_limit) {
                throw overflow_error("run_scenario: angle left the sanity envelope",
                                     "plant: angle envelope");
            }
        } catch (const overflow_error& e) {
            return {std::move(ts), OverflowInfo{k, t, e.stage(), e.what()}};
        }
    }
    return {std::move(ts), std::nullopt};
}

}  // namespace heli
