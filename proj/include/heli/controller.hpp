#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "heli/hftd.hpp"
#include "heli/plant.hpp"
#include "heli/rbf.hpp"
#include "heli/reference.hpp"
#include "heli/rk4.hpp"
#include "heli/sigpow.hpp"

namespace heli {

enum class Channel { elevation, pitch };

// proposed: finite-time backstepping with fractional-power correction terms
//           and finite-time gradient descent on the network.
// baseline: the same backstepping skeleton with the fractional terms absent
//           (m = n = 0 in effect) and a plain-gradient trainer (p = 1).
enum class Variant { proposed, baseline };

struct ControllerGains {
    double k1 = 1.0;
    double k2 = 2.0;
    double m1 = 0.5;
    double m2 = 0.5;
    double n1 = 1.0;
    double n2 = 1.0;
    OddFraction h{3, 5};

    // k1, k2 strictly positive; the fractional-term gains may be zero, which
    // degenerates the laws to their plain backstepping form.
    void validate() const {
        if (!std::isfinite(k1) || !std::isfinite(k2) || !(k1 > 0.0) || !(k2 > 0.0)) {
            throw std::domain_error("ControllerGains: k1, k2 must be finite and > 0");
        }
        for (double v : {m1, m2, n1, n2}) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::domain_error("ControllerGains: m1, m2, n1, n2 must be finite and >= 0");
            }
        }
    }

    // True when min_i (m_i - n_i/(1+h)) <= 0, i.e. the fractional-decay
    // coefficient eta2 of the convergence estimate is not positive and the
    // residual-radius formula does not apply. The stock gain set
    // (m = 0.5, n = 1, h = 3/5) trips this deliberately.
    bool eta2_degenerate() const {
        const double hv = h.value();
        return std::min(m1 - n1 / (1.0 + hv), m2 - n2 / (1.0 + hv)) <= 0.0;
    }
};

struct CompensatorState {
    double xi1 = 0.0;
    double xi2 = 0.0;

    double norm() const { return std::hypot(xi1, xi2); }
};

struct TrackingErrors {
    double e1 = 0.0;  // angle - reference
    double e2 = 0.0;  // rate - filtered intermediate command
};

struct CompensatedErrors {
    double z1 = 0.0;  // e1 - xi1
    double z2 = 0.0;  // e2 - xi2
};

inline TrackingErrors tracking_errors(const PlantState& s, double filtered_cmd,
                                      const RefPoint& ref, Channel ch) {
    const double angle = ch == Channel::elevation ? s.elevation : s.pitch;
    const double rate = ch == Channel::elevation ? s.elevation_rate : s.pitch_rate;
    return {angle - ref.pos, rate - filtered_cmd};
}

inline CompensatedErrors compensated_errors(const TrackingErrors& e, const CompensatorState& c) {
    return {e.e1 - c.xi1, e.e2 - c.xi2};
}

// Filter-error compensator
//   xi1' = -k1 xi1 + xi2 + (x1c - alpha_m) - n1 xi1^h
//   xi2' = -k2 xi2 - xi1 - n2 xi2^h
// absorbing the lag the command filter introduces between alpha_m and x1c.
inline CompensatorState compensation_derivatives(const CompensatorState& c, double filter_err,
                                                 const ControllerGains& g) {
    return {-g.k1 * c.xi1 + c.xi2 + filter_err - g.n1 * odd_pow(c.xi1, g.h),
            -g.k2 * c.xi2 - c.xi1 - g.n2 * odd_pow(c.xi2, g.h)};
}

// Intermediate (virtual) rate command alpha_m = -k1 e1 + ref_rate - m1 z1^h.
inline double intermediate_control(double e1, double ref_rate, double z1,
                                   const ControllerGains& g) {
    return -g.k1 * e1 + ref_rate - g.m1 * odd_pow(z1, g.h);
}

// Final elevation command; deriv_est is the filtered derivative x2c of the
// intermediate command, nn_out the network's disturbance estimate.
inline double control_law_elevation(double e1, double e2, double z2, double deriv_est,
                                    double elevation, double nn_out, const ControllerGains& g,
                                    const PlantParams& p) {
    return (p.elev_inertia / p.elev_arm) *
           (-g.k2 * e2 - e1 + deriv_est +
            (p.gravity / p.elev_inertia) * p.mass * p.elev_arm * std::cos(elevation) -
            g.m2 * odd_pow(z2, g.h) - nn_out);
}

// Pitch has no gravity feedforward.
inline double control_law_pitch(double e1, double e2, double z2, double deriv_est, double nn_out,
                                const ControllerGains& g, const PlantParams& p) {
    return (p.pitch_inertia / p.pitch_arm) *
           (-g.k2 * e2 - e1 + deriv_est - g.m2 * odd_pow(z2, g.h) - nn_out);
}

// ---------------------------------------------------------------------------
// Comparison controller: conventional adaptive-NN backstepping. Same
// structure with the fractional-power terms absent; the compensator is the
// classic command-filter form. Kept as separate entry points so the two
// laws stay independently auditable.
// ---------------------------------------------------------------------------

inline double baseline_intermediate_control(double e1, double ref_rate,
                                            const ControllerGains& g) {
    return -g.k1 * e1 + ref_rate;
}

inline CompensatorState baseline_compensation_derivatives(const CompensatorState& c,
                                                          double filter_err,
                                                          const ControllerGains& g) {
    return {-g.k1 * c.xi1 + c.xi2 + filter_err, -g.k2 * c.xi2 - c.xi1};
}

inline double baseline_control_law_elevation(double e1, double e2, double deriv_est,
                                             double elevation, double nn_out,
                                             const ControllerGains& g, const PlantParams& p) {
    return (p.elev_inertia / p.elev_arm) *
           (-g.k2 * e2 - e1 + deriv_est +
            (p.gravity / p.elev_inertia) * p.mass * p.elev_arm * std::cos(elevation) - nn_out);
}

inline double baseline_control_law_pitch(double e1, double e2, double deriv_est, double nn_out,
                                         const ControllerGains& g, const PlantParams& p) {
    return (p.pitch_inertia / p.pitch_arm) * (-g.k2 * e2 - e1 + deriv_est - nn_out);
}

// ---------------------------------------------------------------------------
// One control channel: gains, compensator, the two differentiators (command
// filter on alpha_m and rate filter estimating z2'), and the disturbance
// network with its trainer.
// ---------------------------------------------------------------------------

struct ChannelController {
    Channel channel = Channel::elevation;
    Variant variant = Variant::proposed;
    ControllerGains gains;
    HftdConfig cmd_filter_cfg;
    HftdConfig rate_filter_cfg;
    CompensatorState comp;
    HftdState cmd_filter;   // x1c, x2c
    HftdState rate_filter;  // filtered z2 and its derivative estimate
    RbfNet net;
    TrainerConfig trainer;
    bool primed = false;
};

// Per-sample diagnostics. All quantities are evaluated at the same instant
// from the current states (u is then held over the step).
struct ChannelSample {
    double e1 = 0.0;
    double e2 = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;
    double xi1 = 0.0;
    double xi2 = 0.0;
    double alpha_m = 0.0;        // intermediate command
    double cmd_signal = 0.0;     // x1c: filtered alpha_m
    double cmd_deriv = 0.0;      // x2c: its derivative estimate
    double rate_signal = 0.0;    // filtered z2
    double rate_deriv_est = 0.0; // z2' estimate feeding the residual
    double nn_out = 0.0;
    double residual = 0.0;       // E
    double cost = 0.0;           // Y = 0.5 E^2
    double u = 0.0;
    double lyapunov = 0.0;       // 0.5 (z1^2 + z2^2 + xi1^2 + xi2^2)
};

// Starts both differentiators on their equilibria so the first sample sees
// no artificial filter transient: the command filter at alpha_m(0) and the
// rate filter at z2(0), each with zero derivative estimate.
inline void prime_channel(ChannelController& c, const PlantState& s, const RefPoint& ref) {
    const double angle = c.channel == Channel::elevation ? s.elevation : s.pitch;
    const double rate = c.channel == Channel::elevation ? s.elevation_rate : s.pitch_rate;
    const double e1 = angle - ref.pos;
    const double z1 = e1 - c.comp.xi1;
    const double alpha_m = c.variant == Variant::proposed
                               ? intermediate_control(e1, ref.vel, z1, c.gains)
                               : baseline_intermediate_control(e1, ref.vel, c.gains);
    c.cmd_filter = {alpha_m, 0.0};
    const double e2 = rate - c.cmd_filter.signal;
    const double z2 = e2 - c.comp.xi2;
    c.rate_filter = {z2, 0.0};
    c.primed = true;
}

// Pure per-sample computation: errors, intermediate and final commands,
// network output, training residual, Lyapunov value. Touches no state.
inline ChannelSample channel_sample(const ChannelController& c, const PlantState& s,
                                    const RefPoint& ref, const PlantParams& params) {
    if (!c.primed) {
        throw std::logic_error("channel_sample: prime_channel must run first");
    }
    ChannelSample out;
    const TrackingErrors e = tracking_errors(s, c.cmd_filter.signal, ref, c.channel);
    const CompensatedErrors z = compensated_errors(e, c.comp);
    out.e1 = e.e1;
    out.e2 = e.e2;
    out.z1 = z.z1;
    out.z2 = z.z2;
    out.xi1 = c.comp.xi1;
    out.xi2 = c.comp.xi2;
    out.cmd_signal = c.cmd_filter.signal;
    out.cmd_deriv = c.cmd_filter.deriv;
    out.rate_signal = c.rate_filter.signal;
    out.rate_deriv_est = c.rate_filter.deriv;

    const double angle = c.channel == Channel::elevation ? s.elevation : s.pitch;
    const double rate = c.channel == Channel::elevation ? s.elevation_rate : s.pitch_rate;
    const std::array<double, 2> x{angle, rate};
    out.nn_out = eval(c.net, x);

    if (c.variant == Variant::proposed) {
        out.alpha_m = intermediate_control(e.e1, ref.vel, z.z1, c.gains);
        out.u = c.channel == Channel::elevation
                    ? control_law_elevation(e.e1, e.e2, z.z2, c.cmd_filter.deriv, angle,
                                            out.nn_out, c.gains, params)
                    : control_law_pitch(e.e1, e.e2, z.z2, c.cmd_filter.deriv, out.nn_out,
                                        c.gains, params);
        const NnErrorSignal res = nn_residual(c.rate_filter.deriv, z.z1, z.z2, c.comp.xi2,
                                              c.gains.k2, c.gains.m2, c.gains.n2, c.gains.h);
        out.residual = res.residual;
        out.cost = res.cost;
    } else {
        out.alpha_m = baseline_intermediate_control(e.e1, ref.vel, c.gains);
        out.u = c.channel == Channel::elevation
                    ? baseline_control_law_elevation(e.e1, e.e2, c.cmd_filter.deriv, angle,
                                                     out.nn_out, c.gains, params)
                    : baseline_control_law_pitch(e.e1, e.e2, c.cmd_filter.deriv, out.nn_out,
                                                 c.gains, params);
        const NnErrorSignal res = nn_residual(c.rate_filter.deriv, z.z1, z.z2, c.comp.xi2,
                                              c.gains.k2, 0.0, 0.0, c.gains.h);
        out.residual = res.residual;
        out.cost = res.cost;
    }

    out.lyapunov = 0.5 * (z.z1 * z.z1 + z.z2 * z.z2 + c.comp.xi1 * c.comp.xi1 +
                          c.comp.xi2 * c.comp.xi2);
    return out;
}

// One trainer iteration on the current residual. The comparison variant
// always trains with the plain gradient (exponent 1), whatever the
// configured exponent says.
inline void channel_train(ChannelController& c, const PlantState& s, double residual) {
    const double angle = c.channel == Channel::elevation ? s.elevation : s.pitch;
    const double rate = c.channel == Channel::elevation ? s.elevation_rate : s.pitch_rate;
    const std::array<double, 2> x{angle, rate};
    TrainerConfig cfg = c.trainer;
    if (c.variant == Variant::baseline) {
        cfg.exponent = 1.0;
    }
    c.net = ftgd_step(c.net, x, residual, cfg);
}

// The channel-owned ODE block, packed as
//   [xi1, xi2, cmd.signal, cmd.deriv, rate.signal, rate.deriv].
inline constexpr std::size_t kChannelOdeDim = 6;

struct ChannelOdeInputs {
    double alpha_m = 0.0;     // command-filter input (held or live, caller's choice)
    double plant_rate = 0.0;  // the channel's rate state feeding z2 = (rate - x1c) - xi2
};

inline std::array<double, kChannelOdeDim> channel_ode_state(const ChannelController& c) {
    return {c.comp.xi1, c.comp.xi2, c.cmd_filter.signal, c.cmd_filter.deriv,
            c.rate_filter.signal, c.rate_filter.deriv};
}

inline void set_channel_ode_state(ChannelController& c, const std::array<double, kChannelOdeDim>& y) {
    c.comp = {y[0], y[1]};
    c.cmd_filter = {y[2], y[3]};
    c.rate_filter = {y[4], y[5]};
}

inline std::array<double, kChannelOdeDim> channel_ode_derivatives(
    const ChannelController& c, const std::array<double, kChannelOdeDim>& y,
    const ChannelOdeInputs& in) {
    const CompensatorState xi{y[0], y[1]};
    const HftdState cmd{y[2], y[3]};
    const HftdState rate_f{y[4], y[5]};
    const double filter_err = cmd.signal - in.alpha_m;
    const CompensatorState dxi = c.variant == Variant::proposed
                                     ? compensation_derivatives(xi, filter_err, c.gains)
                                     : baseline_compensation_derivatives(xi, filter_err, c.gains);
    const HftdState dcmd = hftd_derivatives(cmd, in.alpha_m, c.cmd_filter_cfg);
    const double z2_live = (in.plant_rate - cmd.signal) - xi.xi2;
    const HftdState drate = hftd_derivatives(rate_f, z2_live, c.rate_filter_cfg);
    return {dxi.xi1, dxi.xi2, dcmd.signal, dcmd.deriv, drate.signal, drate.deriv};
}

struct ChannelStepResult {
    double u = 0.0;
    ChannelController controller;
    ChannelSample diag;
};

// Self-contained single control step over [t, t+dt]: compute the sample,
// run one trainer iteration, then advance the channel-owned ODE block with
// the plant state and alpha_m held constant. The scenario engine does NOT
// use this: it advances the channel blocks jointly with the plant in one
// augmented RK4 vector (see simulate.hpp); this entry point serves
// channel-in-isolation work, where no live plant exists.
inline ChannelStepResult channel_step(const ChannelController& ctrl, const PlantState& s,
                                      const RefPoint& ref, const PlantParams& params, double t,
                                      double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::domain_error("channel_step: dt must be finite and > 0");
    }
    ChannelController c = ctrl;
    if (!c.primed) {
        prime_channel(c, s, ref);
    }
    const ChannelSample diag = channel_sample(c, s, ref, params);
    channel_train(c, s, diag.residual);
    const double plant_rate =
        c.channel == Channel::elevation ? s.elevation_rate : s.pitch_rate;
    const ChannelOdeInputs inputs{diag.alpha_m, plant_rate};
    const auto rhs = [&](const std::array<double, kChannelOdeDim>& y, double) {
        return channel_ode_derivatives(c, y, inputs);
    };
    set_channel_ode_state(c, rk4_step<kChannelOdeDim>(rhs, channel_ode_state(c), t, dt));
    return {diag.u, std::move(c), diag};
}

}  // namespace heli
