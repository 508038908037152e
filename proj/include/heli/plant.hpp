#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "heli/errors.hpp"

namespace heli {

// Bench constants. Defaults are the stock configuration; scenarios may
// override any of them.
struct PlantParams {
    double elev_inertia = 1.044;   // J_alpha [kg m^2]
    double pitch_inertia = 0.044;  // J_beta  [kg m^2]
    double elev_arm = 0.660;       // L_a [m]
    double pitch_arm = 0.178;      // L_h [m]
    double mass = 1.15;            // [kg]
    double gravity = 9.81;         // [m/s^2]

    void validate() const {
        for (double v : {elev_inertia, pitch_inertia, elev_arm, pitch_arm, mass, gravity}) {
            if (!std::isfinite(v) || !(v > 0.0)) {
                throw std::domain_error("PlantParams: all constants must be finite and > 0");
            }
        }
    }
};

struct PlantState {
    double elevation = 0.0;       // x1 [rad]
    double elevation_rate = 0.0;  // x2 [rad/s]
    double pitch = 0.0;           // x3 [rad]
    double pitch_rate = 0.0;      // x4 [rad/s]

    bool finite() const {
        return std::isfinite(elevation) && std::isfinite(elevation_rate) &&
               std::isfinite(pitch) && std::isfinite(pitch_rate);
    }
};

// Commanded lift forces. An optional symmetric saturation clamps both
// commands; it is off by default.
struct ControlInput {
    double elevation_cmd = 0.0;  // u1
    double pitch_cmd = 0.0;      // u2
    std::optional<double> saturation;

    ControlInput saturated() const {
        if (!saturation) {
            return *this;
        }
        const double s = *saturation;
        return {std::clamp(elevation_cmd, -s, s), std::clamp(pitch_cmd, -s, s), saturation};
    }
};

// Rigid-body elevation/pitch dynamics:
//   x1' = x2
//   x2' = (L_a/J_a) u1 - (g/J_a) m L_a cos(x1) + d1
//   x3' = x4
//   x4' = (L_h/J_b) u2 + d2
inline PlantState plant_derivatives(const PlantState& s, const ControlInput& u_raw,
                                    double d1, double d2, const PlantParams& p) {
    const ControlInput u = u_raw.saturated();
    PlantState d;
    d.elevation = s.elevation_rate;
    d.elevation_rate = (p.elev_arm / p.elev_inertia) * u.elevation_cmd -
                       (p.gravity / p.elev_inertia) * p.mass * p.elev_arm * std::cos(s.elevation) +
                       d1;
    d.pitch = s.pitch_rate;
    d.pitch_rate = (p.pitch_arm / p.pitch_inertia) * u.pitch_cmd + d2;
    if (!d.finite()) {
        const char* comp = !std::isfinite(d.elevation)        ? "plant: elevation rate"
                           : !std::isfinite(d.elevation_rate) ? "plant: elevation acceleration"
                           : !std::isfinite(d.pitch)          ? "plant: pitch rate"
                                                              : "plant: pitch acceleration";
        throw overflow_error("plant_derivatives: non-finite derivative", comp);
    }
    return d;
}

// Additive channel disturbance d(t): zero, a sinusoid
// amplitude*sin(omega*t + phase), or a table linearly interpolated between
// samples (held flat past the last sample; querying before the first is an
// error).
class DisturbanceSpec {
public:
    enum class Kind { none, sinusoid, tabulated };

    DisturbanceSpec() = default;

    static DisturbanceSpec none() { return {}; }

    static DisturbanceSpec sinusoid(double amplitude, double omega, double phase = 0.0) {
        if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase)) {
            throw std::domain_error("DisturbanceSpec: sinusoid parameters must be finite");
        }
        DisturbanceSpec d;
        d.kind_ = Kind::sinusoid;
        d.amp_ = amplitude;
        d.omega_ = omega;
        d.phase_ = phase;
        return d;
    }

    static DisturbanceSpec tabulated(std::vector<std::pair<double, double>> samples) {
        if (samples.empty()) {
            throw std::domain_error("DisturbanceSpec: table must not be empty");
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second)) {
                throw std::domain_error("DisturbanceSpec: table entries must be finite");
            }
            if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
                throw std::domain_error("DisturbanceSpec: table times must be strictly increasing");
            }
        }
        DisturbanceSpec d;
        d.kind_ = Kind::tabulated;
        d.samples_ = std::move(samples);
        return d;
    }

    Kind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amp_; }
    double omega() const noexcept { return omega_; }
    double phase() const noexcept { return phase_; }
    const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

    double eval(double t) const {
        switch (kind_) {
            case Kind::none:
                return 0.0;
            case Kind::sinusoid:
                return amp_ * std::sin(omega_ * t + phase_);
            case Kind::tabulated: {
                if (t < samples_.front().first) {
                    throw std::domain_error("DisturbanceSpec: query before first table time");
                }
                if (t >= samples_.back().first) {
                    return samples_.back().second;
                }
                std::size_t hi = 1;
                while (samples_[hi].first < t) {
                    ++hi;
                }
                const auto& [t0, v0] = samples_[hi - 1];
                const auto& [t1, v1] = samples_[hi];
                const double w = (t - t0) / (t1 - t0);
                return v0 + w * (v1 - v0);
            }
        }
        return 0.0;
    }

private:
    Kind kind_ = Kind::none;
    double amp_ = 0.0;
    double omega_ = 0.0;
    double phase_ = 0.0;
    std::vector<std::pair<double, double>> samples_;
};

inline double disturbance_eval(const DisturbanceSpec& spec, double t) { return spec.eval(t); }

}  // namespace heli
