#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heli {

struct RefPoint {
    double pos = 0.0;
    double vel = 0.0;
};

// Tracking target with an analytic first derivative: either a constant hold
// or a sinusoid amplitude*sin(omega*t + phase).
class ReferenceSpec {
public:
    enum class Kind { constant, sine };

    ReferenceSpec() = default;  // constant 0

    static ReferenceSpec constant(double value) {
        if (!std::isfinite(value)) {
            throw std::domain_error("ReferenceSpec: constant value must be finite");
        }
        ReferenceSpec r;
        r.kind_ = Kind::constant;
        r.value_ = value;
        return r;
    }

    static ReferenceSpec sine(double amplitude, double omega, double phase = 0.0) {
        if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase)) {
            throw std::domain_error("ReferenceSpec: sine parameters must be finite");
        }
        ReferenceSpec r;
        r.kind_ = Kind::sine;
        r.amp_ = amplitude;
        r.omega_ = omega;
        r.phase_ = phase;
        return r;
    }

    Kind kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }
    double amplitude() const noexcept { return kind_ == Kind::sine ? amp_ : std::abs(value_); }
    double omega() const noexcept { return omega_; }
    double phase() const noexcept { return phase_; }

    RefPoint eval(double t) const {
        if (kind_ == Kind::constant) {
            return {value_, 0.0};
        }
        return {amp_ * std::sin(omega_ * t + phase_), amp_ * omega_ * std::cos(omega_ * t + phase_)};
    }

private:
    Kind kind_ = Kind::constant;
    double value_ = 0.0;
    double amp_ = 0.0;
    double omega_ = 0.0;
    double phase_ = 0.0;
};

// The stock elevation target, (pi/18) sin(0.3 pi t - pi/2): a 10-degree
// swing starting at its lowest point, period 20/3 s.
inline ReferenceSpec nominal_reference() {
    return ReferenceSpec::sine(std::numbers::pi / 18.0, 0.3 * std::numbers::pi,
                               -std::numbers::pi / 2.0);
}

inline RefPoint reference_eval(double t) { return nominal_reference().eval(t); }

}  // namespace heli
