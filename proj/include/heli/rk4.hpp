#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "heli/errors.hpp"

namespace heli {

namespace detail {

template <std::size_t N>
inline void check_finite(const std::array<double, N>& v, const char* stage) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw overflow_error("rk4_step: non-finite state", stage);
        }
    }
}

}  // namespace detail

// Classical fourth-order Runge-Kutta step for y' = f(y, t). Inputs computed
// outside f (controls, commands) are zero-order-held by construction; f
// itself may sample time-varying signals at the stage times.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(F&& f, const std::array<double, N>& y, double t, double dt) {
    static_assert(std::is_convertible_v<std::invoke_result_t<F&, const std::array<double, N>&, double>,
                                        std::array<double, N>>,
                  "rk4_step: derivative callable must return std::array<double, N>");
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::domain_error("rk4_step: dt must be finite and > 0");
    }
    detail::check_finite<N>(y, "rk4: initial state");

    const std::array<double, N> k1 = f(y, t);
    detail::check_finite<N>(k1, "rk4: stage 1");

    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = f(tmp, t + 0.5 * dt);
    detail::check_finite<N>(k2, "rk4: stage 2");

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = f(tmp, t + 0.5 * dt);
    detail::check_finite<N>(k3, "rk4: stage 3");

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    const std::array<double, N> k4 = f(tmp, t + dt);
    detail::check_finite<N>(k4, "rk4: stage 4");

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    detail::check_finite<N>(out, "rk4: result");
    return out;
}

}  // namespace heli
