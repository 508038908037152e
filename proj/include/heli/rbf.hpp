#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "heli/sigpow.hpp"

namespace heli {

// Gaussian RBF network: output = W^T q(x) with
//   q_i(x) = exp(-||x - mu_i||^2 / delta_i^2).
// Centers are stored row-major, one row of input_dim entries per neuron.
struct RbfNet {
    std::size_t input_dim = 0;
    std::vector<double> weights;
    std::vector<double> centers;
    std::vector<double> widths;

    std::size_t size() const noexcept { return weights.size(); }

    std::span<const double> center(std::size_t i) const {
        return {centers.data() + i * input_dim, input_dim};
    }

    void validate() const {
        if (input_dim == 0 || weights.empty()) {
            throw std::domain_error("RbfNet: need at least one neuron and one input");
        }
        if (centers.size() != weights.size() * input_dim || widths.size() != weights.size()) {
            throw std::domain_error("RbfNet: inconsistent weight/center/width sizes");
        }
        for (double w : weights) {
            if (!std::isfinite(w)) throw std::domain_error("RbfNet: weights must be finite");
        }
        for (double c : centers) {
            if (!std::isfinite(c)) throw std::domain_error("RbfNet: centers must be finite");
        }
        for (double d : widths) {
            if (!std::isfinite(d) || !(d > 0.0)) {
                throw std::domain_error("RbfNet: widths must be finite and > 0");
            }
        }
    }
};

// Zero-weight network with centers spread evenly along the main diagonal of
// the box [lo, hi] (first neuron at lo, last at hi) and a common width.
inline RbfNet make_diagonal_net(std::size_t neurons, std::span<const double> lo,
                                std::span<const double> hi, double width = 1.0) {
    if (neurons == 0) {
        throw std::domain_error("make_diagonal_net: need at least one neuron");
    }
    if (lo.size() != hi.size() || lo.empty()) {
        throw std::domain_error("make_diagonal_net: box corners must match and be non-empty");
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw std::domain_error("make_diagonal_net: width must be finite and > 0");
    }
    RbfNet net;
    net.input_dim = lo.size();
    net.weights.assign(neurons, 0.0);
    net.widths.assign(neurons, width);
    net.centers.resize(neurons * lo.size());
    for (std::size_t i = 0; i < neurons; ++i) {
        const double f = neurons == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(neurons - 1);
        for (std::size_t j = 0; j < lo.size(); ++j) {
            net.centers[i * lo.size() + j] = lo[j] + f * (hi[j] - lo[j]);
        }
    }
    return net;
}

inline std::vector<double> basis(const RbfNet& net, std::span<const double> x) {
    if (x.size() != net.input_dim) {
        throw std::domain_error("basis: input dimension mismatch");
    }
    std::vector<double> q(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        double dist2 = 0.0;
        for (std::size_t j = 0; j < net.input_dim; ++j) {
            const double diff = x[j] - net.centers[i * net.input_dim + j];
            dist2 += diff * diff;
        }
        q[i] = std::exp(-dist2 / (net.widths[i] * net.widths[i]));
    }
    return q;
}

inline double eval(const RbfNet& net, std::span<const double> x) {
    const std::vector<double> q = basis(net, x);
    double out = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        out += net.weights[i] * q[i];
    }
    return out;
}

struct TrainerConfig {
    double learning_rate = 0.005;  // lambda, in (0,1)
    double exponent = 0.6;         // p; in [0,1) for finite-time descent, 1 = plain descent
    double width_floor = 0.05;     // keeps the 1/delta^2 and 1/delta^3 factors bounded

    void validate() const {
        if (!std::isfinite(learning_rate) || !(learning_rate > 0.0) || !(learning_rate < 1.0)) {
            throw std::domain_error("TrainerConfig: learning_rate must lie in (0,1)");
        }
        if (!std::isfinite(exponent) || exponent < 0.0 || exponent > 1.0) {
            throw std::domain_error("TrainerConfig: exponent must lie in [0,1]");
        }
        if (!std::isfinite(width_floor) || !(width_floor > 0.0)) {
            throw std::domain_error("TrainerConfig: width_floor must be > 0");
        }
    }
};

// Raw descent directions for the cost Y = 0.5 E^2, where the network is
// asked to cancel E: per neuron,
//   d(-Y)/dw_i      = E q_i
//   d(-Y)/dmu_ij    = 2 E w_i q_i (x_j - mu_ij) / delta_i^2
//   d(-Y)/ddelta_i  = 2 E w_i q_i ||x - mu_i||^2 / delta_i^3,
// i.e. the exact gradients of the basis above.
struct FtgdIncrements {
    std::vector<double> weights;
    std::vector<double> centers;  // row-major, like RbfNet::centers
    std::vector<double> widths;
};

inline FtgdIncrements ftgd_increments(const RbfNet& net, std::span<const double> x,
                                      double residual) {
    const std::vector<double> q = basis(net, x);
    const std::size_t n = net.input_dim;
    FtgdIncrements inc;
    inc.weights.resize(net.size());
    inc.centers.resize(net.centers.size());
    inc.widths.resize(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double wq = net.weights[i] * q[i];
        const double d = net.widths[i];
        double dist2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double diff = x[j] - net.centers[i * n + j];
            dist2 += diff * diff;
            inc.centers[i * n + j] = 2.0 * residual * wq * diff / (d * d);
        }
        inc.weights[i] = residual * q[i];
        inc.widths[i] = 2.0 * residual * wq * dist2 / (d * d * d);
    }
    return inc;
}

// One finite-time gradient-descent iteration on Y = 0.5 E^2: every raw
// increment (computed from the pre-update parameters) is passed through
// sig(.)^p and scaled by the learning rate; widths are clamped from below
// at the configured floor.
inline RbfNet ftgd_step(const RbfNet& net, std::span<const double> x, double residual,
                        const TrainerConfig& cfg) {
    if (!std::isfinite(residual)) {
        throw std::domain_error("ftgd_step: residual must be finite");
    }
    const FtgdIncrements inc = ftgd_increments(net, x, residual);
    RbfNet out = net;
    for (std::size_t i = 0; i < net.size(); ++i) {
        out.weights[i] = net.weights[i] + cfg.learning_rate * sig_pow(inc.weights[i], cfg.exponent);
        for (std::size_t j = 0; j < net.input_dim; ++j) {
            const std::size_t k = i * net.input_dim + j;
            out.centers[k] = net.centers[k] + cfg.learning_rate * sig_pow(inc.centers[k], cfg.exponent);
        }
        out.widths[i] = std::max(
            net.widths[i] + cfg.learning_rate * sig_pow(inc.widths[i], cfg.exponent),
            cfg.width_floor);
    }
    return out;
}

// Training signal E and cost Y = 0.5 E^2 assembled from the
// compensated-error dynamics:
//   E = dz2_est + k2 z2 + z1 + m2 z2^h - n2 xi2^h.
// In closed loop E approximates d - nn_out, the part of the disturbance the
// network has not yet learned.
struct NnErrorSignal {
    double residual = 0.0;
    double cost = 0.0;
};

inline NnErrorSignal nn_residual(double dz2_est, double z1, double z2, double xi2, double k2,
                                 double m2, double n2, const OddFraction& h) {
    const double e = dz2_est + k2 * z2 + z1 + m2 * odd_pow(z2, h) - n2 * odd_pow(xi2, h);
    return {e, 0.5 * e * e};
}

// Self-contained trainer exercise: learn d(x) = sin(2 x1) on a fixed input
// cycle x(theta) = (0.5 sin theta, cos theta) sampled `window` points per
// revolution. Returns the per-window means of the cost Y. Used by the
// traintest command and the trainer test suite.
struct OfflineTrainingReport {
    std::size_t iterations = 0;
    std::size_t window = 0;
    std::vector<double> window_means;

    double first_mean() const { return window_means.front(); }
    double last_mean() const { return window_means.back(); }
};

inline OfflineTrainingReport offline_training_run(std::size_t iterations, std::size_t window,
                                                  const TrainerConfig& cfg) {
    if (window == 0 || iterations < 2 * window) {
        throw std::domain_error("offline_training_run: need at least two full windows");
    }
    cfg.validate();
    const std::array<double, 2> lo{-0.5, -1.0};
    const std::array<double, 2> hi{0.5, 1.0};
    RbfNet net = make_diagonal_net(5, lo, hi, 1.0);
    OfflineTrainingReport rep;
    rep.iterations = iterations;
    rep.window = window;
    double acc = 0.0;
    std::size_t in_window = 0;
    for (std::size_t k = 0; k < iterations; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % window) /
                             static_cast<double>(window);
        const std::array<double, 2> x{0.5 * std::sin(theta), std::cos(theta)};
        const double target = std::sin(2.0 * x[0]);
        const double residual = target - eval(net, x);
        acc += 0.5 * residual * residual;
        ++in_window;
        if (in_window == window) {
            rep.window_means.push_back(acc / static_cast<double>(window));
            acc = 0.0;
            in_window = 0;
        }
        net = ftgd_step(net, x, residual, cfg);
    }
    return rep;
}

}  // namespace heli
