#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>

namespace heli {

// Sign-preserving power sig(x)^p = |x|^p * sign(x). Odd in x for every
// p >= 0 and continuous at 0 for p > 0; sig(0)^0 is taken as 0 (sign(0)=0).
inline double sig_pow(double x, double p) {
    if (!std::isfinite(x)) {
        throw std::domain_error("sig_pow: argument must be finite");
    }
    if (!std::isfinite(p) || p < 0.0) {
        throw std::domain_error("sig_pow: exponent must be finite and >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    const double mag = std::pow(std::abs(x), p);
    return x < 0.0 ? -mag : mag;
}

// A ratio of positive odd integers constrained to (0,1), kept in lowest
// terms. For such h, z^h is real and sign-preserving on all of R, so it is
// evaluated as sig_pow(z, h.value()).
class OddFraction {
public:
    OddFraction(long numerator, long denominator) {
        if (numerator <= 0 || denominator <= 0) {
            throw std::domain_error("OddFraction: numerator and denominator must be positive");
        }
        if (numerator % 2 == 0 || denominator % 2 == 0) {
            throw std::domain_error("OddFraction: numerator and denominator must both be odd");
        }
        if (numerator >= denominator) {
            throw std::domain_error("OddFraction: value must lie in (0,1)");
        }
        const long g = std::gcd(numerator, denominator);
        num_ = numerator / g;
        den_ = denominator / g;
    }

    long numerator() const noexcept { return num_; }
    long denominator() const noexcept { return den_; }
    double value() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend bool operator==(const OddFraction& a, const OddFraction& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    long num_;
    long den_;
};

inline double odd_pow(double x, const OddFraction& h) { return sig_pow(x, h.value()); }

// The three expressions of the power-mean chain
//   (sum |y_i|)^g  <=  sum |y_i|^g  <=  n^(1-g) (sum |y_i|)^g,  g in (0,1].
struct PowerMeanBounds {
    double lower = 0.0;  // (sum |y|)^g
    double mid = 0.0;    // sum |y|^g
    double upper = 0.0;  // n^(1-g) (sum |y|)^g
};

inline PowerMeanBounds power_mean_bounds(std::span<const double> ys, double gamma) {
    if (ys.empty()) {
        throw std::domain_error("power_mean_bounds: empty sample");
    }
    if (!(gamma > 0.0) || !(gamma <= 1.0)) {
        throw std::domain_error("power_mean_bounds: gamma must lie in (0,1]");
    }
    double sum_abs = 0.0;
    double sum_pow = 0.0;
    for (double y : ys) {
        if (!std::isfinite(y)) {
            throw std::domain_error("power_mean_bounds: sample must be finite");
        }
        sum_abs += std::abs(y);
        sum_pow += std::pow(std::abs(y), gamma);
    }
    const double lower = std::pow(sum_abs, gamma);
    const double upper = std::pow(static_cast<double>(ys.size()), 1.0 - gamma) * lower;
    return {lower, sum_pow, upper};
}

// Young-type product bound:
//   |x1|^c1 |x2|^c2 <= c1/(c1+c2) |x1|^(c1+c2) + c2/(c1+c2) |x2|^(c1+c2).
// Returns the right-hand side.
inline double young_bound(double chi1, double chi2, double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) {
        throw std::domain_error("young_bound: exponents must be positive");
    }
    const double s = c1 + c2;
    return (c1 / s) * std::pow(std::abs(chi1), s) + (c2 / s) * std::pow(std::abs(chi2), s);
}

}  // namespace heli
