#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heli/controller.hpp"
#include "heli/timeseries.hpp"

namespace heli {

// Gain-derived decay coefficients of the per-channel energy
// V = 0.5 (z1^2 + z2^2 + xi1^2 + xi2^2), which obeys
//   V' <= -eta1 V - eta2 V^((1+h)/2) + eta3
// with
//   eta1 = min(2 k1 - 1, 2 k2 - 1)
//   eta2 = 2^((1+h)/2) * min_i min(m_i - n_i/(1+h), n_i/(1+h)),
// and the implied residual radius for |e1|,
//   |e1| <= min( 2 sqrt(2 eta3 / ((1-kappa) eta1)),
//                2 sqrt(2 (eta3 / ((1-kappa) eta2))^(2/(1+h))) ).
// The radius only exists when both eta1 and eta2 are positive; `valid`
// reports that. eta3 collects the bounded residual terms and must be
// supplied (estimated) by the caller.
struct FiniteTimeBound {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta3 = 0.0;
    double kappa = 0.0;
    double e1_radius = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
};

inline FiniteTimeBound finite_time_bounds(const ControllerGains& g, double eta3, double kappa) {
    g.validate();
    if (!std::isfinite(kappa) || !(kappa > 0.0) || !(kappa < 1.0)) {
        throw std::domain_error("finite_time_bounds: kappa must lie in (0,1)");
    }
    if (!std::isfinite(eta3) || !(eta3 > 0.0)) {
        throw std::domain_error("finite_time_bounds: eta3 must be finite and > 0");
    }
    const double hv = g.h.value();
    const double hp = (1.0 + hv) / 2.0;
    const double pw = std::pow(2.0, hp);

    FiniteTimeBound b;
    b.eta3 = eta3;
    b.kappa = kappa;
    b.eta1 = std::min(2.0 * g.k1 - 1.0, 2.0 * g.k2 - 1.0);
    const double c1 = std::min(g.m1 - g.n1 / (1.0 + hv), g.n1 / (1.0 + hv));
    const double c2 = std::min(g.m2 - g.n2 / (1.0 + hv), g.n2 / (1.0 + hv));
    b.eta2 = pw * std::min(c1, c2);
    b.valid = b.eta1 > 0.0 && b.eta2 > 0.0;
    if (b.valid) {
        const double lin = 2.0 * std::sqrt(2.0 * eta3 / ((1.0 - kappa) * b.eta1));
        const double frac =
            2.0 * std::sqrt(2.0 * std::pow(eta3 / ((1.0 - kappa) * b.eta2), 1.0 / hp));
        b.e1_radius = std::min(lin, frac);
    }
    return b;
}

// Confronts the theoretical radius with a finished run: eta3 is estimated
// from the recorded signals as the worst value of
// 0.5 * filter_err^2 + 0.5 * E^2 after t_from (floored at 1e-12 so the
// radius formula stays defined), and the observed worst |e1| after t_from
// is compared against the radius. Diagnostic only — `within` is
// meaningful just when the bound is valid.
struct BoundConsistencyReport {
    FiniteTimeBound bound;
    double observed_max_abs_e1 = 0.0;
    bool within = false;
};

inline BoundConsistencyReport bound_consistency_report(const TimeSeries& ts,
                                                       const ControllerGains& g, double kappa,
                                                       double t_from) {
    if (ts.rows.empty()) {
        throw std::domain_error("bound_consistency_report: empty series");
    }
    double eta3 = 0.0;
    double worst_e1 = 0.0;
    bool any = false;
    for (const TimeRecord& r : ts.rows) {
        if (r.t < t_from) {
            continue;
        }
        any = true;
        const double ferr = r.elev.cmd_signal - r.elev.alpha_m;
        eta3 = std::max(eta3, 0.5 * ferr * ferr + 0.5 * r.elev.residual * r.elev.residual);
        worst_e1 = std::max(worst_e1, std::abs(r.elev.e1));
    }
    if (!any) {
        throw std::domain_error("bound_consistency_report: no samples after t_from");
    }
    BoundConsistencyReport rep;
    rep.bound = finite_time_bounds(g, std::max(eta3, 1e-12), kappa);
    rep.observed_max_abs_e1 = worst_e1;
    rep.within = rep.bound.valid && worst_e1 <= rep.bound.e1_radius;
    return rep;
}

}  // namespace heli
