#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "heli/timeseries.hpp"

namespace heli {

struct Metrics {
    // Root-mean-square of e1 over the evaluation window [rad].
    double rmse = 0.0;
    // First time after which |e1| stays within 2% of the reference
    // amplitude for the rest of the run; empty when it never does.
    std::optional<double> settling_time;
    // Worst |e1| from the settling instant to the end (whole run when the
    // channel never settles).
    double max_e1_after_settling = 0.0;
    // Elevation-channel Lyapunov value at the last sample.
    double final_lyapunov = 0.0;
    // Worst |u1| over the whole run.
    double peak_abs_u = 0.0;
    // The settling threshold that was used [rad].
    double settle_threshold = 0.0;
};

// Evaluates the elevation channel of a run. The RMSE window is
// [window_start, window_end]; settling is judged against
// 0.02 * ref_amplitude (0.02 rad when the amplitude is zero, e.g. pure
// regulation to 0).
inline Metrics compute_metrics(const TimeSeries& ts, double window_start, double window_end,
                               double ref_amplitude) {
    if (ts.rows.empty()) {
        throw std::domain_error("compute_metrics: empty series");
    }
    if (!(window_end >= window_start)) {
        throw std::domain_error("compute_metrics: window must satisfy start <= end");
    }
    Metrics m;
    m.settle_threshold = ref_amplitude > 0.0 ? 0.02 * ref_amplitude : 0.02;

    double sq = 0.0;
    std::size_t count = 0;
    for (const TimeRecord& r : ts.rows) {
        if (r.t >= window_start && r.t <= window_end) {
            sq += r.elev.e1 * r.elev.e1;
            ++count;
        }
        m.peak_abs_u = std::max(m.peak_abs_u, std::abs(r.elev.u));
    }
    if (count == 0) {
        throw std::domain_error("compute_metrics: no samples in the evaluation window");
    }
    m.rmse = std::sqrt(sq / static_cast<double>(count));
    m.final_lyapunov = ts.rows.back().elev.lyapunov;

    // Last sample that violates the settling band; the channel is settled
    // from the next sample on. No violation at all settles at t = 0.
    std::size_t first_settled = 0;
    for (std::size_t k = ts.rows.size(); k-- > 0;) {
        if (std::abs(ts.rows[k].elev.e1) > m.settle_threshold) {
            first_settled = k + 1;
            break;
        }
    }
    if (first_settled < ts.rows.size()) {
        m.settling_time = ts.rows[first_settled].t;
        for (std::size_t k = first_settled; k < ts.rows.size(); ++k) {
            m.max_e1_after_settling =
                std::max(m.max_e1_after_settling, std::abs(ts.rows[k].elev.e1));
        }
    } else {
        for (const TimeRecord& r : ts.rows) {
            m.max_e1_after_settling = std::max(m.max_e1_after_settling, std::abs(r.elev.e1));
        }
    }
    return m;
}

}  // namespace heli
