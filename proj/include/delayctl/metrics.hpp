#pragma once

#include "delayctl/simulation.hpp"

namespace delayctl {

struct TrackingMetrics {
    double max_err = 0.0;
    double rms_err = 0.0;
    double osc_freq = 0.0;  ///< Hz
};

/**
 * @brief Tracking error statistics of e = y - y_des over samples with t >= t_start.
 *
 * osc_freq counts zero crossings of e minus its window mean and divides by
 * twice the window length. Throws Error(EmptyWindow) when fewer than two
 * samples fall in the window.
 */
TrackingMetrics tracking_metrics(const SimTrace& trace, double t_start);

/// Same statistics for an arbitrary sampled error signal.
TrackingMetrics error_metrics(const std::vector<double>& t, const std::vector<double>& e, double t_start);

}  // namespace delayctl
