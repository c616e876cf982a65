#include "delayctl/metrics.hpp"

#include "delayctl/error.hpp"

#include <cmath>

namespace delayctl {

TrackingMetrics error_metrics(const std::vector<double>& t, const std::vector<double>& e, double t_start) {
    std::size_t first = 0;
    while (first < t.size() && t[first] < t_start) ++first;
    const std::size_t count = t.size() - first;
    if (count < 2) throw Error(ErrorCode::EmptyWindow, "fewer than two samples after t_start");

    TrackingMetrics m;
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = first; i < t.size(); ++i) {
        m.max_err = std::max(m.max_err, std::abs(e[i]));
        sum += e[i];
        sq += e[i] * e[i];
    }
    const double mean = sum / static_cast<double>(count);
    m.rms_err = std::sqrt(sq / static_cast<double>(count));

    int crossings = 0;
    double prev = e[first] - mean;
    for (std::size_t i = first + 1; i < t.size(); ++i) {
        const double cur = e[i] - mean;
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) ++crossings;
        if (cur != 0.0) prev = cur;
    }
    const double window = t.back() - t[first];
    m.osc_freq = window > 0.0 ? crossings / (2.0 * window) : 0.0;
    return m;
}

TrackingMetrics tracking_metrics(const SimTrace& trace, double t_start) {
    if (trace.y.size() != trace.size()) throw Error(ErrorCode::EmptyWindow, "trace has no plant output");
    std::vector<double> e(trace.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = trace.y[i] - trace.y_des[i];
    return error_metrics(trace.t, e, t_start);
}

}  // namespace delayctl
