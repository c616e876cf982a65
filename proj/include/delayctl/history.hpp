#pragma once

#include <cstddef>
#include <vector>

namespace delayctl {

/**
 * @brief Ring buffer of uniformly spaced (t, value) samples of a scalar signal.
 *
 * Holds enough samples to answer lookups back to t_now - max_delay. Lookups
 * at t' <= 0 return the zero pre-history; lookups inside the stored range
 * interpolate linearly; lookups past the newest sample extrapolate from the
 * last two samples.
 */
class HistoryBuffer {
public:
    HistoryBuffer(double max_delay, double step);

    /// Appends a sample; timestamps must be strictly increasing.
    void push(double t, double value);
    [[nodiscard]] double lookup(double t) const;

    [[nodiscard]] std::size_t capacity() const noexcept { return times_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] double newest_time() const;

private:
    [[nodiscard]] std::size_t slot(std::size_t age) const noexcept;  // age 0 = newest

    std::vector<double> times_;
    std::vector<double> values_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

}  // namespace delayctl
