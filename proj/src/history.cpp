#include "delayctl/history.hpp"

#include "delayctl/error.hpp"

#include <algorithm>
#include <cmath>

namespace delayctl {

HistoryBuffer::HistoryBuffer(double max_delay, double step) {
    if (!(step > 0.0) || !(max_delay >= 0.0)) throw Error(ErrorCode::InvalidArgument, "history buffer needs step > 0");
    const auto cap = static_cast<std::size_t>(std::ceil(max_delay / step)) + 8;
    times_.assign(cap, 0.0);
    values_.assign(cap, 0.0);
}

std::size_t HistoryBuffer::slot(std::size_t age) const noexcept {
    return (head_ + times_.size() - age) % times_.size();
}

void HistoryBuffer::push(double t, double value) {
    if (count_ > 0 && !(t > times_[head_])) {
        throw Error(ErrorCode::InvalidArgument, "history timestamps must increase");
    }
    head_ = (count_ == 0) ? 0 : (head_ + 1) % times_.size();
    times_[head_] = t;
    values_[head_] = value;
    count_ = std::min(count_ + 1, times_.size());
}

double HistoryBuffer::newest_time() const {
    if (count_ == 0) throw Error(ErrorCode::InvalidArgument, "empty history");
    return times_[head_];
}

double HistoryBuffer::lookup(double t) const {
    if (t <= 0.0 || count_ == 0) return 0.0;
    const double newest = times_[head_];
    if (t >= newest) {
        if (count_ == 1) return values_[head_];
        const std::size_t prev = slot(1);
        const double slope = (values_[head_] - values_[prev]) / (newest - times_[prev]);
        return values_[head_] + slope * (t - newest);
    }
    const std::size_t oldest_age = count_ - 1;
    const double oldest = times_[slot(oldest_age)];
    if (t < oldest) {
        // before the stored range: either zero pre-history or interpolation toward t = 0
        if (oldest <= 0.0) return 0.0;
        if (times_[slot(oldest_age)] > 0.0 && count_ < times_.size()) {
            return values_[slot(oldest_age)] * (t / oldest);
        }
        throw Error(ErrorCode::InvalidArgument, "history lookup older than buffer capacity");
    }
    // uniform spacing: estimate the age, then correct
    const double span = newest - oldest;
    std::size_t age = oldest_age == 0 ? 0
                                      : static_cast<std::size_t>(std::clamp(
                                            std::floor((newest - t) / span * static_cast<double>(oldest_age)), 0.0,
                                            static_cast<double>(oldest_age - 1)));
    while (age + 1 < count_ && times_[slot(age + 1)] > t) ++age;
    while (age > 0 && times_[slot(age)] < t) --age;
    // times_[slot(age + 1)] <= t <= times_[slot(age)]
    const std::size_t hi = slot(age);
    const std::size_t lo = slot(age + 1);
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

}  // namespace delayctl
