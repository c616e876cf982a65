#include "delayctl/projection.hpp"

#include <cstddef>

namespace delayctl {

void proj(std::span<const double> estimate, std::span<const double> raw, double bound, double nu,
          std::span<double> out) {
    double sq = 0.0;
    double grad_dot_raw = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        sq += estimate[i] * estimate[i];
        grad_dot_raw += estimate[i] * raw[i];
    }
    const double bound2 = bound * bound;
    const double phi = ((1.0 + nu) * sq - bound2) / (nu * bound2);
    // grad phi is parallel to the estimate, so the normalized outer product only needs theta
    if (phi < 0.0 || grad_dot_raw <= 0.0 || sq == 0.0) {
        for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i];
        return;
    }
    const double scale = phi * grad_dot_raw / sq;
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] - scale * estimate[i];
}

double proj(double estimate, double raw, double bound, double nu) {
    double out = 0.0;
    proj(std::span<const double>(&estimate, 1), std::span<const double>(&raw, 1), bound, nu,
         std::span<double>(&out, 1));
    return out;
}

}  // namespace delayctl
