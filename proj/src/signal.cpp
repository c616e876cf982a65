#include "delayctl/signal.hpp"

#include <cmath>

namespace delayctl {

double signal_eval(const SignalSpec& spec, double t) {
    double v = spec.offset;
    for (const SignalTerm& term : spec.terms) {
        const double arg = term.frequency * t + term.phase;
        v += term.amplitude * (term.kind == TrigKind::Sine ? std::sin(arg) : std::cos(arg));
    }
    return v;
}

double signal_sup_bound(const SignalSpec& spec) {
    double b = std::abs(spec.offset);
    for (const SignalTerm& term : spec.terms) b += std::abs(term.amplitude);
    return b;
}

double signal_rate_bound(const SignalSpec& spec) {
    double b = 0.0;
    for (const SignalTerm& term : spec.terms) b += std::abs(term.amplitude * term.frequency);
    return b;
}

}  // namespace delayctl
