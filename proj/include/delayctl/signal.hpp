#pragma once

#include <vector>

namespace delayctl {

enum class TrigKind { Sine, Cosine };

struct SignalTerm {
    double amplitude = 0.0;
    double frequency = 0.0;  ///< rad/s
    double phase = 0.0;      ///< rad
    TrigKind kind = TrigKind::Sine;
};

/// offset + sum of amplitude * trig(frequency t + phase).
struct SignalSpec {
    double offset = 0.0;
    std::vector<SignalTerm> terms;

    static SignalSpec constant(double c) { return {c, {}}; }
};

double signal_eval(const SignalSpec& spec, double t);

/// |offset| + sum |amplitude|.
double signal_sup_bound(const SignalSpec& spec);

/// sum |amplitude * frequency|, a bound on |d/dt signal|.
double signal_rate_bound(const SignalSpec& spec);

}  // namespace delayctl
