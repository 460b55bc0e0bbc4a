#include "ifd/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ifd/errors.hpp"

namespace ifd {

namespace {

constexpr double kBaseDuration = 56e-9;
constexpr double kMaxDuration = 61e-9;
constexpr double kStretchThreshold = 3.38 * std::numbers::pi;

double shape(double t, double tau, double tau_c) {
    if (std::abs(t) > tau_c) return 0.0;
    const double x = t / tau;
    return std::exp(-0.5 * x * x * x * x);
}

}  // namespace

void PulseEnvelope::validate() const {
    if (!(tau > 0.0)) throw DomainError("pulse tau must be positive");
    if (!(tau_c > 0.0)) throw DomainError("pulse tau_c must be positive");
    if (!(omega0 >= 0.0)) throw DomainError("pulse amplitude must be non-negative");
}

double SampledWaveform::duration() const {
    return samples.size() < 2 ? 0.0 : dt * static_cast<double>(samples.size() - 1);
}

double SampledWaveform::value_at(double t) const {
    if (samples.empty()) return 0.0;
    const double x = (t - t0) / dt;
    const double last = static_cast<double>(samples.size() - 1);
    // Grid points reached by accumulated time steps land within ~1e-9 of a
    // sample index; snap them so endpoint samples are not lost to rounding.
    if (x < -1e-9 || x > last + 1e-9) return 0.0;
    const double xc = std::clamp(x, 0.0, last);
    const auto i = static_cast<std::size_t>(std::floor(xc));
    if (i + 1 >= samples.size()) return samples.back();
    const double frac = xc - static_cast<double>(i);
    return samples[i] + frac * (samples[i + 1] - samples[i]);
}

double envelope_value(const PulseEnvelope& p, double t) {
    p.validate();
    return p.omega0 * shape(t, p.tau, p.tau_c);
}

double effective_area(double tau, double tau_c, double dt) {
    if (!(tau > 0.0) || !(dt > 0.0) || tau_c < 0.0) {
        throw DomainError("effective_area needs tau > 0, dt > 0, tau_c >= 0");
    }
    if (dt > tau / 100.0 * (1.0 + 1e-12)) throw DomainError("effective_area needs dt <= tau/100");
    if (tau_c == 0.0) return 0.0;
    const auto steps = static_cast<long>(std::ceil(2.0 * tau_c / dt));
    const double h = 2.0 * tau_c / static_cast<double>(steps);
    double sum = 0.5 * (shape(-tau_c, tau, tau_c) + shape(tau_c, tau, tau_c));
    for (long i = 1; i < steps; ++i) sum += shape(-tau_c + h * static_cast<double>(i), tau, tau_c);
    return sum * h;
}

double effective_area(double tau, double tau_c) { return effective_area(tau, tau_c, tau / 400.0); }

double amplitude_for_bpulse(double theta, double area) {
    if (!(area > 0.0)) throw DomainError("pulse area must be positive");
    return theta / area;
}

double amplitude_for_beamsplitter(int n, double area) {
    if (n < 1) throw DomainError("beam splitter requires N >= 1");
    if (!(area > 0.0)) throw DomainError("pulse area must be positive");
    return std::numbers::pi / ((n + 1) * area);
}

SampledWaveform sample_waveform(const PulseEnvelope& p, double sampling_rate) {
    p.validate();
    if (!(sampling_rate > 0.0)) throw DomainError("sampling rate must be positive");
    const double span = 2.0 * p.tau_c * sampling_rate;
    if (span < 8.0) throw DomainError("fewer than 8 samples across the pulse");
    const auto intervals = static_cast<long>(std::llround(span));
    SampledWaveform w;
    w.dt = 1.0 / sampling_rate;
    w.t0 = -p.tau_c;
    w.phase = p.phase;
    w.transition = p.transition;
    w.samples.reserve(static_cast<std::size_t>(intervals + 1));
    for (long i = 0; i <= intervals; ++i) {
        w.samples.push_back(p.omega0 * shape(-p.tau_c + w.dt * static_cast<double>(i), p.tau, p.tau_c));
    }
    return w;
}

double max_bpulse_amplitude() {
    return kStretchThreshold / effective_area(kBaseDuration / 4, kBaseDuration / 2);
}

PulseDuration duration_for_theta(double theta) {
    if (!(theta >= 0.0) || theta > 4.0 * std::numbers::pi * (1.0 + 1e-12)) {
        throw DomainError("duration_for_theta needs theta in [0, 4 pi]");
    }
    double total = kBaseDuration;
    if (theta > kStretchThreshold) {
        // The area scales linearly with the duration at fixed tau_c/tau, so
        // the amplitude cap is met once total >= 56 ns * theta / 3.38 pi.
        const double needed_ns = kBaseDuration * 1e9 * theta / kStretchThreshold;
        total = std::min(std::ceil(needed_ns - 1e-9) * 1e-9, kMaxDuration);
    }
    return {total / 4.0, total / 2.0};
}

}  // namespace ifd
