#pragma once

// Super-Gaussian drive envelopes and amplitude calibration.
//
// Omega(t) = omega0 * exp(-(t/tau)^4 / 2) on [-tau_c, tau_c], zero outside.
// Times are in seconds, angular frequencies in rad/s.

#include <vector>

namespace ifd {

enum class Transition { t01, t12 };

struct PulseEnvelope {
    double omega0 = 0.0;
    double tau = 14e-9;
    double tau_c = 28e-9;
    double phase = 0.0;
    Transition transition = Transition::t01;
    double detuning = 0.0;

    // Throws DomainError unless tau > 0, tau_c > 0, omega0 >= 0.
    void validate() const;
};

// Drive amplitude samples on a uniform grid starting at t0.
struct SampledWaveform {
    double dt = 1e-9;
    double t0 = 0.0;
    std::vector<double> samples;
    double phase = 0.0;
    Transition transition = Transition::t01;

    double duration() const;
    double end_time() const { return t0 + duration(); }
    // Linear interpolation between samples; zero outside [t0, end_time()].
    double value_at(double t) const;
};

struct PulseDuration {
    double tau;
    double tau_c;
    double total() const { return 2.0 * tau_c; }
};

double envelope_value(const PulseEnvelope& p, double t);

// Integral of exp(-(t/tau)^4/2) over [-tau_c, tau_c] by composite trapezoid.
// Requires dt <= tau/100.
double effective_area(double tau, double tau_c, double dt);
// Same, with dt = tau/400.
double effective_area(double tau, double tau_c);

// Peak amplitude producing rotation angle theta for a pulse of given area.
double amplitude_for_bpulse(double theta, double area);
// Peak amplitude of the Ramsey beam splitter S_N: pi / ((N+1) area).
double amplitude_for_beamsplitter(int n, double area);

// Samples at t_i = -tau_c + i/rate for i = 0 .. round(2 tau_c rate).
SampledWaveform sample_waveform(const PulseEnvelope& p, double sampling_rate);

// B-pulse geometry for the 56 ns hardware pulses. Strengths up to 3.38 pi use
// 56 ns; beyond that the pulse is lengthened in whole nanoseconds, to at most
// 61 ns at 4 pi, so that the peak amplitude stays below the 3.38 pi / 56 ns
// level whenever 61 ns allows it. tau_c = 2 tau throughout.
PulseDuration duration_for_theta(double theta);

// Peak amplitude of a 56 ns pulse at 3.38 pi; the generator's output limit.
double max_bpulse_amplitude();

}  // namespace ifd
