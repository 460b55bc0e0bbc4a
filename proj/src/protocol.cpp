#include "ifd/protocol.hpp"

#include <cmath>
#include <numbers>

#include "ifd/errors.hpp"
#include "ifd/pulse.hpp"

namespace ifd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBaseDuration = 56e-9;

void check_thetas(int n, const std::vector<double>& thetas) {
    if (n < 1) throw DomainError("protocol needs N >= 1");
    if (thetas.size() != static_cast<std::size_t>(n)) {
        throw DomainError("expected " + std::to_string(n) + " pulse strengths, got " +
                          std::to_string(thetas.size()));
    }
}

double half_angle(int n) { return kPi / (2.0 * (n + 1)); }

// Resonant drive with phase -pi/2, i.e. H = (Omega/2) sigma^y on the transition.
DriveHamiltonianSpec rotation_pulse(Transition tr, double angle, double duration, double rate) {
    PulseEnvelope p;
    p.tau = duration / 4.0;
    p.tau_c = duration / 2.0;
    p.phase = -kPi / 2.0;
    p.transition = tr;
    p.omega0 = std::abs(angle) / effective_area(p.tau, p.tau_c);
    if (angle < 0.0) p.phase = kPi / 2.0;
    return drive_from(sample_waveform(p, rate));
}

double bpulse_duration(const PulseGeometry& g, double theta) {
    if (g.bpulse_duration <= kBaseDuration * (1.0 + 1e-9)) {
        if (theta > 4.0 * kPi * (1.0 + 1e-12)) {
            throw DomainError("dissipative B-pulses at 56 ns support theta up to 4 pi");
        }
        return std::max(g.bpulse_duration, duration_for_theta(std::abs(theta)).total());
    }
    return g.bpulse_duration;
}

DensityMatrix initial_density(const ProtocolSpec& spec) {
    if (const auto* s = std::get_if<PureState>(&spec.initial)) return DensityMatrix(*s);
    return std::get<DensityMatrix>(spec.initial);
}

// Runs the dissipative sequence, calling `visit` after every segment.
template <class Visit>
DensityMatrix run_dissipative(const ProtocolSpec& spec, Visit&& visit) {
    spec.validate();
    if (spec.model == ModelKind::ideal) throw DomainError("dissipative run requested with the ideal model");
    if (!spec.decoherence) throw DomainError("dissipative run needs a decoherence model");
    const ThermalRates rates = thermal_rates(*spec.decoherence);
    const PulseGeometry g = spec.geometry();
    const double dt = 1.0 / g.sampling_rate;
    const int n = spec.n_segments;
    const DriveHamiltonianSpec splitter =
        rotation_pulse(Transition::t01, 2.0 * half_angle(n), g.splitter_duration, g.sampling_rate);
    const std::optional<DriveHamiltonianSpec> gap =
        g.gap > 0.0 ? std::optional(idle_drive(g.gap, dt)) : std::nullopt;

    DensityMatrix rho = initial_density(spec);
    visit(rho);
    rho = propagate_lindblad(rho, splitter, rates);
    visit(rho);
    for (int j = 0; j < n; ++j) {
        const double theta = spec.thetas[j];
        if (gap) rho = propagate_lindblad(rho, *gap, rates);
        const DriveHamiltonianSpec b =
            rotation_pulse(Transition::t12, theta, bpulse_duration(g, theta), g.sampling_rate);
        rho = propagate_lindblad(rho, b, rates);
        if (spec.model == ModelKind::lindblad_depol) rho = apply_depolarizing(rho, epsilon_for_theta(std::abs(theta)));
        visit(rho);
        if (gap) rho = propagate_lindblad(rho, *gap, rates);
        rho = propagate_lindblad(rho, splitter, rates);
        visit(rho);
    }
    return rho;
}

}  // namespace

PulseGeometry PulseGeometry::for_n(int n) {
    PulseGeometry g;
    if (n > 2) g.bpulse_duration = 112e-9;
    return g;
}

void ProtocolSpec::validate() const {
    check_thetas(n_segments, thetas);
    if (pulse_geometry) {
        const auto& g = *pulse_geometry;
        if (!(g.splitter_duration > 0.0) || !(g.bpulse_duration > 0.0) || !(g.sampling_rate > 0.0) ||
            g.gap < 0.0) {
            throw DomainError("pulse geometry needs positive durations and sampling rate");
        }
    }
}

PulseGeometry ProtocolSpec::geometry() const { return pulse_geometry ? *pulse_geometry : PulseGeometry::for_n(n_segments); }

ProtocolSpec ProtocolSpec::identical(int n, double theta) {
    if (n < 1) throw DomainError("protocol needs N >= 1");
    ProtocolSpec s;
    s.n_segments = n;
    s.thetas.assign(static_cast<std::size_t>(n), theta);
    return s;
}

Amplitudes ExpansionCoefficients::evaluate(double theta) const {
    Amplitudes a{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double x = static_cast<double>(k) * theta / 2.0;
        a.alpha += c[k] * std::cos(x);
        a.beta += cp[k] * std::cos(x);
        a.gamma += cpp[k] * std::sin(x);
    }
    return a;
}

Operator3 coherent_sequence_unitary(int n, const std::vector<double>& thetas) {
    check_thetas(n, thetas);
    const Operator3 s = beam_splitter(n);
    Operator3 u = s;
    for (int j = 0; j < n; ++j) u = s * b_pulse(thetas[j]) * u;
    return u;
}

OutcomeProbabilities run_coherent_ideal(const ProtocolSpec& spec) {
    spec.validate();
    const Operator3 u = coherent_sequence_unitary(spec.n_segments, spec.thetas);
    if (const auto* s = std::get_if<PureState>(&spec.initial)) {
        const PureState out = apply_unitary(u, *s);
        return {out.probability(0), out.probability(1), out.probability(2)};
    }
    const DensityMatrix out = apply_unitary(u, std::get<DensityMatrix>(spec.initial));
    return {out.population(0), out.population(1), out.population(2)};
}

OutcomeProbabilities run_coherent_dissipative(const ProtocolSpec& spec) {
    const DensityMatrix rho = run_dissipative(spec, [](const DensityMatrix&) {});
    return {rho.population(0), rho.population(1), rho.population(2)};
}

OutcomeProbabilities run_protocol(const ProtocolSpec& spec) {
    return spec.model == ModelKind::ideal ? run_coherent_ideal(spec) : run_coherent_dissipative(spec);
}

std::vector<PureState> coherent_checkpoints(int n, const std::vector<double>& thetas, const PureState& initial) {
    check_thetas(n, thetas);
    const Operator3 s = beam_splitter(n);
    std::vector<PureState> out{initial};
    out.reserve(static_cast<std::size_t>(2 * n + 2));
    out.push_back(apply_unitary(s, out.back()));
    for (int j = 0; j < n; ++j) {
        out.push_back(apply_unitary(b_pulse(thetas[j]), out.back()));
        out.push_back(apply_unitary(s, out.back()));
    }
    return out;
}

std::vector<DensityMatrix> dissipative_checkpoints(const ProtocolSpec& spec) {
    std::vector<DensityMatrix> out;
    run_dissipative(spec, [&out](const DensityMatrix& rho) { out.push_back(rho); });
    return out;
}

std::vector<double> coherent_segment_absorption(int n, const std::vector<double>& thetas) {
    const auto states = coherent_checkpoints(n, thetas);
    std::vector<double> p2;
    for (int j = 0; j < n; ++j) p2.push_back(states[static_cast<std::size_t>(2 * j + 2)].probability(2));
    return p2;
}

std::vector<Amplitudes> amplitude_recursion(int n, const std::vector<double>& thetas) {
    check_thetas(n, thetas);
    const double c = std::cos(half_angle(n));
    const double s = std::sin(half_angle(n));
    std::vector<Amplitudes> out{{c, s, 0.0}};
    for (int j = 0; j < n; ++j) {
        const auto [a, b, g] = out.back();
        const double ct = std::cos(thetas[j] / 2.0);
        const double st = std::sin(thetas[j] / 2.0);
        out.push_back({c * a - s * ct * b + s * st * g, s * a + c * ct * b - c * st * g, st * b + ct * g});
    }
    return out;
}

ExpansionCoefficients expansion_coefficients(int n) {
    if (n < 1 || n > 25) throw DomainError("expansion coefficients are tabulated for 1 <= N <= 25");
    const double c = std::cos(half_angle(n));
    const double s = std::sin(half_angle(n));
    const std::size_t size = static_cast<std::size_t>(n) + 2;
    std::vector<double> a(size, 0.0), b(size, 0.0), g(size, 0.0);
    a[0] = c;
    b[0] = s;
    for (int j = 0; j < n; ++j) {
        // Products of cos(theta/2), sin(theta/2) with the k-th harmonic, folded
        // back onto non-negative k.
        std::vector<double> cos_b(size + 1, 0.0), sin_g(size + 1, 0.0), sin_b(size + 1, 0.0), cos_g(size + 1, 0.0);
        for (std::size_t k = 0; k < size; ++k) {
            cos_b[k + 1] += 0.5 * b[k];
            cos_b[k == 0 ? 1 : k - 1] += 0.5 * b[k];
            sin_g[k + 1] -= 0.5 * g[k];
            sin_g[k == 0 ? 1 : k - 1] += 0.5 * g[k];
            sin_b[k + 1] += 0.5 * b[k];
            if (k >= 1) sin_b[k - 1] -= 0.5 * b[k];
            else sin_b[1] += 0.5 * b[k];
            cos_g[k + 1] += 0.5 * g[k];
            if (k >= 1) cos_g[k - 1] += 0.5 * g[k];
            else cos_g[1] -= 0.5 * g[k];
        }
        std::vector<double> na(size), nb(size), ng(size);
        for (std::size_t k = 0; k < size; ++k) {
            na[k] = c * a[k] - s * cos_b[k] + s * sin_g[k];
            nb[k] = s * a[k] + c * cos_b[k] - c * sin_g[k];
            ng[k] = k == 0 ? 0.0 : sin_b[k] + cos_g[k];
        }
        a = std::move(na);
        b = std::move(nb);
        g = std::move(ng);
    }
    a.resize(size - 1);
    b.resize(size - 1);
    g.resize(size - 1);
    return {a, b, g};
}

ProjectiveOutcome run_projective(int n, const std::vector<double>& thetas) {
    check_thetas(n, thetas);
    const Operator3 s = beam_splitter(n);
    ProjectiveOutcome out;
    double survive = 1.0;
    Vector3c psi = s * PureState::basis(0).amplitudes();
    for (int j = 0; j < n; ++j) {
        psi = b_pulse(thetas[j]) * psi;
        const double absorbed = std::norm(psi(2));
        out.per_segment_abs.push_back(survive * absorbed);
        out.p_abs += survive * absorbed;
        if (absorbed >= 1.0 - 1e-15) {
            // Nothing survives; the remaining branch is empty.
            survive = 0.0;
            psi = PureState::basis(0).amplitudes();
        } else {
            survive *= 1.0 - absorbed;
            psi(2) = 0.0;
            psi /= psi.norm();
        }
        psi = s * psi;
    }
    out.p_det = survive * std::norm(psi(0));
    out.p_inconclusive = survive * std::norm(psi(1));
    return out;
}

ProjectiveClosedForm projective_closed_form(int n) {
    if (n < 1) throw DomainError("protocol needs N >= 1");
    const double c2 = std::pow(std::cos(half_angle(n)), 2);
    const double s2 = 1.0 - c2;
    double series = 0.0;
    for (int k = 0; k < n; ++k) series += std::pow(c2, k);
    return {std::pow(c2, n + 1), s2 * series};
}

double large_n_residual(int n) {
    const Operator3 u = coherent_sequence_unitary(n, std::vector<double>(static_cast<std::size_t>(n), kPi));
    Operator3 m = -kI * subspace_pauli(Axis::y, 1, 2);
    Operator3 power = Operator3::Identity();
    for (int k = 0; k < n; ++k) power = m * power;
    // The comparator acts as |0><0| on level 0 and as the power on {1, 2}.
    Operator3 approx = Operator3::Zero();
    approx(0, 0) = 1.0;
    approx.block<2, 2>(1, 1) = power.block<2, 2>(1, 1);
    return operator_distance_2norm(u, approx);
}

SegmentAbsorption segment_absorption_compare(double x, double y, int n) {
    if (n < 1) throw DomainError("protocol needs N >= 1");
    if (x < 0.0 || y < 0.0 || x * x + y * y > 1.0 + 1e-12) {
        throw DomainError("segment amplitudes need x, y >= 0 and x^2 + y^2 <= 1");
    }
    const double phi = half_angle(n);
    const double coh = std::sqrt(std::max(0.0, 1.0 - x * x - y * y)) * std::sin(phi) + x * std::cos(phi);
    const double proj = std::sqrt(std::max(0.0, 1.0 - x * x)) * std::sin(phi) + x * std::cos(phi);
    return {coh * coh, proj * proj};
}

double sequence_duration(const ProtocolSpec& spec) {
    spec.validate();
    const PulseGeometry g = spec.geometry();
    double total = (spec.n_segments + 1) * g.splitter_duration + 2.0 * spec.n_segments * g.gap;
    for (double theta : spec.thetas) total += bpulse_duration(g, theta);
    return total;
}

}  // namespace ifd
