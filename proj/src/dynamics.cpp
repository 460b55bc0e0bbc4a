#include "ifd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "ifd/errors.hpp"

namespace ifd {

namespace {

constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool active(const SampledWaveform& w) { return w.samples.size() >= 2; }

constexpr double kMaxAnglePerStep = 0.025;
constexpr int kMaxSubsteps = 4096;

long step_count(const DriveHamiltonianSpec& spec) {
    const double span = spec.end_time() - spec.start_time();
    if (span <= 0.0) return 0;
    return static_cast<long>(std::llround(span / spec.step()));
}

// RK4 steps per sample interval, enough to keep the largest rotation angle
// per step below kMaxAnglePerStep.
int substeps(const DriveHamiltonianSpec& spec) {
    double peak = std::abs(spec.delta01) + std::abs(spec.delta12);
    double drive = 0.0;
    for (const auto* w : {&spec.wave01, &spec.wave12}) {
        for (double v : w->samples) drive = std::max(drive, std::abs(v));
    }
    peak += drive;
    const double n = std::ceil(peak * spec.step() / kMaxAnglePerStep);
    return static_cast<int>(std::clamp(n, 1.0, static_cast<double>(kMaxSubsteps)));
}

Operator3 commutator_term(const Operator3& h, const Operator3& rho) {
    return -kI * (h * rho - rho * h);
}

// D[L] rho for L = |l><k|.
Operator3 jump_dissipator(const Operator3& rho, int k, int l) {
    Operator3 d = Operator3::Zero();
    d(l, l) += rho(k, k);
    for (int j = 0; j < 3; ++j) {
        d(k, j) -= 0.5 * rho(k, j);
        d(j, k) -= 0.5 * rho(j, k);
    }
    return d;
}

// D[|k><k|] rho
Operator3 projector_dissipator(const Operator3& rho, int k) {
    Operator3 d = Operator3::Zero();
    d(k, k) += rho(k, k);
    for (int j = 0; j < 3; ++j) {
        d(k, j) -= 0.5 * rho(k, j);
        d(j, k) -= 0.5 * rho(j, k);
    }
    return d;
}

void check_alignment(const DriveHamiltonianSpec& s) {
    for (const auto* w : {&s.wave01, &s.wave12}) {
        if (active(*w) && !(w->dt > 0.0)) throw DomainError("waveform dt must be positive");
    }
    if (active(s.wave01) && active(s.wave12)) {
        if (std::abs(s.wave01.dt - s.wave12.dt) > 1e-9 * s.wave01.dt ||
            std::abs(s.wave01.t0 - s.wave12.t0) > 1e-6 * s.wave01.dt) {
            throw DomainError("0-1 and 1-2 waveforms are not aligned");
        }
    }
}

}  // namespace

void DriveHamiltonianSpec::validate() const {
    for (const auto* w : {&wave01, &wave12}) {
        for (double v : w->samples) {
            if (!std::isfinite(v)) throw DomainError("waveform samples must be finite");
        }
    }
    check_alignment(*this);
}

double DriveHamiltonianSpec::start_time() const {
    if (active(wave01) && active(wave12)) return std::min(wave01.t0, wave12.t0);
    if (active(wave01)) return wave01.t0;
    if (active(wave12)) return wave12.t0;
    return wave01.t0;
}

double DriveHamiltonianSpec::end_time() const {
    if (active(wave01) && active(wave12)) return std::max(wave01.end_time(), wave12.end_time());
    if (active(wave01)) return wave01.end_time();
    if (active(wave12)) return wave12.end_time();
    return wave01.end_time();
}

double DriveHamiltonianSpec::step() const { return active(wave12) && !active(wave01) ? wave12.dt : wave01.dt; }

DriveHamiltonianSpec drive_from(const SampledWaveform& w) {
    DriveHamiltonianSpec spec;
    if (w.transition == Transition::t01) {
        spec.wave01 = w;
        spec.phi01 = w.phase;
    } else {
        spec.wave12 = w;
        spec.phi12 = w.phase;
    }
    return spec;
}

DriveHamiltonianSpec idle_drive(double duration, double dt) {
    if (!(dt > 0.0) || duration < 0.0) throw DomainError("idle interval needs dt > 0, duration >= 0");
    SampledWaveform w;
    w.dt = dt;
    w.samples.assign(static_cast<std::size_t>(std::llround(duration / dt)) + 1, 0.0);
    return drive_from(w);
}

void DecoherenceModel::validate() const {
    if (!(omega01 > 0.0) || !(omega12 > 0.0)) throw DomainError("transition frequencies must be positive");
    for (double r : {gamma10, gamma21, gphi10, gphi21, gphi02}) {
        if (!(r >= 0.0)) throw DomainError("decoherence rates must be non-negative");
    }
    if (!(temperature >= 0.0)) throw DomainError("temperature must be non-negative");
}

DecoherenceModel DecoherenceModel::sample1() {
    return {kTwoPi * 5.01e9, kTwoPi * 4.65e9, 0.72e6, 1.55e6, 0.4e6, 0.6e6, 1.0e6, 0.050};
}

DecoherenceModel DecoherenceModel::sample2() {
    return {kTwoPi * 7.20e9, kTwoPi * 6.85e9, 0.29e6, 1.15e6, 0.18e6, 1.82e6, 1.70e6, 0.050};
}

DecoherenceModel DecoherenceModel::closed() {
    return {kTwoPi * 5.01e9, kTwoPi * 4.65e9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
}

double bose_occupation(double omega, double temperature) {
    if (temperature < 0.0) throw DomainError("temperature must be non-negative");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

ThermalRates thermal_rates(const DecoherenceModel& m) {
    m.validate();
    const double n01 = bose_occupation(m.omega01, m.temperature);
    const double n12 = bose_occupation(m.omega12, m.temperature);
    ThermalRates r;
    r.up01 = n01 * m.gamma10;
    r.down10 = (n01 + 1.0) * m.gamma10;
    r.up12 = n12 * m.gamma21;
    r.down21 = (n12 + 1.0) * m.gamma21;
    r.gamma_od_01 = 0.5 * (r.down10 + r.up01) + m.gphi10;
    r.gamma_od_12 = 0.5 * (r.up12 + r.down21) + m.gphi21;
    r.gamma_od_02 = 0.5 * (r.down10 + r.down21 + r.up01 + r.up12) + m.gphi02;
    return r;
}

Operator3 hamiltonian_at(const DriveHamiltonianSpec& spec, double t) {
    check_alignment(spec);
    const double o01 = spec.wave01.value_at(t);
    const double o12 = spec.wave12.value_at(t);
    const Complex c01 = 0.5 * o01 * std::polar(1.0, spec.phi01);
    const Complex c12 = 0.5 * o12 * std::polar(1.0, spec.phi12);
    Operator3 h = Operator3::Zero();
    h(0, 1) = c01;
    h(1, 0) = std::conj(c01);
    h(1, 2) = c12;
    h(2, 1) = std::conj(c12);
    h(1, 1) = spec.delta01;
    h(2, 2) = spec.delta01 + spec.delta12;
    return h;
}

Operator3 propagate_schrodinger(const DriveHamiltonianSpec& spec) {
    spec.validate();
    const int sub = substeps(spec);
    const long steps = step_count(spec) * sub;
    const double dt = spec.step() / sub;
    double t = spec.start_time();
    // All three basis columns evolve together: dU/dt = -i H U.
    Operator3 u = Operator3::Identity();
    for (long i = 0; i < steps; ++i) {
        const Operator3 h0 = -kI * hamiltonian_at(spec, t);
        const Operator3 hm = -kI * hamiltonian_at(spec, t + 0.5 * dt);
        const Operator3 h1 = -kI * hamiltonian_at(spec, t + dt);
        const Operator3 k1 = h0 * u;
        const Operator3 k2 = hm * (u + 0.5 * dt * k1);
        const Operator3 k3 = hm * (u + 0.5 * dt * k2);
        const Operator3 k4 = h1 * (u + dt * k3);
        u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = spec.start_time() + dt * static_cast<double>(i + 1);
    }
    if (!(unitarity_defect(u) <= 1e-6)) throw NumericError("Schrodinger propagation lost unitarity; step too coarse");
    return u;
}

Operator3 lindblad_pairwise_rhs(const Operator3& rho, const Operator3& h, const ThermalRates& r) {
    Operator3 d = commutator_term(h, rho);
    const double p0 = rho(0, 0).real();
    const double p1 = rho(1, 1).real();
    const double p2 = rho(2, 2).real();
    d(0, 0) += r.down10 * p1 - r.up01 * p0;
    d(1, 1) += r.down21 * p2 - r.down10 * p1 - r.up12 * p1 + r.up01 * p0;
    d(2, 2) += r.up12 * p1 - r.down21 * p2;
    d(0, 1) -= r.gamma_od_01 * rho(0, 1);
    d(1, 0) -= r.gamma_od_01 * rho(1, 0);
    d(1, 2) -= r.gamma_od_12 * rho(1, 2);
    d(2, 1) -= r.gamma_od_12 * rho(2, 1);
    d(0, 2) -= r.gamma_od_02 * rho(0, 2);
    d(2, 0) -= r.gamma_od_02 * rho(2, 0);
    return d;
}

DensityMatrix propagate_lindblad(const DensityMatrix& rho0, const DriveHamiltonianSpec& spec,
                                 const DecoherenceModel& m) {
    return propagate_lindblad(rho0, spec, thermal_rates(m));
}

DensityMatrix propagate_lindblad(const DensityMatrix& rho0, const DriveHamiltonianSpec& spec,
                                 const ThermalRates& rates) {
    spec.validate();
    const int sub = substeps(spec);
    const long steps = step_count(spec) * sub;
    const double dt = spec.step() / sub;
    const double t_start = spec.start_time();
    Operator3 rho = rho0.matrix();
    Operator3 h1 = hamiltonian_at(spec, t_start);
    for (long i = 0; i < steps; ++i) {
        const double t = t_start + dt * static_cast<double>(i);
        const Operator3 h0 = h1;
        const Operator3 hm = hamiltonian_at(spec, t + 0.5 * dt);
        h1 = hamiltonian_at(spec, t + dt);
        const Operator3 k1 = lindblad_pairwise_rhs(rho, h0, rates);
        const Operator3 k2 = lindblad_pairwise_rhs(rho + 0.5 * dt * k1, hm, rates);
        const Operator3 k3 = lindblad_pairwise_rhs(rho + 0.5 * dt * k2, hm, rates);
        const Operator3 k4 = lindblad_pairwise_rhs(rho + dt * k3, h1, rates);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double drift = std::abs(rho.trace().real() - rho0.trace());
    if (!(drift <= 1e-6)) throw NumericError("Lindblad propagation trace drift exceeds 1e-6; step too coarse");
    return DensityMatrix::from_propagation(rho);
}

LevelDephasing level_dephasing_rates(const DecoherenceModel& m) {
    const ThermalRates r = thermal_rates(m);
    // Jump operators |l><k| damp every coherence touching level k by half
    // the rate out of k.
    const double out0 = r.up01;
    const double out1 = r.down10 + r.up12;
    const double out2 = r.down21;
    // Remaining decay each coherence needs from the projector dissipators,
    // which damp rho_kl at (g_k + g_l) / 4.
    const double need01 = r.gamma_od_01 - 0.5 * (out0 + out1);
    const double need12 = r.gamma_od_12 - 0.5 * (out1 + out2);
    const double need02 = r.gamma_od_02 - 0.5 * (out0 + out2);
    const LevelDephasing g{2.0 * (need01 + need02 - need12), 2.0 * (need01 + need12 - need02),
                           2.0 * (need02 + need12 - need01)};
    const double scale = std::max({std::abs(need01), std::abs(need12), std::abs(need02), 1.0});
    for (double x : {g.level0, g.level1, g.level2}) {
        if (x < -1e-12 * scale) {
            throw DomainError("transition rates admit no non-negative per-level dephasing decomposition");
        }
    }
    return g;
}

Operator3 lindblad_general_rhs(const Operator3& rho, const Operator3& h, const DecoherenceModel& m) {
    const ThermalRates r = thermal_rates(m);
    const LevelDephasing g = level_dephasing_rates(m);
    Operator3 d = commutator_term(h, rho);
    d += r.down10 * jump_dissipator(rho, 1, 0);
    d += r.up01 * jump_dissipator(rho, 0, 1);
    d += r.down21 * jump_dissipator(rho, 2, 1);
    d += r.up12 * jump_dissipator(rho, 1, 2);
    d += 0.5 * g.level0 * projector_dissipator(rho, 0);
    d += 0.5 * g.level1 * projector_dissipator(rho, 1);
    d += 0.5 * g.level2 * projector_dissipator(rho, 2);
    return d;
}

DensityMatrix thermal_state(const DecoherenceModel& m) {
    if (m.temperature < 0.0) throw DomainError("temperature must be non-negative");
    Operator3 rho = Operator3::Zero();
    if (m.temperature == 0.0) {
        rho(0, 0) = 1.0;
        return DensityMatrix(rho);
    }
    const double beta = kHbar / (kBoltzmann * m.temperature);
    const double w1 = std::exp(-beta * m.omega01);
    const double w2 = std::exp(-beta * (m.omega01 + m.omega12));
    const double z = 1.0 + w1 + w2;
    rho(0, 0) = 1.0 / z;
    rho(1, 1) = w1 / z;
    rho(2, 2) = w2 / z;
    return DensityMatrix(rho);
}

std::array<Operator3, 10> depolarizing_kraus(double epsilon) {
    if (!(epsilon >= 0.0) || epsilon > 1.0) throw DomainError("depolarizing probability must be in [0, 1]");
    const double a = std::sqrt(epsilon / 6.0);
    const double s = std::sqrt(epsilon);
    const Operator3 l3 = gellmann(3);
    const Operator3 l8 = gellmann(8);
    return {a * gellmann(1),
            a * gellmann(2),
            a * gellmann(4),
            a * gellmann(5),
            a * gellmann(6),
            a * gellmann(7),
            (s / 3.0) * l3,
            (s / 6.0) * (std::numbers::sqrt3 * l8 - l3),
            (s / 6.0) * (std::numbers::sqrt3 * l8 + l3),
            std::sqrt(1.0 - 8.0 * epsilon / 9.0) * Operator3::Identity()};
}

DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Operator3> kraus) {
    Operator3 out = Operator3::Zero();
    for (const auto& k : kraus) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix::from_propagation(out);
}

DensityMatrix apply_depolarizing(const DensityMatrix& rho, double epsilon) {
    if (!(epsilon >= 0.0) || epsilon > 1.0) throw DomainError("depolarizing probability must be in [0, 1]");
    return DensityMatrix::from_propagation(epsilon / 3.0 * Operator3::Identity() + (1.0 - epsilon) * rho.matrix());
}

double epsilon_for_theta(double theta) {
    if (!(theta >= 0.0)) throw DomainError("pulse strength must be non-negative");
    return std::min(1.8e-3 * theta / std::numbers::pi, 1.0);
}

double operator_distance_2norm(const Operator3& u, const Operator3& v) {
    Eigen::JacobiSVD<Operator3> svd(u - v);
    return svd.singularValues()(0);
}

}  // namespace ifd
