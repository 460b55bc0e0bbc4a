#pragma once

// Time-dependent drive Hamiltonian, Schrodinger and Lindblad propagation,
// thermal initial states and the depolarizing channel.
//
// Units: hbar = 1, so Hamiltonians are angular frequencies (rad/s) and
// times are seconds. Decay and dephasing rates are in 1/s.

#include <array>
#include <span>

#include "ifd/pulse.hpp"
#include "ifd/su3.hpp"

namespace ifd {

// Drives on the 0-1 and 1-2 transitions. An empty waveform is inactive.
// When both are active they must share dt and t0.
struct DriveHamiltonianSpec {
    SampledWaveform wave01;
    SampledWaveform wave12;
    double phi01 = 0.0;
    double phi12 = 0.0;
    double delta01 = 0.0;
    double delta12 = 0.0;

    // Throws DomainError for misaligned waveforms.
    void validate() const;
    double start_time() const;
    double end_time() const;
    double step() const;
};

// Builds a single-transition drive, taking phi from the waveform's phase.
DriveHamiltonianSpec drive_from(const SampledWaveform& w);

// A drive-free interval of the given duration on a grid of step dt.
DriveHamiltonianSpec idle_drive(double duration, double dt);

struct DecoherenceModel {
    double omega01 = 0.0;  // rad/s
    double omega12 = 0.0;  // rad/s
    double gamma10 = 0.0;  // zero-temperature decay 1 -> 0
    double gamma21 = 0.0;  // zero-temperature decay 2 -> 1
    double gphi10 = 0.0;   // transition dephasing rates
    double gphi21 = 0.0;
    double gphi02 = 0.0;
    double temperature = 0.0;  // kelvin

    void validate() const;

    // 5.01 / 4.65 GHz sample used for the N <= 2 experiments.
    static DecoherenceModel sample1();
    // 7.20 / 6.85 GHz sample used for N > 2.
    static DecoherenceModel sample2();
    static DecoherenceModel closed();
};

struct ThermalRates {
    double up01 = 0.0;    // 0 -> 1
    double down10 = 0.0;  // 1 -> 0
    double up12 = 0.0;    // 1 -> 2
    double down21 = 0.0;  // 2 -> 1
    double gamma_od_01 = 0.0;
    double gamma_od_12 = 0.0;
    double gamma_od_02 = 0.0;
};

// Bose occupation 1/(exp(hbar omega / kB T) - 1); zero at T = 0.
double bose_occupation(double omega, double temperature);

ThermalRates thermal_rates(const DecoherenceModel& m);

Operator3 hamiltonian_at(const DriveHamiltonianSpec& spec, double t);

// Both propagators take RK4 steps on the waveform's sample grid, splitting an
// interval into equal substeps when the drive would otherwise rotate the
// state by more than 0.025 rad in one step.

// U = sum_k |psi_k(T)><k| from RK4 propagation of each basis state.
// Throws NumericError if the result is not unitary within 1e-6.
Operator3 propagate_schrodinger(const DriveHamiltonianSpec& spec);

// Pairwise-form master equation:
// -i[H, rho] + population exchange - sum gamma_kl rho_kl |k><l|.
Operator3 lindblad_pairwise_rhs(const Operator3& rho, const Operator3& h, const ThermalRates& r);

// RK4 integration of the pairwise master equation across the drive's span.
// Throws NumericError on trace drift above 1e-6.
DensityMatrix propagate_lindblad(const DensityMatrix& rho0, const DriveHamiltonianSpec& spec,
                                 const DecoherenceModel& m);
DensityMatrix propagate_lindblad(const DensityMatrix& rho0, const DriveHamiltonianSpec& spec,
                                 const ThermalRates& rates);

// Per-level dephasing rates for the jump-operator form, chosen so that its
// coherence decay equals the pairwise gamma_kl.
struct LevelDephasing {
    double level0;
    double level1;
    double level2;
};

// Throws DomainError when any per-level rate would be negative.
LevelDephasing level_dephasing_rates(const DecoherenceModel& m);

// -i[H, rho] + sum Gamma_{k->l} D[|l><k|] rho + sum (Gphi_k / 2) D[|k><k|] rho.
Operator3 lindblad_general_rhs(const Operator3& rho, const Operator3& h, const DecoherenceModel& m);

// Boltzmann populations over E0 = 0, E1 = omega01, E2 = omega01 + omega12.
DensityMatrix thermal_state(const DecoherenceModel& m);

std::array<Operator3, 10> depolarizing_kraus(double epsilon);
DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Operator3> kraus);
DensityMatrix apply_depolarizing(const DensityMatrix& rho, double epsilon);

// 1.8e-3 * theta / pi, clamped to 1.
double epsilon_for_theta(double theta);

// Largest singular value of U - V.
double operator_distance_2norm(const Operator3& u, const Operator3& v);

}  // namespace ifd
