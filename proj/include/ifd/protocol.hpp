#pragma once

// Coherent interaction-free detection protocol and its projective
// (quantum Zeno) counterpart.
//
// A protocol of size N is S_N B(theta_N) S_N ... B(theta_1) S_N acting on the
// initial state; detectors D0, D1, D2 read the final populations.

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "ifd/dynamics.hpp"
#include "ifd/su3.hpp"

namespace ifd {

enum class ModelKind { ideal, lindblad, lindblad_depol };

// Hardware timing used by the dissipative path. Durations are full pulse
// lengths 2 tau_c with tau_c = 2 tau.
struct PulseGeometry {
    double splitter_duration = 56e-9;
    double bpulse_duration = 56e-9;
    double sampling_rate = 1e9;
    double gap = 0.0;  // idle time between consecutive pulses

    // 56 ns B-pulses for N <= 2, 112 ns beyond.
    static PulseGeometry for_n(int n);
};

struct ProtocolSpec {
    int n_segments = 1;
    std::vector<double> thetas;
    std::variant<PureState, DensityMatrix> initial = PureState::basis(0);
    ModelKind model = ModelKind::ideal;
    std::optional<DecoherenceModel> decoherence;
    std::optional<PulseGeometry> pulse_geometry;

    // Throws DomainError for N < 1 or a thetas/N length mismatch.
    void validate() const;
    PulseGeometry geometry() const;

    static ProtocolSpec identical(int n, double theta);
};

struct OutcomeProbabilities {
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    double operator[](int k) const { return k == 0 ? p0 : (k == 1 ? p1 : p2); }
};

struct ProjectiveOutcome {
    double p_det = 0.0;
    double p_inconclusive = 0.0;
    double p_abs = 0.0;
    std::vector<double> per_segment_abs;
};

struct Amplitudes {
    double alpha;
    double beta;
    double gamma;
};

struct ExpansionCoefficients {
    std::vector<double> c;    // alpha_N = sum c[k] cos(k theta / 2)
    std::vector<double> cp;   // beta_N  = sum cp[k] cos(k theta / 2)
    std::vector<double> cpp;  // gamma_N = sum cpp[k] sin(k theta / 2)

    Amplitudes evaluate(double theta) const;
};

Operator3 coherent_sequence_unitary(int n, const std::vector<double>& thetas);

OutcomeProbabilities run_coherent_ideal(const ProtocolSpec& spec);
OutcomeProbabilities run_coherent_dissipative(const ProtocolSpec& spec);
// Dispatches on spec.model.
OutcomeProbabilities run_protocol(const ProtocolSpec& spec);

// Ideal states after every applied unitary, starting with the initial state:
// 2N + 2 entries.
std::vector<PureState> coherent_checkpoints(int n, const std::vector<double>& thetas,
                                            const PureState& initial = PureState::basis(0));
// Dissipative density matrices at the same checkpoints as coherent_checkpoints.
std::vector<DensityMatrix> dissipative_checkpoints(const ProtocolSpec& spec);

// p2 read after each B-pulse of the ideal coherent protocol from |0>.
std::vector<double> coherent_segment_absorption(int n, const std::vector<double>& thetas);

// (alpha_j, beta_j, gamma_j) for j = 0..N, seeded by the first beam splitter.
std::vector<Amplitudes> amplitude_recursion(int n, const std::vector<double>& thetas);

// Fourier coefficients of the identical-theta amplitudes, indexed 0..N.
ExpansionCoefficients expansion_coefficients(int n);

ProjectiveOutcome run_projective(int n, const std::vector<double>& thetas);

struct ProjectiveClosedForm {
    double p_det;
    double p_abs;
};
ProjectiveClosedForm projective_closed_form(int n);

// || U_N(pi, ..., pi) - (|0><0| + (-i sigma^y_12)^N) ||_2
double large_n_residual(int n);

struct SegmentAbsorption {
    double p2_coherent;
    double p2_projective;
};
SegmentAbsorption segment_absorption_compare(double x, double y, int n);

// Total drive time of the dissipative pulse sequence.
double sequence_duration(const ProtocolSpec& spec);

}  // namespace ifd
