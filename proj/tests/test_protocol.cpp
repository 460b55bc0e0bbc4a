#include <cmath>
#include <numbers>

#include <doctest.h>

#include "helpers.hpp"
#include "ifd/errors.hpp"
#include "ifd/protocol.hpp"

using namespace ifd;
using ifd::test::check_matrix_near;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> all(int n, double theta) { return std::vector<double>(static_cast<std::size_t>(n), theta); }

OutcomeProbabilities ideal(int n, double theta) { return run_coherent_ideal(ProtocolSpec::identical(n, theta)); }
}  // namespace

TEST_CASE("coherent_sequence_unitary") {
    check_matrix_near(coherent_sequence_unitary(1, {kPi}), beam_splitter(1) * b_pulse(kPi) * beam_splitter(1), 1e-15);

    Operator3 absent = -kI * subspace_pauli(Axis::y, 0, 1);
    absent(2, 2) = 1.0;
    for (int n : {1, 2, 7, 25}) check_matrix_near(coherent_sequence_unitary(n, all(n, 0.0)), absent, 1e-10);

    // N = 3, all pi, on |0>.
    const double c = std::cos(kPi / 8);
    const double s = std::sin(kPi / 8);
    const PureState expected(c * (c * c * c + 2 * s * s), s * (c * c * c + s * s - c * c), s * c * (c - 1));
    const PureState out = apply_unitary(coherent_sequence_unitary(3, all(3, kPi)), PureState::basis(0));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(out[k] - expected[k]) <= 1e-12);

    // Pulses apply in order: theta_1 acts first.
    const Operator3 s2 = beam_splitter(2);
    check_matrix_near(coherent_sequence_unitary(2, {0.4, 2.0}), s2 * b_pulse(2.0) * s2 * b_pulse(0.4) * s2, 1e-14);

    CHECK_THROWS_AS(coherent_sequence_unitary(2, {kPi}), DomainError);
    CHECK_THROWS_AS(coherent_sequence_unitary(0, {}), DomainError);
}

TEST_CASE("run_coherent_ideal") {
    const OutcomeProbabilities n1 = ideal(1, kPi);
    CHECK(n1.p0 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(n1.p1 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(n1.p2 == doctest::Approx(0.50).epsilon(1e-12));

    const OutcomeProbabilities n2 = ideal(2, kPi);
    CHECK(std::abs(n2.p0 - 0.8091) <= 5e-4);
    CHECK(std::abs(n2.p1 - 0.0034) <= 5e-4);
    CHECK(std::abs(n2.p2 - 0.1875) <= 5e-4);
    CHECK(n2.p0 == doctest::Approx((31 + 12 * std::sqrt(3.0)) / 64).epsilon(1e-12));

    const OutcomeProbabilities n1_2pi = ideal(1, 2 * kPi);
    CHECK(n1_2pi.p0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n1_2pi.p1 <= 1e-20);
    CHECK(n1_2pi.p2 <= 1e-20);

    for (int n : {1, 3, 10, 25}) {
        const OutcomeProbabilities z = ideal(n, 0.0);
        CHECK(z.p0 <= 1e-20);
        CHECK(z.p1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(z.p2 <= 1e-20);
    }

    ProtocolSpec mixed = ProtocolSpec::identical(2, kPi);
    mixed.initial = DensityMatrix(PureState::basis(0));
    CHECK(run_coherent_ideal(mixed).p0 == doctest::Approx(n2.p0).epsilon(1e-12));

    ProtocolSpec bad = ProtocolSpec::identical(3, kPi);
    bad.thetas.pop_back();
    CHECK_THROWS_AS(run_coherent_ideal(bad), DomainError);
}

TEST_CASE("probability conservation and 4 pi periodicity") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(0.0, 4 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 10;
        ProtocolSpec spec = ProtocolSpec::identical(n, 0.0);
        for (auto& t : spec.thetas) t = angle(rng);
        const OutcomeProbabilities p = run_coherent_ideal(spec);
        CHECK(std::abs(p.p0 + p.p1 + p.p2 - 1.0) <= 1e-9);
        ProtocolSpec shifted = spec;
        shifted.thetas[static_cast<std::size_t>(trial) % shifted.thetas.size()] += 4 * kPi;
        const OutcomeProbabilities q = run_coherent_ideal(shifted);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(p[k] - q[k]) <= 1e-12);
    }
}

TEST_CASE("amplitude_recursion") {
    const auto n1 = amplitude_recursion(1, {kPi});
    CHECK(n1.back().alpha == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(n1.back().alpha * n1.back().alpha == doctest::Approx(0.25).epsilon(1e-14));

    const auto n2 = amplitude_recursion(2, {kPi, kPi});
    CHECK(n2.back().alpha == doctest::Approx((2 + 3 * std::sqrt(3.0)) / 8).epsilon(1e-14));

    for (const auto& a : amplitude_recursion(6, all(6, 0.0))) CHECK(a.gamma == 0.0);

    CHECK(amplitude_recursion(4, all(4, 1.0)).size() == 5);
    CHECK_THROWS_AS(amplitude_recursion(3, {1.0}), DomainError);

    // Matches the matrix product on random instances.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> angle(0.0, 4 * kPi);
    std::uniform_int_distribution<int> size(1, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = size(rng);
        std::vector<double> thetas(static_cast<std::size_t>(n));
        for (auto& t : thetas) t = angle(rng);
        const Amplitudes a = amplitude_recursion(n, thetas).back();
        const PureState out = apply_unitary(coherent_sequence_unitary(n, thetas), PureState::basis(0));
        CHECK(std::abs(out[0] - a.alpha) <= 1e-10);
        CHECK(std::abs(out[1] - a.beta) <= 1e-10);
        CHECK(std::abs(out[2] - a.gamma) <= 1e-10);
    }
}

TEST_CASE("expansion_coefficients") {
    const ExpansionCoefficients e1 = expansion_coefficients(1);
    REQUIRE(e1.c.size() == 2);
    CHECK(std::abs(e1.c[0] - 0.5) <= 0.005);
    CHECK(std::abs(e1.c[1] + 0.5) <= 0.005);
    CHECK(std::abs(e1.cpp[1] - 0.71) <= 0.005);
    CHECK(e1.cpp[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));

    const ExpansionCoefficients e4 = expansion_coefficients(4);
    REQUIRE(e4.c.size() == 5);
    CHECK(std::abs(e4.c[4] + 0.089) <= 0.005);

    for (int n = 1; n <= 10; ++n) {
        const ExpansionCoefficients e = expansion_coefficients(n);
        CHECK(e.cpp[0] == 0.0);
        for (int i = 0; i <= 200; ++i) {
            const double theta = 4 * kPi * i / 200.0;
            const Amplitudes a = e.evaluate(theta);
            const Amplitudes r = amplitude_recursion(n, all(n, theta)).back();
            CHECK(std::abs(a.alpha - r.alpha) <= 1e-9);
            CHECK(std::abs(a.beta - r.beta) <= 1e-9);
            CHECK(std::abs(a.gamma - r.gamma) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(expansion_coefficients(0), DomainError);
    CHECK_THROWS_AS(expansion_coefficients(26), DomainError);
}

TEST_CASE("run_projective") {
    const ProjectiveOutcome n1 = run_projective(1, {kPi});
    CHECK(n1.p_det == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(n1.p_inconclusive == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(n1.p_abs == doctest::Approx(0.50).epsilon(1e-12));

    const ProjectiveOutcome n2 = run_projective(2, {kPi, kPi});
    CHECK(std::abs(n2.p_det - 0.4219) <= 5e-5);
    CHECK(std::abs(n2.p_inconclusive - 0.1406) <= 5e-5);
    CHECK(std::abs(n2.p_abs - 0.4375) <= 5e-5);

    for (int n : {1, 4, 25}) {
        const ProjectiveOutcome z = run_projective(n, all(n, 0.0));
        CHECK(z.p_det <= 1e-20);
        CHECK(z.p_inconclusive == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(z.p_abs <= 1e-20);
    }

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> angle(0.0, 4 * kPi);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 12;
        std::vector<double> thetas(static_cast<std::size_t>(n));
        for (auto& t : thetas) t = angle(rng);
        const ProjectiveOutcome p = run_projective(n, thetas);
        CHECK(std::abs(p.p_det + p.p_inconclusive + p.p_abs - 1.0) <= 1e-9);
        double sum = 0.0;
        for (double x : p.per_segment_abs) sum += x;
        CHECK(std::abs(sum - p.p_abs) <= 1e-9);
    }
}

TEST_CASE("projective_closed_form") {
    const ProjectiveClosedForm n2 = projective_closed_form(2);
    CHECK(n2.p_det == doctest::Approx(27.0 / 64).epsilon(1e-14));
    CHECK(n2.p_abs == doctest::Approx(7.0 / 16).epsilon(1e-14));
    CHECK(projective_closed_form(1000).p_det >= 0.997);
    for (int n = 1; n <= 25; ++n) {
        const ProjectiveClosedForm cf = projective_closed_form(n);
        const ProjectiveOutcome seq = run_projective(n, all(n, kPi));
        CHECK(std::abs(cf.p_det - seq.p_det) <= 1e-10);
        CHECK(std::abs(cf.p_abs - seq.p_abs) <= 1e-10);
    }
}

TEST_CASE("coherent advantage over the projective protocol") {
    for (int n = 2; n <= 25; ++n) {
        const OutcomeProbabilities coh = ideal(n, kPi);
        const ProjectiveOutcome proj = run_projective(n, all(n, kPi));
        CHECK(coh.p0 > proj.p_det);
        CHECK(coh.p2 < proj.p_abs);
    }
}

TEST_CASE("initial-state sensitivity") {
    // From |0> the success probability climbs towards 1 along each residue
    // class of N mod 4; consecutive N carry the period-4 structure of
    // (-i sigma^y_12)^N and are not ordered.
    for (int n = 5; n <= 25; ++n) CHECK(ideal(n, kPi).p0 >= ideal(n - 4, kPi).p0 - 1e-12);
    CHECK(ideal(25, kPi).p0 >= 0.99);
    // From |1> it alternates with the parity of N instead.
    std::vector<double> p0;
    for (int n = 1; n <= 25; ++n) {
        ProtocolSpec spec = ProtocolSpec::identical(n, kPi);
        spec.initial = PureState::basis(1);
        p0.push_back(run_coherent_ideal(spec).p0);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < p0.size(); ++i) monotone = monotone && p0[i] >= p0[i - 1];
    CHECK_FALSE(monotone);
    CHECK(p0.back() < 0.9);
}

TEST_CASE("large_n_residual") {
    CHECK(large_n_residual(25) < large_n_residual(5));
    Operator3 approx = Operator3::Zero();
    approx(0, 0) = 1.0;
    approx += -kI * subspace_pauli(Axis::y, 1, 2);
    CHECK(large_n_residual(1) ==
          doctest::Approx(operator_distance_2norm(beam_splitter(1) * b_pulse(kPi) * beam_splitter(1), approx)));
    const Operator3 m = -kI * subspace_pauli(Axis::y, 1, 2);
    check_matrix_near(m * m, -subspace_identity(1, 2), 0.0);
}

TEST_CASE("segment_absorption_compare") {
    for (double x : {0.0, 0.3, 0.9}) {
        const SegmentAbsorption s = segment_absorption_compare(x, 0.0, 3);
        CHECK(s.p2_coherent == doctest::Approx(s.p2_projective));
    }
    const SegmentAbsorption s = segment_absorption_compare(0.0, 0.5, 1);
    CHECK(s.p2_projective / s.p2_coherent == doctest::Approx(4.0 / 3.0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        const double y = u(rng) * std::sqrt(1 - x * x);
        const SegmentAbsorption r = segment_absorption_compare(x, y, 1 + i % 20);
        CHECK(r.p2_projective >= r.p2_coherent);
    }
    CHECK_THROWS_AS(segment_absorption_compare(0.9, 0.9, 2), DomainError);
    CHECK_THROWS_AS(segment_absorption_compare(-0.1, 0.0, 2), DomainError);
}

TEST_CASE("run_coherent_dissipative closed-system limit") {
    for (int n : {1, 2, 4}) {
        ProtocolSpec spec = ProtocolSpec::identical(n, kPi);
        spec.thetas[0] = 2.0;
        const OutcomeProbabilities ref = run_coherent_ideal(spec);
        spec.model = ModelKind::lindblad;
        spec.decoherence = DecoherenceModel::closed();
        const OutcomeProbabilities p = run_coherent_dissipative(spec);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(p[k] - ref[k]) <= 1e-4);
    }
}

TEST_CASE("run_coherent_dissipative sample-1 single segment") {
    ProtocolSpec spec = ProtocolSpec::identical(1, kPi);
    spec.model = ModelKind::lindblad;
    spec.decoherence = DecoherenceModel::sample1();
    spec.initial = thermal_state(*spec.decoherence);
    const OutcomeProbabilities p = run_coherent_dissipative(spec);
    CHECK(std::abs(p.p0 - 0.26) <= 0.02);
    CHECK(std::abs(p.p0 + p.p1 + p.p2 - 1.0) <= 1e-6);

    ProtocolSpec missing = ProtocolSpec::identical(1, kPi);
    missing.model = ModelKind::lindblad;
    CHECK_THROWS_AS(run_coherent_dissipative(missing), DomainError);
}

TEST_CASE("checkpoints and per-segment absorption") {
    const auto states = coherent_checkpoints(3, all(3, kPi));
    CHECK(states.size() == 8);
    const PureState final = apply_unitary(coherent_sequence_unitary(3, all(3, kPi)), PureState::basis(0));
    CHECK(overlap_modulus(states.back(), final) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(coherent_segment_absorption(1, {kPi})[0] == doctest::Approx(0.5));

    ProtocolSpec spec = ProtocolSpec::identical(2, kPi);
    spec.model = ModelKind::lindblad_depol;
    spec.decoherence = DecoherenceModel::sample1();
    CHECK(dissipative_checkpoints(spec).size() == 6);
}

TEST_CASE("sequence_duration") {
    // 26 splitters of 56 ns and 25 B-pulses of 112 ns.
    CHECK(sequence_duration(ProtocolSpec::identical(25, kPi)) == doctest::Approx(4256e-9));
    CHECK(sequence_duration(ProtocolSpec::identical(1, kPi)) == doctest::Approx(168e-9));
    CHECK(sequence_duration(ProtocolSpec::identical(1, 4 * kPi)) == doctest::Approx(173e-9));
}
