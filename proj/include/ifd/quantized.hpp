#pragma once

// Quantized B-pulse: the 1-2 transition exchanges quanta with one or more
// field modes through H = (i g / 2)(b^dagger |1><2| - b |2><1|).

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ifd/su3.hpp"

namespace ifd {

struct FieldCoupling {
    double g = 0.0;    // rad/s
    double t_b = 0.0;  // s

    void validate() const;
};

// Amplitudes over (mode occupations..., qutrit level), qutrit index fastest.
class CompositeState {
public:
    // Fock modes of the given dimensions (occupations 0..dim-1). A two-level
    // mode is a genuine qubit rather than a truncated oscillator: its top
    // level is not checked for leakage and it uses sigma^+/- ladders.
    CompositeState(std::vector<int> mode_dims, std::vector<bool> two_level = {});

    static CompositeState product(const std::vector<int>& mode_dims, const std::vector<int>& occupations,
                                  const PureState& qutrit);

    const std::vector<int>& mode_dims() const { return dims_; }
    bool is_two_level(int mode) const { return two_level_[static_cast<std::size_t>(mode)]; }
    std::size_t size() const { return amps_.size(); }

    std::size_t index(const std::vector<int>& occupations, int level) const;
    std::vector<int> occupations(std::size_t index) const;
    int level(std::size_t index) const { return static_cast<int>(index % 3); }

    Complex amplitude(const std::vector<int>& occupations, int level) const;
    Complex& operator[](std::size_t i) { return amps_[i]; }
    Complex operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<Complex>& amplitudes() const { return amps_; }

    double norm() const;
    // Largest |amplitude| on the top level of any truncated mode.
    double truncation_leakage() const;
    // Qutrit populations traced over the field.
    std::array<double, 3> qutrit_marginals() const;
    // Total field quanta plus 1 for qutrit level 2, per basis index.
    int excitations(std::size_t index) const;

private:
    std::vector<int> dims_;
    std::vector<bool> two_level_;
    std::vector<Complex> amps_;
};

// Single-mode interaction Hamiltonian on occupations 0..n_max times the qutrit.
Eigen::MatrixXcd jc_hamiltonian(double g, int n_max);

// g sqrt(n) t_B
double theta_n(double g, int n, double t_b);

// Beam splitter S_N on the qutrit, identity on the field.
void apply_splitter(CompositeState& s, int n_segments);

// exp(-i H t_B) for the coupling to one mode, as exact 2x2 rotations on each
// (|..n..> |1>, |..n-1..> |2>) pair. Throws NumericError if a truncated mode's
// top level becomes populated beyond 1e-8.
void apply_coupling(CompositeState& s, int mode, const FieldCoupling& c);

// Flips the sign of every level-2 amplitude. Excitations are conserved, so
// this equals the field-parity factor (-1)^(n - n_initial) and maps the
// evolution above onto the semiclassical B(theta) sign convention.
CompositeState field_parity_gauge(const CompositeState& s);

// |n> (x) |0> through S_N, then per segment the coupling and S_N.
// `couplings` has one entry per segment.
CompositeState run_single_mode(int n_segments, int n_photons, const std::vector<FieldCoupling>& couplings,
                               int n_max);
CompositeState run_single_mode(int n_segments, int n_photons, const FieldCoupling& coupling, int n_max);

// |m, n> (x) |0>, N = 2: S_2, couple the n-photon mode (index 1) with
// (g1, tb1), S_2, couple the m-photon mode (index 0) with (g2, tb2), S_2.
CompositeState run_two_mode(int m, int n, double g1, double g2, double tb1, double tb2, int n_max);

// Two-level probe (alpha |0q> + beta |1q>) coupled to the 1-2 transition with
// rotation theta per segment; the qutrit starts in `target_initial` (0 or 1).
CompositeState run_qubit_probe(int n_segments, Complex alpha, Complex beta, int target_initial,
                               double theta = 3.141592653589793);

}  // namespace ifd
