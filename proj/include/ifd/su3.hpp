#pragma once

// Operator algebra for a single qutrit.
//
// Level ordering is (|0>, |1>, |2>) everywhere: index 0 is the ground state
// and vectors are columns, so U * psi applies U to psi.

#include <complex>

#include <Eigen/Dense>

namespace ifd {

using Complex = std::complex<double>;
using Operator3 = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

inline constexpr Complex kI{0.0, 1.0};

enum class Axis { x, y, z };

// Normalized 3-component state vector.
class PureState {
public:
    // Normalizes `amplitudes`; throws DomainError on a zero or non-finite vector.
    explicit PureState(const Vector3c& amplitudes);
    PureState(Complex a0, Complex a1, Complex a2) : PureState(Vector3c(a0, a1, a2)) {}

    static PureState basis(int level);

    const Vector3c& amplitudes() const { return amps_; }
    Complex operator[](int level) const { return amps_(level); }
    double probability(int level) const { return std::norm(amps_(level)); }

private:
    struct Unchecked {};
    PureState(const Vector3c& amplitudes, Unchecked) : amps_(amplitudes) {}
    friend PureState apply_unitary(const Operator3&, const PureState&);

    Vector3c amps_;
};

// Hermitian, unit-trace, positive semidefinite 3x3 matrix.
class DensityMatrix {
public:
    // Validates hermiticity (1e-12), trace (1e-10) and eigenvalues (>= -1e-9).
    explicit DensityMatrix(const Operator3& m);
    explicit DensityMatrix(const PureState& s);

    // Wraps an integrator result. The caller has already bounded trace drift;
    // the matrix is symmetrized but otherwise stored as is.
    static DensityMatrix from_propagation(const Operator3& m);

    const Operator3& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }
    double population(int level) const { return m_(level, level).real(); }
    double trace() const { return m_.trace().real(); }
    double min_eigenvalue() const;

    // Eigenvector of the largest eigenvalue, phase fixed so that its first
    // non-negligible component is real and positive.
    PureState dominant_eigenvector() const;

private:
    struct Unchecked {};
    DensityMatrix(const Operator3& m, Unchecked) : m_(m) {}

    Operator3 m_;
};

Operator3 identity3();

// |k><k| + |l><l|
Operator3 subspace_identity(int k, int l);

// Pauli matrix `axis` embedded on the {k, l} subspace.
Operator3 subspace_pauli(Axis axis, int k, int l);

// Gell-Mann matrices lambda_1 .. lambda_8.
Operator3 gellmann(int index);

// exp(-i angle sigma^y_kl / 2), identity on the remaining level. Requires k < l.
Operator3 subspace_rotation_y(int k, int l, double angle);

// Ramsey beam splitter: a pi/(N+1) y-rotation on {|0>, |1>}.
Operator3 beam_splitter(int n);

// Pulse resonant with the 1-2 transition, rotation angle theta.
Operator3 b_pulse(double theta);

// Max-abs entry of U^dagger U - I.
double unitarity_defect(const Operator3& u);

// Throws DomainError if unitarity_defect(u) > 1e-10.
PureState apply_unitary(const Operator3& u, const PureState& s);
DensityMatrix apply_unitary(const Operator3& u, const DensityMatrix& rho);

// |<a|b>|, equal to 1 when the states agree up to global phase.
double overlap_modulus(const PureState& a, const PureState& b);

}  // namespace ifd
