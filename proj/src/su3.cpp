#include "ifd/su3.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "ifd/errors.hpp"

namespace ifd {

namespace {

void check_level(int level) {
    if (level < 0 || level > 2) {
        throw DomainError("level index must be 0, 1 or 2, got " + std::to_string(level));
    }
}

void check_pair(int k, int l) {
    check_level(k);
    check_level(l);
    if (k == l) throw DomainError("subspace levels must differ");
}

Operator3 outer(int k, int l) {
    Operator3 m = Operator3::Zero();
    m(k, l) = 1.0;
    return m;
}

}  // namespace

PureState::PureState(const Vector3c& amplitudes) {
    const double norm = amplitudes.norm();
    if (!std::isfinite(norm) || norm == 0.0) {
        throw DomainError("state vector must be finite and non-zero");
    }
    amps_ = amplitudes / norm;
}

PureState PureState::basis(int level) {
    check_level(level);
    Vector3c v = Vector3c::Zero();
    v(level) = 1.0;
    return PureState(v, Unchecked{});
}

DensityMatrix::DensityMatrix(const Operator3& m) : m_(m) {
    if (!m.allFinite()) throw DomainError("density matrix has non-finite entries");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw DomainError("density matrix is not Hermitian");
    }
    if (std::abs(m.trace().real() - 1.0) > 1e-10) {
        throw DomainError("density matrix trace differs from 1");
    }
    if (min_eigenvalue() < -1e-9) throw DomainError("density matrix has a negative eigenvalue");
}

DensityMatrix::DensityMatrix(const PureState& s)
    : m_(s.amplitudes() * s.amplitudes().adjoint()) {}

DensityMatrix DensityMatrix::from_propagation(const Operator3& m) {
    return DensityMatrix(Operator3(0.5 * (m + m.adjoint())), Unchecked{});
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Operator3> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

PureState DensityMatrix::dominant_eigenvector() const {
    Eigen::SelfAdjointEigenSolver<Operator3> es(m_);
    Vector3c v = es.eigenvectors().col(2);
    for (int i = 0; i < 3; ++i) {
        if (std::abs(v(i)) > 1e-12) {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    }
    return PureState(v);
}

Operator3 identity3() { return Operator3::Identity(); }

Operator3 subspace_identity(int k, int l) {
    check_pair(k, l);
    return outer(k, k) + outer(l, l);
}

Operator3 subspace_pauli(Axis axis, int k, int l) {
    check_pair(k, l);
    switch (axis) {
        case Axis::x:
            return outer(k, l) + outer(l, k);
        case Axis::y:
            return -kI * outer(k, l) + kI * outer(l, k);
        case Axis::z:
            return outer(k, k) - outer(l, l);
    }
    throw DomainError("unknown axis");
}

Operator3 gellmann(int index) {
    switch (index) {
        case 1: return subspace_pauli(Axis::x, 0, 1);
        case 2: return subspace_pauli(Axis::y, 0, 1);
        case 3: return subspace_pauli(Axis::z, 0, 1);
        case 4: return subspace_pauli(Axis::x, 0, 2);
        case 5: return subspace_pauli(Axis::y, 0, 2);
        case 6: return subspace_pauli(Axis::x, 1, 2);
        case 7: return subspace_pauli(Axis::y, 1, 2);
        case 8:
            return (subspace_pauli(Axis::z, 0, 2) + subspace_pauli(Axis::z, 1, 2)) /
                   std::numbers::sqrt3;
        default:
            throw DomainError("Gell-Mann index must be in 1..8, got " + std::to_string(index));
    }
}

Operator3 subspace_rotation_y(int k, int l, double angle) {
    check_pair(k, l);
    if (k > l) throw DomainError("subspace_rotation_y requires k < l");
    if (!std::isfinite(angle)) throw DomainError("rotation angle must be finite");
    const int rest = 3 - k - l;
    return std::cos(angle / 2) * subspace_identity(k, l) -
           kI * std::sin(angle / 2) * subspace_pauli(Axis::y, k, l) + outer(rest, rest);
}

Operator3 beam_splitter(int n) {
    if (n < 1) throw DomainError("beam splitter requires N >= 1");
    return subspace_rotation_y(0, 1, std::numbers::pi / (n + 1));
}

Operator3 b_pulse(double theta) { return subspace_rotation_y(1, 2, theta); }

double unitarity_defect(const Operator3& u) {
    return (u.adjoint() * u - Operator3::Identity()).cwiseAbs().maxCoeff();
}

PureState apply_unitary(const Operator3& u, const PureState& s) {
    if (unitarity_defect(u) > 1e-10) throw DomainError("operator is not unitary");
    return PureState(u * s.amplitudes(), PureState::Unchecked{});
}

DensityMatrix apply_unitary(const Operator3& u, const DensityMatrix& rho) {
    if (unitarity_defect(u) > 1e-10) throw DomainError("operator is not unitary");
    return DensityMatrix::from_propagation(u * rho.matrix() * u.adjoint());
}

double overlap_modulus(const PureState& a, const PureState& b) {
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace ifd
