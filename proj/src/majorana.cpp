#include "ifd/majorana.hpp"

#include <algorithm>
#include <cmath>

#include "ifd/errors.hpp"

namespace ifd {

namespace {

const Vector3d kSouth(0.0, 0.0, -1.0);

bool star_before(const Vector3d& a, const Vector3d& b) {
    if (a.z() != b.z()) return a.z() < b.z();
    if (a.y() != b.y()) return a.y() > b.y();
    return a.x() > b.x();
}

MajoranaStars ordered(const Vector3d& a, const Vector3d& b) {
    return star_before(b, a) ? MajoranaStars{b, a} : MajoranaStars{a, b};
}

// Stereographic preimage of a non-south unit vector.
Complex unproject(const Vector3d& v) {
    return Complex(v.x(), v.y()) / (1.0 + v.z());
}

}  // namespace

MajoranaPolynomialCoeffs majorana_polynomial(const PureState& s) {
    const double r2 = std::sqrt(2.0);
    return {s[0] / r2, -s[1], s[2] / r2};
}

Vector3d project_root(Complex zeta) {
    const double m2 = std::norm(zeta);
    const double d = 1.0 + m2;
    return Vector3d(2.0 * zeta.real() / d, 2.0 * zeta.imag() / d, (1.0 - m2) / d);
}

MajoranaStars majorana_stars(const PureState& s) {
    const auto [a0, a1, a2] = majorana_polynomial(s);
    const double scale = std::max({std::abs(a0), std::abs(a1), std::abs(a2)});
    const double cut = 1e-12 * scale;
    if (std::abs(a0) < cut) {
        // At least one root at infinity.
        if (std::abs(a1) < cut) return {kSouth, kSouth};
        return ordered(project_root(-a2 / a1), kSouth);
    }
    // Stable quadratic roots.
    const Complex disc = std::sqrt(a1 * a1 - 4.0 * a0 * a2);
    const Complex q1 = -a1 + disc;
    const Complex q2 = -a1 - disc;
    const Complex q = std::abs(q1) >= std::abs(q2) ? q1 : q2;
    if (std::abs(q) == 0.0) {
        // a1 = 0 and a2 = 0: double root at the origin.
        return {project_root(0.0), project_root(0.0)};
    }
    const Complex z1 = q / (2.0 * a0);
    const Complex z2 = (2.0 * a2) / q;
    return ordered(project_root(z1), project_root(z2));
}

PureState state_from_stars(const MajoranaStars& stars) {
    // a0 (z - z1)(z - z2) with a0 = 1, or a degree-1 / degree-0 polynomial
    // when stars sit at the south pole.
    const bool south1 = (stars.s1 - kSouth).norm() < 1e-12;
    const bool south2 = (stars.s2 - kSouth).norm() < 1e-12;
    Complex a0, a1, a2;
    if (south1 && south2) {
        a0 = 0.0;
        a1 = 0.0;
        a2 = 1.0;
    } else if (south1 || south2) {
        const Complex z = unproject(south1 ? stars.s2 : stars.s1);
        a0 = 0.0;
        a1 = 1.0;
        a2 = -z;
    } else {
        const Complex z1 = unproject(stars.s1);
        const Complex z2 = unproject(stars.s2);
        a0 = 1.0;
        a1 = -(z1 + z2);
        a2 = z1 * z2;
    }
    const double r2 = std::sqrt(2.0);
    return PureState(a0 * r2, -a1, a2 * r2);
}

double great_circle(const Vector3d& a, const Vector3d& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

std::vector<MajoranaStars> star_trajectory(const std::vector<PureState>& states) {
    std::vector<MajoranaStars> out;
    out.reserve(states.size());
    for (const auto& s : states) {
        MajoranaStars next = majorana_stars(s);
        if (!out.empty()) {
            const MajoranaStars& prev = out.back();
            const double keep = great_circle(prev.s1, next.s1) + great_circle(prev.s2, next.s2);
            const double swap = great_circle(prev.s1, next.s2) + great_circle(prev.s2, next.s1);
            if (swap < keep) std::swap(next.s1, next.s2);
        }
        out.push_back(next);
    }
    return out;
}

}  // namespace ifd
