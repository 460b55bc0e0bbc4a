#pragma once

// Majorana stars of a qutrit read as a spin-1 state with |0>, |1>, |2>
// identified as m = +1, 0, -1.

#include <vector>

#include <Eigen/Dense>

#include "ifd/su3.hpp"

namespace ifd {

using Vector3d = Eigen::Vector3d;

struct MajoranaPolynomialCoeffs {
    Complex a0, a1, a2;  // a0 z^2 + a1 z + a2
};

// Unordered pair; majorana_stars returns it sorted by z, then -y, then -x.
struct MajoranaStars {
    Vector3d s1, s2;
};

MajoranaPolynomialCoeffs majorana_polynomial(const PureState& s);

// Unit vector of the inverse stereographic projection of a finite root.
Vector3d project_root(Complex zeta);

MajoranaStars majorana_stars(const PureState& s);

// Inverse of majorana_stars up to a global phase. A star at the south pole
// contributes a degree drop.
PureState state_from_stars(const MajoranaStars& stars);

// Relabels each step's pair to minimise the summed great-circle displacement
// from the previous step; ties keep the current labels.
std::vector<MajoranaStars> star_trajectory(const std::vector<PureState>& states);

double great_circle(const Vector3d& a, const Vector3d& b);

}  // namespace ifd
