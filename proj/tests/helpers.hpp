#pragma once

#include <random>

#include <doctest.h>

#include "ifd/su3.hpp"

namespace ifd::test {

inline double max_abs_diff(const Operator3& a, const Operator3& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline void check_matrix_near(const Operator3& actual, const Operator3& expected, double tol) {
    INFO("actual:\n" << actual << "\nexpected:\n" << expected);
    CHECK(max_abs_diff(actual, expected) <= tol);
}

inline Operator3 random_matrix(std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Operator3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = Complex(d(rng), d(rng));
    return m;
}

inline DensityMatrix random_density(std::mt19937_64& rng) {
    const Operator3 a = random_matrix(rng);
    Operator3 rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(Operator3(0.5 * (rho + rho.adjoint())));
}

inline PureState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    return PureState(Complex(d(rng), d(rng)), Complex(d(rng), d(rng)), Complex(d(rng), d(rng)));
}

}  // namespace ifd::test
