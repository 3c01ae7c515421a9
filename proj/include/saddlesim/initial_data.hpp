#pragma once

#include <array>
#include <cmath>

#include "saddlesim/field.hpp"

namespace saddlesim {

/// Shape constants of the initial velocity family. Index k holds the
/// (epsilon, beta) pair numbered k+1.
struct InitialParams {
    std::array<double, 6> eps{1, 1, 1, 1, 1, 1};
    std::array<double, 6> beta{1, 1, 1, 1, 1, 1};
    bool swirl = true;
};

/// (s^2 + eps)^sigma
template <typename Scalar>
Scalar phi(Scalar s, Scalar eps, Scalar sigma) {
    if (!(eps > Scalar(0))) throw ParameterError("phi: eps must be positive");
    using std::pow;
    return pow(s * s + eps, sigma);
}

template <typename Scalar>
Scalar sign_or_zero(Scalar z) {
    return z > Scalar(0) ? Scalar(1) : (z < Scalar(0) ? Scalar(-1) : Scalar(0));
}

/// Hyperbolic swirling initial data centered at (r, z) = (0, 0):
///   u_z = phi(r, e1, -b1) phi(z, e2, -b2)
///   rho = phi(r, e3, -b3) phi(z, e4,  b4)
///   u_r = sign(z) rho u_z, with sign(0) = 0
///   u_theta = phi(r, e5, -b5) phi(z, e6, -b6), or 0 without swirl.
/// The result is a pre-stage state; the first solver step imposes no-slip
/// and the stabilized continuity equation.
template <typename Scalar = double>
FieldState<Scalar> initial_field(const InitialParams &params, const MeridianGrid<Scalar> &grid) {
    for (int k = 0; k < 6; ++k)
        if (!(params.eps[k] > 0.0))
            throw ParameterError("initial data: eps" + std::to_string(k + 1) + " must be positive");

    auto e = [&](int k) { return Scalar(params.eps[k - 1]); };
    auto b = [&](int k) { return Scalar(params.beta[k - 1]); };

    auto s = FieldState<Scalar>::zeros(grid);
    s.pre_stage = true;
    for (int j = 0; j < grid.nz(); ++j) {
        const Scalar z = grid.z(j);
        for (int i = 0; i < grid.nr(); ++i) {
            const Scalar r = grid.r(i);
            const int n = grid.index(i, j);
            const Scalar uz = phi(r, e(1), -b(1)) * phi(z, e(2), -b(2));
            const Scalar rho = phi(r, e(3), -b(3)) * phi(z, e(4), b(4));
            s.u_z(n) = uz;
            s.u_r(n) = sign_or_zero(z) * rho * uz;
            s.u_theta(n) = params.swirl ? phi(r, e(5), -b(5)) * phi(z, e(6), -b(6)) : Scalar(0);
        }
    }
    return s;
}

} // namespace saddlesim
