#pragma once

#include <cmath>
#include <vector>

#include "saddlesim/field.hpp"
#include "saddlesim/stencil.hpp"

namespace saddlesim {

/// Cylindrical vorticity components at the nodes.
template <typename Scalar = double>
struct VorticityField {
    VectorX<Scalar> w_r;
    VectorX<Scalar> w_theta;
    VectorX<Scalar> w_z;

    VectorX<Scalar> magnitude() const {
        return (w_r.array().square() + w_theta.array().square() + w_z.array().square()).sqrt().matrix();
    }
};

/// w_r = -d_z u_theta, w_theta = d_z u_r - d_r u_z, w_z = d_r u_theta + u_theta / r
/// with the axis limit w_z = 2 d_r u_theta. Second-order differences, one-sided
/// on the boundary. On a no-slip wall the tangential velocities vanish, so
/// only the wall-normal derivatives survive there.
template <typename Scalar>
VorticityField<Scalar> vorticity(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g) {
    const int n = g.size();
    VorticityField<Scalar> w{VectorX<Scalar>(n), VectorX<Scalar>(n), VectorX<Scalar>(n)};
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            const int k = g.index(i, j);
            const Scalar r = g.r(i);
            const Scalar dr_ut = stencil::d_dr(g, s.u_theta, i, j);
            w.w_r(k) = -stencil::d_dz(g, s.u_theta, i, j);
            w.w_theta(k) = stencil::d_dz(g, s.u_r, i, j) - stencil::d_dr(g, s.u_z, i, j);
            w.w_z(k) = r > Scalar(0) ? dr_ut + s.u_theta(k) / r : 2 * dr_ut;
        }
    return w;
}

/// Unit vorticity direction with a validity mask.
template <typename Scalar = double>
struct DirectionField {
    VectorX<Scalar> xi_r;
    VectorX<Scalar> xi_theta;
    VectorX<Scalar> xi_z;
    std::vector<bool> valid;
};

/// xi = w / |w| where |w| exceeds `floor` times the global max |w|; other
/// nodes are flagged invalid and carry zeros.
template <typename Scalar>
DirectionField<Scalar> direction(const VorticityField<Scalar> &w, Scalar floor = Scalar(1e-8)) {
    if (floor < Scalar(0)) throw ParameterError("direction floor must be non-negative");
    const VectorX<Scalar> mag = w.magnitude();
    const auto n = mag.size();
    DirectionField<Scalar> d{VectorX<Scalar>::Zero(n), VectorX<Scalar>::Zero(n), VectorX<Scalar>::Zero(n),
                             std::vector<bool>(static_cast<std::size_t>(n), false)};
    const Scalar peak = n ? mag.maxCoeff() : Scalar(0);
    const Scalar cut = floor * peak;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(mag(k) > cut) || mag(k) == Scalar(0)) continue;
        d.xi_r(k) = w.w_r(k) / mag(k);
        d.xi_theta(k) = w.w_theta(k) / mag(k);
        d.xi_z(k) = w.w_z(k) / mag(k);
        d.valid[static_cast<std::size_t>(k)] = true;
    }
    return d;
}

/// Nodal (1/r) d_r(r u_r) + d_z u_z, with 2 d_r u_r + d_z u_z on the axis.
template <typename Scalar>
VectorX<Scalar> divergence(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g) {
    VectorX<Scalar> div(g.size());
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            const int k = g.index(i, j);
            const Scalar r = g.r(i);
            const Scalar drur = stencil::d_dr(g, s.u_r, i, j);
            const Scalar radial = r > Scalar(0) ? drur + s.u_r(k) / r : 2 * drur;
            div(k) = radial + stencil::d_dz(g, s.u_z, i, j);
        }
    return div;
}

/// Volume-weighted L2 norm of the discrete divergence.
template <typename Scalar>
Scalar divergence_residual(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g) {
    using std::sqrt;
    const VectorX<Scalar> div = divergence(s, g);
    return sqrt((g.volume_weights().array() * div.array().square()).sum());
}

/// (1/2) int |v|^2 dV over the cylinder, dV = 2 pi r dr dz.
template <typename Scalar>
Scalar kinetic_energy(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g) {
    return Scalar(0.5) * (g.volume_weights().array() *
                          (s.u_r.array().square() + s.u_theta.array().square() + s.u_z.array().square()))
                             .sum();
}

template <typename Scalar>
struct MaxVelocity {
    Scalar value{0};
    Scalar r{0};
    Scalar z{0};
    int node = 0;
};

/// Largest |v| over the nodes; ties go to the smallest r, then smallest z.
template <typename Scalar>
MaxVelocity<Scalar> max_velocity(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g) {
    const VectorX<Scalar> speed = s.speed();
    MaxVelocity<Scalar> best;
    best.value = Scalar(-1);
    // r outer, z inner: the first strict maximum found wins ties
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) {
            const int k = g.index(i, j);
            if (speed(k) > best.value) best = {speed(k), g.r(i), g.z(j), k};
        }
    return best;
}

} // namespace saddlesim
