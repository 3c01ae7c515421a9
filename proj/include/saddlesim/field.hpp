#pragma once

#include <array>
#include <cmath>

#include "saddlesim/grid.hpp"

namespace saddlesim {

/// Nodal unknowns (u_r, u_theta, u_z, p) at one time level.
///
/// A pre-stage state is the raw initial data: it need not satisfy the
/// no-slip or divergence constraints. Every state produced by the solver has
/// pre_stage == false.
template <typename Scalar = double>
struct FieldState {
    VectorX<Scalar> u_r;
    VectorX<Scalar> u_theta;
    VectorX<Scalar> u_z;
    VectorX<Scalar> p;
    Scalar t{0};
    bool pre_stage = false;

    static FieldState zeros(const MeridianGrid<Scalar> &grid, Scalar t = Scalar(0)) {
        const int n = grid.size();
        FieldState s;
        s.u_r = VectorX<Scalar>::Zero(n);
        s.u_theta = VectorX<Scalar>::Zero(n);
        s.u_z = VectorX<Scalar>::Zero(n);
        s.p = VectorX<Scalar>::Zero(n);
        s.t = t;
        return s;
    }

    bool all_finite() const {
        return u_r.allFinite() && u_theta.allFinite() && u_z.allFinite() && p.allFinite();
    }

    /// |v| at every node.
    VectorX<Scalar> speed() const {
        return (u_r.array().square() + u_theta.array().square() + u_z.array().square()).sqrt().matrix();
    }
};

/// Bilinear interpolation of a nodal field at a located point.
template <typename Scalar, typename Derived>
Scalar bilinear(const MeridianGrid<Scalar> &grid, const Eigen::MatrixBase<Derived> &field,
                const CellLocation<Scalar> &loc) {
    const int n00 = grid.index(loc.i, loc.j);
    const int n10 = grid.index(loc.i + 1, loc.j);
    const int n01 = grid.index(loc.i, loc.j + 1);
    const int n11 = grid.index(loc.i + 1, loc.j + 1);
    const Scalar s = loc.s, t = loc.t;
    return (1 - s) * (1 - t) * field(n00) + s * (1 - t) * field(n10) + (1 - s) * t * field(n01) +
           s * t * field(n11);
}

template <typename Scalar, typename Derived>
Scalar bilinear(const MeridianGrid<Scalar> &grid, const Eigen::MatrixBase<Derived> &field, Scalar r, Scalar z) {
    return bilinear(grid, field, grid.locate(r, z));
}

template <typename Scalar>
struct Velocity {
    Scalar u_r{0};
    Scalar u_theta{0};
    Scalar u_z{0};
};

/// Velocity at an arbitrary point of the closed domain; exact at nodes and
/// for fields affine in (r, z). Throws OutOfDomainError outside.
template <typename Scalar>
Velocity<Scalar> interpolate(const FieldState<Scalar> &state, const MeridianGrid<Scalar> &grid, Scalar r, Scalar z) {
    const auto loc = grid.locate(r, z);
    return {bilinear(grid, state.u_r, loc), bilinear(grid, state.u_theta, loc), bilinear(grid, state.u_z, loc)};
}

template <typename Scalar>
struct MeridianPoint {
    Scalar r{0};
    Scalar z{0};
};

/// Departure point of the characteristic through `(r, z)` over one step:
/// X = x - (u_r, u_z)(x) * tau using meridional velocity only. A foot that
/// leaves the closed domain is pulled back to where the segment [x, X]
/// crosses the boundary.
template <typename Scalar>
MeridianPoint<Scalar> clamp_departure(const MeridianGrid<Scalar> &grid, Scalar r, Scalar z, Scalar foot_r,
                                      Scalar foot_z) {
    Scalar s{1};
    const Scalar dr = foot_r - r, dz = foot_z - z;
    if (foot_r < grid.r_min()) s = std::min(s, (grid.r_min() - r) / dr);
    if (foot_r > grid.r_max()) s = std::min(s, (grid.r_max() - r) / dr);
    if (foot_z < grid.z_min()) s = std::min(s, (grid.z_min() - z) / dz);
    if (foot_z > grid.z_max()) s = std::min(s, (grid.z_max() - z) / dz);
    s = std::max(s, Scalar(0));
    MeridianPoint<Scalar> out{r + s * dr, z + s * dz};
    // rounding can leave the intersection a few ulps outside
    out.r = std::clamp(out.r, grid.r_min(), grid.r_max());
    out.z = std::clamp(out.z, grid.z_min(), grid.z_max());
    return out;
}

template <typename Scalar>
MeridianPoint<Scalar> backtrack(const FieldState<Scalar> &state, const MeridianGrid<Scalar> &grid, Scalar r, Scalar z,
                                Scalar tau) {
    const auto v = interpolate(state, grid, r, z);
    return clamp_departure(grid, r, z, r - v.u_r * tau, z - v.u_z * tau);
}

} // namespace saddlesim
