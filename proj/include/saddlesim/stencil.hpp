#pragma once

#include <array>
#include <vector>

#include "saddlesim/grid.hpp"

namespace saddlesim::stencil {

/// Three-point weights on a nonuniform line: value = sum c[k] * f[first + k].
template <typename Scalar>
struct Weights3 {
    int first = 0;
    std::array<Scalar, 3> c{};
};

/// Second-order first derivative at node k of `x`: central inside, one-sided
/// at both ends.
template <typename Scalar>
Weights3<Scalar> first_derivative(const std::vector<Scalar> &x, int k) {
    const int n = static_cast<int>(x.size());
    Weights3<Scalar> w;
    if (n == 2) {
        const Scalar h = x[1] - x[0];
        w.first = 0;
        w.c = {-1 / h, 1 / h, Scalar(0)};
        return w;
    }
    if (k == 0) {
        const Scalar a = x[1] - x[0], b = x[2] - x[0];
        w.first = 0;
        w.c = {-(a + b) / (a * b), b / (a * (b - a)), -a / (b * (b - a))};
    } else if (k == n - 1) {
        const Scalar a = x[n - 1] - x[n - 2], b = x[n - 1] - x[n - 3];
        w.first = n - 3;
        w.c = {a / (b * (b - a)), -b / (a * (b - a)), (a + b) / (a * b)};
    } else {
        const Scalar hm = x[k] - x[k - 1], hp = x[k + 1] - x[k];
        w.first = k - 1;
        w.c = {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
    }
    return w;
}

/// Second derivative at interior node k (1 <= k <= n-2).
template <typename Scalar>
Weights3<Scalar> second_derivative(const std::vector<Scalar> &x, int k) {
    const Scalar hm = x[k] - x[k - 1], hp = x[k + 1] - x[k];
    Weights3<Scalar> w;
    w.first = k - 1;
    w.c = {2 / (hm * (hm + hp)), -2 / (hm * hp), 2 / (hp * (hm + hp))};
    return w;
}

/// d/dr of a nodal field at node (i, j).
template <typename Scalar, typename Derived>
Scalar d_dr(const MeridianGrid<Scalar> &g, const Eigen::MatrixBase<Derived> &f, int i, int j) {
    const auto w = first_derivative(g.r_nodes(), i);
    Scalar acc{0};
    for (int k = 0; k < 3; ++k)
        if (w.c[k] != Scalar(0)) acc += w.c[k] * f(g.index(w.first + k, j));
    return acc;
}

/// d/dz of a nodal field at node (i, j).
template <typename Scalar, typename Derived>
Scalar d_dz(const MeridianGrid<Scalar> &g, const Eigen::MatrixBase<Derived> &f, int i, int j) {
    const auto w = first_derivative(g.z_nodes(), j);
    Scalar acc{0};
    for (int k = 0; k < 3; ++k)
        if (w.c[k] != Scalar(0)) acc += w.c[k] * f(g.index(i, w.first + k));
    return acc;
}

} // namespace saddlesim::stencil
